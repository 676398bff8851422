// Invariants checked on random systems.
#include <doctest.h>

#include "pwafix/equations.hpp"
#include "pwafix/solver.hpp"
#include "support/random_systems.hpp"

using namespace pwafix;
using namespace pwafix::testing;

namespace {

PwaSystem random_system(Rng& rng) {
  return rng.coin() ? random_unit_gradient(rng) : random_rational(rng, rng.uniform(1, 5));
}

Vec random_point(Rng& rng, Index d) { return random_int_vec(rng, d, -40, 40) / Rat(rng.uniform(1, 4)); }

}  // namespace

TEST_CASE("f is monotone and sup-norm nonexpansive") {
  Rng rng(101);
  for (int i = 0; i < 300; ++i) {
    const PwaSystem f = random_system(rng);
    const Vec x = random_point(rng, f.dim());
    const Vec y = random_point(rng, f.dim());
    const Vec lo = x.cwiseMin(y);
    CHECK(leq(eval(f, lo), eval(f, x)));
    CHECK(sup_norm(eval(f, x) - eval(f, y)) <= sup_norm(x - y));
  }
}

TEST_CASE("f is the minimum over policies of the policy maps") {
  Rng rng(103);
  for (int i = 0; i < 60; ++i) {
    const PwaSystem f = random_unit_gradient(rng, {3, 2, 2, 10});
    const Vec x = random_point(rng, f.dim());
    const Vec fx = eval(f, x);
    bool attained = false;
    for_each_policy(f, [&](const Policy& p) {
      const Vec gx = eval(restrict(f, p), x);
      CHECK(leq(fx, gx));
      attained = attained || gx == fx;
    });
    CHECK(attained);
    CHECK(eval(restrict(f, argmin_policy(f, x)), x) == fx);
  }
}

TEST_CASE("Kleene iterates from below stay below the smallest fixed point") {
  Rng rng(107);
  int solved = 0;
  for (int i = 0; i < 100; ++i) {
    const PwaSystem f = random_unit_gradient(rng);
    Solution sol;
    try {
      sol = solve_smallest(f);
    } catch (const SolveError& e) {
      CHECK(e.kind() == SolveError::Kind::NoFiniteFixedPoint);
      continue;
    }
    ++solved;
    CHECK(eval(f, sol.u) == sol.u);
    const KleeneResult k = kleene_lfp(f, constant_vec(f.dim(), min_constant(f) - 1), 25);
    CHECK(leq(k.point, sol.u));
  }
  CHECK(solved > 50);
}

TEST_CASE("value-determination LP feasible set is the post-fixed-point set") {
  Rng rng(109);
  for (int i = 0; i < 100; ++i) {
    const PwaSystem f = random_rational(rng, rng.uniform(1, 4));
    Policy p;
    for (Index j = 0; j < f.dim(); ++j) p.choice.push_back(rng.uniform(0, static_cast<int>(f.num_actions(j)) - 1));
    const PolicySystem g = restrict(f, p);
    const LinearProgram lp = build_lp(g);
    const Vec x = random_point(rng, f.dim());
    bool feasible = true;
    for (const auto& row : lp.rows) feasible = feasible && row.coeffs.dot(x) >= row.rhs;
    CHECK(feasible == leq(eval(g, x), x));
  }
}

TEST_CASE("normal form and printing preserve the map") {
  Rng rng(113);
  for (int i = 0; i < 60; ++i) {
    const PwaSystem f = random_rational(rng, rng.uniform(1, 4));
    NamedSystem ns{f, {}};
    for (Index j = 0; j < f.dim(); ++j) ns.names.push_back("v" + std::to_string(j));
    const std::string text = print_equations(ns);
    const ExprSystem tree = parse_equation_exprs(text);
    const NamedSystem back = parse_equations(text);
    CHECK(back.system == f);
    CHECK(print_equations(back) == text);
    for (int k = 0; k < 5; ++k) {
      const Vec x = random_point(rng, f.dim());
      const Vec fx = eval(f, x);
      for (Index j = 0; j < f.dim(); ++j) CHECK(tree.equations[static_cast<std::size_t>(j)](x) == fx[j]);
    }
  }
}

TEST_CASE("policy iteration values decrease strictly") {
  Rng rng(127);
  for (int i = 0; i < 100; ++i) {
    const PwaSystem f = random_system(rng);
    Solution sol;
    try {
      sol = solve_smallest(f);
    } catch (const SolveError&) {
      continue;
    }
    REQUIRE_FALSE(sol.trace.empty());
    for (std::size_t r = 1; r < sol.trace.size(); ++r)
      CHECK(less(sol.trace[r].value, sol.trace[r - 1].value));
    CHECK(std::holds_alternative<Terminal>(sol.trace.back().improvement));
    CHECK(sol.trace.back().value == sol.u);
    CHECK(sol.certificate.radius_lt_one());
  }
}
