#include "pwafix/solver.hpp"

#include <set>

#include <boost/integer/common_factor_rt.hpp>

namespace pwafix {

Policy initial_policy(const PwaSystem& sys) {
  Vec w = Vec::Zero(sys.dim());
  for (int k = 0; k < 3; ++k) w = eval(sys, w);
  return argmin_policy(sys, w);
}

std::optional<Policy> improve_strict(const PwaSystem& sys, const Vec& u) {
  const Vec fu = eval(sys, u);
  if (!leq(fu, u))
    throw SolveError(SolveError::Kind::InvariantBroken,
                     "f(u) <= u fails at u = " + to_string(u) + ", f(u) = " + to_string(fu));
  if (fu == u) return std::nullopt;
  return argmin_policy(sys, u);
}

MinimalityStep improve_minimality(const PwaSystem& sys, const Vec& u, int cap) {
  if (eval(sys, u) != u)
    throw SolveError(SolveError::Kind::InvariantBroken,
                     "minimality step needs a fixed point, got " + to_string(u));
  const ActiveSets active = active_sets(sys, u);
  const HomogeneousSystem g = semidifferential(sys, active);
  SpectralOutcome outcome = negative_cone_test(g, cap);

  if (outcome.radius_lt_one()) return Minimal{std::move(outcome)};
  if (outcome.inconclusive()) return Undecided{std::move(outcome)};

  Vec h = std::get<UnitRadius>(outcome.result).h;
  Policy next;
  for (Index j = 0; j < sys.dim(); ++j) {
    const auto& acts = active.coord(j);
    const auto values = action_values(g.system(), j, h);
    const auto best = std::min_element(values.begin(), values.end()) - values.begin();
    next.choice.push_back(acts[static_cast<std::size_t>(best)].action);
  }
  return NewPolicy{std::move(next), std::move(h)};
}

Rat vertex_bound(const PwaSystem& sys) {
  using Int = boost::multiprecision::mpz_int;
  Int widest = 1;
  for (Index j = 0; j < sys.dim(); ++j)
    for (const auto& group : sys.coord(j))
      for (const auto& term : group.terms) {
        // Row (e_j - w, c) of a value-determination program, scaled to integers.
        Vec row(sys.dim() + 1);
        row.head(sys.dim()) = -term.grad;
        row[j] += 1;
        row[sys.dim()] = term.constant;
        Int scale = 1;
        for (const Rat& v : row) scale = boost::integer::lcm(scale, Int(denominator(v)));
        Rat norm = 0;
        for (const Rat& v : row) norm += abs(v);
        Int scaled = numerator(Rat(norm * Rat(scale)));
        if (scaled > widest) widest = scaled;
      }
  return Rat(boost::multiprecision::pow(widest, static_cast<unsigned>(sys.dim()))) + 1;
}

namespace {

PwaSystem with_cap(const PwaSystem& sys, const Rat& cap) {
  std::vector<PwaSystem::Coordinate> coords = sys.coords();
  for (auto& coord : coords) coord.push_back(MaxGroup{{AffineTerm{Vec::Zero(sys.dim()), cap}}});
  return PwaSystem(sys.dim(), std::move(coords));
}

// Thrown when the very first value determination finds no finite fixed point.
struct InitialPolicyInfeasible {
  SolveError error;
};

Solution iterate(const PwaSystem& sys, Policy policy, const SolveOptions& opts) {
  const int cap = opts.oracle2_cap > 0 ? opts.oracle2_cap : default_spectral_cap(sys.dim());
  const std::size_t limit =
      opts.max_iterations > 0 ? opts.max_iterations : policy_count(sys, std::size_t{1} << 40) + 1;

  Solution sol;
  std::set<Policy> visited;
  std::optional<Vec> previous;
  for (std::size_t round = 0;; ++round) {
    if (round >= limit)
      throw SolveError(SolveError::Kind::InvariantBroken,
                       "iteration limit " + std::to_string(limit) + " reached");
    if (!visited.insert(policy).second)
      throw SolveError(SolveError::Kind::InvariantBroken,
                       "policy " + to_string(policy) + " repeated in round " + std::to_string(round));

    const PolicySystem ps = restrict(sys, policy);
    if (opts.on_value_determination) opts.on_value_determination(round, policy, build_lp(ps));
    Vec u;
    try {
      u = smallest_fixed_point_policy(ps);
    } catch (const SolveError& e) {
      if (round == 0 && e.kind() == SolveError::Kind::NoFiniteFixedPoint)
        throw InitialPolicyInfeasible{e};
      throw;
    }
    if (previous && !less(u, *previous))
      throw SolveError(SolveError::Kind::MonotonicityViolation,
                       "round " + std::to_string(round) + ": value " + to_string(u) +
                           " is not strictly below " + to_string(*previous));

    auto record = [&](Improvement imp) {
      if (opts.record_trace) sol.trace.push_back({policy, u, std::move(imp)});
    };

    if (auto next = improve_strict(sys, u)) {
      record(Strict{});
      policy = std::move(*next);
      previous = std::move(u);
      continue;
    }

    MinimalityStep step = improve_minimality(sys, u, cap);
    if (auto* done = std::get_if<Minimal>(&step)) {
      record(Terminal{});
      sol.u = std::move(u);
      sol.certificate = std::move(done->certificate);
      sol.policy = std::move(policy);
      return sol;
    }
    if (auto* np = std::get_if<NewPolicy>(&step)) {
      record(Descent{np->h});
      policy = std::move(np->policy);
      previous = std::move(u);
      continue;
    }
    throw SolveError(SolveError::Kind::Undecidable,
                     "negative-cone test inconclusive after " +
                         std::to_string(std::get<Undecided>(step).outcome.iterations) +
                         " iterations at u = " + to_string(u));
  }
}

}  // namespace

Solution solve_smallest(const PwaSystem& sys, const SolveOptions& opts) {
  require_valid(sys);
  Policy start = opts.initial              ? *opts.initial
                 : opts.seed == SeedPolicy::First ? Policy{std::vector<Index>(
                                                        static_cast<std::size_t>(sys.dim()), 0)}
                                                  : initial_policy(sys);
  try {
    return iterate(sys, std::move(start), opts);
  } catch (const InitialPolicyInfeasible& infeasible) {
    if (!opts.capped_fallback) throw infeasible.error;
  }

  const PwaSystem capped = with_cap(sys, vertex_bound(sys));
  Policy all_cap;
  for (Index j = 0; j < sys.dim(); ++j) all_cap.choice.push_back(sys.num_actions(j));
  Solution sol;
  try {
    sol = iterate(capped, std::move(all_cap), opts);
  } catch (const InitialPolicyInfeasible& e) {
    throw e.error;
  }
  sol.capped = true;

  const Vec fu = eval(sys, sol.u);
  if (fu != sol.u) {
    std::string coords;
    for (Index j = 0; j < sys.dim(); ++j)
      if (fu[j] != sol.u[j]) coords += (coords.empty() ? "" : ", ") + std::to_string(j + 1);
    throw SolveError(SolveError::Kind::NoFiniteFixedPoint,
                     "no finite fixed point: coordinates " + coords + " grow without bound");
  }
  for (Index j = 0; j < sys.dim(); ++j)
    if (sol.policy.choice[static_cast<std::size_t>(j)] >= sys.num_actions(j))
      throw SolveError(SolveError::Kind::InvariantBroken, "final policy uses the cap action");
  return sol;
}

}  // namespace pwafix
