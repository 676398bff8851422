#include <doctest.h>

#include "pwafix/core.hpp"
#include "support/fixtures.hpp"
#include "support/random_systems.hpp"

using namespace pwafix;
using namespace pwafix::testing;

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3") == Rat(3));
  CHECK(parse_rational("-7/14") == Rat(-1, 2));
  CHECK(parse_rational("0.125") == Rat(1, 8));
  CHECK(parse_rational("010") == Rat(10));
  CHECK(parse_rational("-.5") == Rat(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK(to_string(Rat(-3, 6)) == "-1/2");
  CHECK(to_decimal(Rat(2, 3)) == "0.66666666666666666667");
}

TEST_CASE("componentwise order helpers") {
  const Vec a = vec({0, 1});
  const Vec b = vec({0, 2});
  CHECK(leq(a, b));
  CHECK(less(a, b));
  CHECK_FALSE(less(a, a));
  CHECK_FALSE(strictly_less(a, b));
  CHECK(strictly_less(a, vec({1, 2})));
  CHECK(sup_norm(vec({-3, 2})) == 3);
}

TEST_CASE("validate_system") {
  SUBCASE("example system is valid") { CHECK(validate_system(example().system).empty()); }
  SUBCASE("identity is valid") {
    PwaSystem id(1, {{MaxGroup{{AffineTerm{vec({1}), 0}}}}});
    CHECK(validate_system(id).empty());
  }
  SUBCASE("gradient sum above one") {
    PwaSystem s(1, {{MaxGroup{{AffineTerm{vec({Rat(3, 2)}), 0}}}}});
    const auto report = validate_system(s);
    REQUIRE(report.size() == 1);
    CHECK(report[0].kind == Violation::Kind::GradientSumAboveOne);
    CHECK(report[0].message.find("gradient sum 3/2 > 1 at coord 1") != std::string::npos);
    CHECK_THROWS_AS(require_valid(s), InvalidSystem);
  }
  SUBCASE("every violation is listed") {
    PwaSystem s(2, {{MaxGroup{{AffineTerm{vec({-1, 0}), 0}}}, MaxGroup{}},
                    {MaxGroup{{AffineTerm{vec({1}), 0}}}}});
    const auto report = validate_system(s);
    REQUIRE(report.size() == 3);
    CHECK(report[0].kind == Violation::Kind::NegativeGradient);
    CHECK(report[1].kind == Violation::Kind::EmptyGroup);
    CHECK(report[2].kind == Violation::Kind::GradientLength);
  }
  SUBCASE("empty action set and zero dimension") {
    CHECK(validate_system(PwaSystem(1, {{}})).front().kind == Violation::Kind::EmptyActionSet);
    CHECK(validate_system(PwaSystem(0, {})).front().kind == Violation::Kind::ZeroDimension);
  }
  CHECK_THROWS_AS(PwaSystem(2, {{}}), DimensionMismatch);
}

TEST_CASE("eval") {
  const NamedSystem ex = example();
  CHECK(eval(ex.system, example_u0()) == example_u0());
  CHECK(eval(ex.system, example_u1()) == example_u1());
  const Vec zero = Vec::Zero(12);
  CHECK(eval(ex.system, zero) == example_direct(zero));

  const PwaSystem c = system_of("var a, b; a = 3; b = -1/2;");
  CHECK(eval(c, vec({100, -100})) == vec({3, Rat(-1, 2)}));
  CHECK_THROWS_AS(eval(c, vec({1})), DimensionMismatch);
}

TEST_CASE("restrict and argmin_policy") {
  const PwaSystem f = system_of("var a, b; a = min(max(b, 0), 5); b = max(1/2*a + 1, 0);");
  const PolicySystem ps = restrict(f, Policy{{0, 0}});
  const PwaSystem expected = system_of("var a, b; a = max(b, 0); b = max(1/2*a + 1, 0);");
  CHECK(ps.system() == expected);
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const Vec x = random_int_vec(rng, 2, -20, 20) / Rat(3);
    CHECK(eval(ps, x) == eval(expected, x));
  }
  CHECK_THROWS_AS(restrict(f, Policy{{2, 0}}), IndexOutOfRange);
  CHECK_THROWS_AS(restrict(f, Policy{{0}}), DimensionMismatch);

  // Ties go to the lowest index.
  CHECK(argmin_policy(f, vec({0, 5})) == Policy{{0, 0}});
  CHECK(argmin_policy(f, vec({0, 7})) == Policy{{1, 0}});

  const PolicySystem whole = restrict(example().system, example_pi0());
  CHECK(eval(whole, example_u0()) == example_u0());

  const PwaSystem single = system_of("var a; a = max(1/2*a, 1);");
  CHECK(restrict(single, Policy{{0}}).system() == single);
  CHECK_THROWS_AS(PolicySystem{f}, Error);
}

TEST_CASE("policy_count saturates") {
  const NamedSystem ex = example();
  CHECK(policy_count(ex.system, 1000) == 64);
  CHECK(policy_count(ex.system, 10) == 10);
}

TEST_CASE("kleene_lfp") {
  const NamedSystem ex = example();
  const KleeneResult r = kleene_lfp(ex.system, constant_vec(12, -100), 1000);
  CHECK(r.converged);
  CHECK(r.point == example_u1());

  const PwaSystem c = system_of("var a; a = 4;");
  const KleeneResult rc = kleene_lfp(c, vec({-50}), 10);
  CHECK(rc.converged);
  CHECK(rc.iterations == 1);
  CHECK(rc.point == vec({4}));

  // x = x/2 + 1 is approached geometrically and never reached exactly.
  const PwaSystem g = system_of("var a, b; a = min(max(b, 0), 5); b = max(1/2*a + 1, 0);");
  const KleeneResult rg = kleene_lfp(g, vec({-10, -10}), 200);
  CHECK_FALSE(rg.converged);
  CHECK(rg.point[0] < 2);
  CHECK(2 - rg.point[0] < Rat(1, 1000000));

  const PwaSystem diverging = system_of("var a; a = max(0, a + 1);");
  CHECK_FALSE(kleene_lfp(diverging, vec({0}), 50).converged);
}
