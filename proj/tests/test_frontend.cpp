#include <doctest.h>

#include <algorithm>

#include "pwafix/game.hpp"
#include "pwafix/program.hpp"
#include "support/fixtures.hpp"
#include "support/interpreter.hpp"
#include "support/random_systems.hpp"

using namespace pwafix;
using namespace pwafix::testing;

namespace {

template <class F>
std::string parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

// Coordinates equal up to the order of actions and of terms inside actions.
bool same_up_to_order(PwaSystem::Coordinate a, PwaSystem::Coordinate b) {
  auto key = [](const MaxGroup& g) {
    std::vector<std::string> terms;
    for (const auto& t : g.terms) terms.push_back(to_string(t, {}));
    std::sort(terms.begin(), terms.end());
    return terms;
  };
  std::vector<std::vector<std::string>> ka, kb;
  for (const auto& g : a) ka.push_back(key(g));
  for (const auto& g : b) kb.push_back(key(g));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

const VarInterval& interval(const Analysis& a, int point, const std::string& var) {
  for (const auto& v : a.points.at(static_cast<std::size_t>(point)).vars)
    if (v.name == var) return v;
  throw std::runtime_error("no interval for " + var);
}

bool is(const VarInterval& v, const XRat& lo, const XRat& hi) { return v.lo == lo && v.hi == hi; }
bool is(const VarInterval& v, int lo, int hi) { return is(v, XRat(Rat(lo)), XRat(Rat(hi))); }

}  // namespace

TEST_CASE("equation files") {
  const NamedSystem ex = example();
  CHECK(ex.system.dim() == 12);
  CHECK(ex.names.front() == "x2m");
  CHECK(validate_system(ex.system).empty());

  const NamedSystem one = parse_equations("var x;\nx = max(0, x - 1);\n");
  CHECK(one.system.dim() == 1);
  CHECK(one.system.coord(0).front().terms.size() == 2);

  CHECK(contains(parse_error([] { parse_equations("var x;\nx = 2*x;"); }), "gradient sum 2 > 1"));
  CHECK(contains(parse_error([] { parse_equations("var x, y;\nx = y - x;\ny = 0;"); }), "negative coefficient"));
  CHECK(contains(parse_error([] { parse_equations("var x;\nx = max(0, z);"); }), "2:12: unknown identifier 'z'"));
  CHECK(contains(parse_error([] { parse_equations("var x;\nx = max(0 x);"); }), "2:11: expected ')'"));
  CHECK(contains(parse_error([] { parse_equations("var x, y;\nx = 1;"); }), "no equation for 'y'"));
  CHECK(contains(parse_error([] { parse_equations("var x;\nx = 1;\nx = 2;"); }), "second equation"));
  CHECK(contains(parse_error([] { parse_equations("var x, x;"); }), "declared twice"));
  CHECK(contains(parse_error([] { parse_equations("var x;\nx = max(x, 1) + max(x, 2);"); }),
                 "only a constant"));
  CHECK(contains(parse_error([] { parse_equations("var x;\nx = 1/0;"); }), "division by zero"));
  CHECK(contains(parse_error([] { parse_equations("x = 1;"); }), "'var'"));
}

TEST_CASE("printing then parsing is the identity") {
  const NamedSystem ex = example();
  CHECK(parse_equations(print_equations(ex)).system == ex.system);
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    NamedSystem ns{random_rational(rng, rng.uniform(1, 4)), {}};
    for (Index j = 0; j < ns.system.dim(); ++j) ns.names.push_back("v" + std::to_string(j));
    const NamedSystem back = parse_equations(print_equations(ns));
    CHECK(back.system == ns.system);
    CHECK(back.names == ns.names);
  }
}

TEST_CASE("normalization") {
  const std::vector<std::string> names{"y6m"};
  const ExprSystem shifted = parse_equation_exprs("var y6m; y6m = max(-10, y6m) - 1;");
  CHECK(to_string(simplify(shifted.equations[0]), names) == "max(-11, y6m - 1)");
  CHECK(normalize(shifted).system == system_of("var y6m; y6m = max(-11, y6m - 1);"));

  const Expr a = Expr::variable(2, 0, 3);
  CHECK(simplify(Expr::min({a})) == a);

  const ExprSystem lattice = parse_equation_exprs("var x, y; x = min(max(x, 0), max(y, 0)); y = max(min(x, 1), min(y, 2));");
  const NamedSystem normal = normalize(lattice);
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const Vec p = random_int_vec(rng, 2, -10, 10) / Rat(rng.uniform(1, 4));
    CHECK(eval(normal.system, p) == vec({lattice.equations[0](p), lattice.equations[1](p)}));
  }

  std::string wide = "var x; x = max(";
  for (int i = 0; i < 14; ++i) wide += std::string(i ? ", " : "") + "min(x, " + std::to_string(i) + ")";
  wide += ");";
  CHECK_THROWS_AS(parse_equations(wide), NormalizationTooLarge);
}

TEST_CASE("substitution and elimination") {
  const ExprSystem s = parse_equation_exprs("var a, b; a = max(0, b - 1); b = min(a + 2, 5);");
  const Expr e = substitute(s.equations[0], 1, s.equations[1]);
  CHECK(to_string(e, s.names) == "max(0, min(a + 1, 4))");

  const Elimination el = eliminate_variables(s, {true, false});
  REQUIRE(el.kept == std::vector<Index>{0});
  CHECK(to_string(el.system.equations[0], el.system.names) == "max(0, min(a + 1, 4))");
  CHECK(to_string(el.definitions[1], el.system.names) == "min(a + 2, 5)");

  // v = max(v - 1, w): the self term is dropped.
  const ExprSystem loop = parse_equation_exprs("var v, w; v = max(v - 1, w); w = 3;");
  const Elimination gone = eliminate_variables(loop, {false, false});
  CHECK(gone.kept.empty());
  CHECK(to_string(gone.definitions[0], {}) == "3");

  // v = max(v + 1, 0) keeps v.
  const ExprSystem grow = parse_equation_exprs("var v; v = max(v + 1, 0);");
  CHECK(eliminate_variables(grow, {false}).kept == std::vector<Index>{0});
}

TEST_CASE("infinity elimination") {
  const InfinityReport grow = eliminate_infinities(parse_equation_exprs("var x; x = max(0, x + 1);"));
  REQUIRE(grow.eliminated.size() == 1);
  CHECK(grow.eliminated[0].sign == 1);
  CHECK(grow.eliminated[0].widened);
  CHECK(grow.residual.dim() == 0);

  const InfinityReport low = eliminate_infinities(parse_equation_exprs("var x; x = min(x, 5);"));
  REQUIRE(low.eliminated.size() == 1);
  CHECK(low.eliminated[0].sign == -1);
  CHECK_FALSE(low.eliminated[0].widened);

  // y rises with x and is widened too; z reaches 4 once y passes it, which
  // needs more than the default 3 d steps.
  const ExprSystem chain = parse_equation_exprs("var x, y, z; x = max(0, x + 1); y = x - 3; z = min(y, max(z, 4));");
  CHECK(eliminate_infinities(chain).eliminated.size() == 3);
  const InfinityReport mixed = eliminate_infinities(chain, 30);
  REQUIRE(mixed.eliminated.size() == 2);
  CHECK(mixed.eliminated[1].name == "y");
  CHECK(mixed.eliminated[1].widened);
  REQUIRE(mixed.residual.dim() == 1);
  CHECK(to_string(mixed.residual.equations[0], mixed.residual.names) == "max(z, 4)");

  const Program fig = parse_program(read_data("figure1.tc"));
  const InfinityReport none = eliminate_infinities(compile_program(fig));
  CHECK(none.eliminated.empty());
  CHECK(none.residual.dim() == 12);
}

TEST_CASE("program parsing") {
  const Program fig = parse_program(read_data("figure1.tc"));
  CHECK(fig.vars == std::vector<std::string>{"x", "y"});
  CHECK(fig.num_points == 8);
  REQUIRE(fig.body.size() == 3);
  CHECK(fig.body[0].point == 1);
  CHECK(fig.body[1].point == 1);
  const auto& outer = std::get<While>(fig.body[2].stmt);
  CHECK(outer.head_point == 2);
  CHECK(outer.exit_point == 7);
  const auto& inner = std::get<While>(outer.body[1].stmt);
  CHECK(inner.head_point == 4);
  CHECK(inner.exit_point == 6);
  CHECK(outer.body[0].point == 3);
  CHECK(inner.body[0].point == 5);

  CHECK(parse_program("int x; x=[0,0];").num_points == 2);
  CHECK(parse_program("int x; int y; x=[0,0]\ny=[1,1]").num_points == 3);

  CHECK(contains(parse_error([] { parse_program("int x, y; x=[0,1]; y=[0,1]; while (x < y) { }"); }), "'<'"));
  CHECK(contains(parse_error([] { parse_program("int x; while (x <= 3) { }"); }), "before it is assigned"));
  CHECK(contains(parse_error([] { parse_program("int x; x=[0,1]; if (x <= 3) { }"); }), "'if'"));
  CHECK(contains(parse_error([] { parse_program("int x, y; x=[0,1]; y = x + 1;"); }), "another variable"));
  CHECK(contains(parse_error([] { parse_program("int x; x=[3,1];"); }), "empty interval"));
  CHECK(contains(parse_error([] { parse_program("int x; y=[3,3];"); }), "undeclared"));
  CHECK(contains(parse_error([] { parse_program("int x; x=[0,1]; while (1 <= 2) { }"); }), "both sides"));
}

TEST_CASE("generated equations match the hand-written system") {
  const Program fig = parse_program(read_data("figure1.tc"));
  const ExprSystem compiled = compile_program(fig);
  CHECK(compiled.names == example().names);
  const NamedSystem normal = normalize(compiled);

  std::string text = read_data("paper_example.eqs");
  const std::string literal = "x7p = max(0, x2p + 1);";
  REQUIRE(text.find(literal) != std::string::npos);
  text.replace(text.find(literal), literal.size(), "x7p = max(2, x2p + 1);");
  const NamedSystem expected = parse_equations(text);
  for (Index j = 0; j < 12; ++j) {
    INFO("coordinate " << compiled.names[static_cast<std::size_t>(j)]);
    CHECK(same_up_to_order(normal.system.coord(j), expected.system.coord(j)));
  }
  // The literal 0 constant gives the same smallest fixed point.
  CHECK(solve_smallest(normal.system).u == example_u1());
}

TEST_CASE("interval analysis") {
  SUBCASE("two nested loops") {
    const Analysis a = analyze(parse_program(read_data("figure1.tc")));
    CHECK(is(interval(a, 2, "x"), 0, 15));
    CHECK(is(interval(a, 2, "y"), 4, 15));
    CHECK(is(interval(a, 4, "y"), 5, 15));
    CHECK(is(interval(a, 6, "y"), 4, 4));
    CHECK(is(interval(a, 7, "x"), 5, 16));
    CHECK(is(interval(a, 7, "y"), 4, 15));
    CHECK(a.points[0].vars.empty());
    CHECK(a.solution.has_value());
  }
  SUBCASE("straight line") {
    const Analysis a = analyze(parse_program("int x; x=[0,2]; x=x+1;"));
    CHECK(a.points.size() == 2);
    CHECK(is(interval(a, 1, "x"), 1, 3));
    CHECK_FALSE(a.solution.has_value());
  }
  SUBCASE("counting loop") {
    const Analysis a = analyze(parse_program("int x; x=[0,0];\nwhile (x<=10) { x=x+1; }"));
    CHECK(is(interval(a, 2, "x"), 0, 10));
    CHECK(is(interval(a, 4, "x"), 11, 11));
  }
  SUBCASE("unguarded growth") {
    const Analysis a = analyze(parse_program("int x, y; x=[0,0]; y=[0,0];\nwhile (y<=0) {\n x=x+1;\n}"));
    CHECK(is(interval(a, 2, "x"), XRat(Rat(0)), XRat::pos_inf()));
    CHECK(is(interval(a, 4, "y"), 1, 0));
    REQUIRE(a.infinities.eliminated.size() == 1);
    CHECK(a.infinities.eliminated[0].widened);
  }
}

TEST_CASE("games") {
  const NamedSystem one = parse_game(read_data("discounted.game"));
  CHECK(one.system == system_of("var s; s = 1/2*s + 1;"));
  CHECK(solve_smallest(one.system).u == vec({2}));

  const NamedSystem zero = parse_game(
      "state a { action 1 { b 1: P = [1/4, 1/4], r = 0; } }"
      "state b { action 1 { b 1: P = [1/2, 1/4], r = 0; } }");
  CHECK(zero.names == std::vector<std::string>{"a", "b"});
  CHECK(solve_smallest(zero.system).u == vec({0, 0}));

  CHECK(contains(parse_error([] { parse_game("state 1 { action 1 { b 1: P = [-1/2], r = 0; } }"); }),
                 "negative probability -1/2"));
  CHECK(contains(parse_error([] { parse_game("state 1 { action 1 { b 1: P = [3/4, 1/2], r = 0; } }\n"
                                             "state 2 { action 1 { b 1: P = [0, 0], r = 0; } }"); }),
                 "sum to 5/4 > 1"));
  CHECK(contains(parse_error([] { parse_game("state 1 { action 1 { b 1: P = [1, 0], r = 0; } }"); }),
                 "expected one per state"));
  CHECK(contains(parse_error([] { parse_game("state 1 { }"); }), "no actions"));
  CHECK(contains(parse_error([] { parse_game("state 1 { action 1 { b 1 P = [1], r = 0; } }"); }), "':'"));
}

TEST_CASE("random 3-state games match the contraction fixed point") {
  Rng rng(29);
  for (int i = 0; i < 20; ++i) {
    std::string text;
    for (int s = 0; s < 3; ++s) {
      text += "state " + std::to_string(s) + " {\n";
      for (int a = 0; a < 2; ++a) {
        text += " action " + std::to_string(a) + " {\n";
        for (int b = 0; b < 2; ++b) {
          // Probabilities in eighths with row sum at most 1/2.
          int left = 4;
          std::string row;
          for (int k = 0; k < 3; ++k) {
            const int q = rng.uniform(0, left);
            left -= q;
            row += std::string(k ? ", " : "") + std::to_string(q) + "/8";
          }
          text += "  b " + std::to_string(b) + ": P = [" + row + "], r = " + std::to_string(rng.uniform(-5, 5)) +
                  ";\n";
        }
        text += " }\n";
      }
      text += "}\n";
    }
    const NamedSystem g = parse_game(text);
    const Vec u = solve_smallest(g.system).u;
    // The map is a contraction of modulus 1/2, so u is its unique fixed point.
    CHECK(eval(g.system, u) == u);
    const KleeneResult below = kleene_lfp(g.system, constant_vec(3, -20), 60);
    CHECK(leq(below.point, u));
    CHECK(sup_norm(u - below.point) < Rat(1, 1000000));
  }
}

TEST_CASE("analysis is sound against concrete execution") {
  const std::vector<std::string> programs = {
      read_data("figure1.tc"),
      "int x; x=[0,3];\nwhile (x<=10) { x=x+2; }",
      "int i, n; i=[0,0]; n=[2,6];\nwhile (i<=n) {\n i=i+1;\n}",
      "int a, b; a=[-3,3]; b=[0,2];\nwhile (0<=a) {\n a=a-1;\n b=b+1;\n}\nwhile (b<=4) { b=b+1; }",
  };
  for (const auto& text : programs) {
    const Program p = parse_program(text);
    const Analysis a = analyze(p);
    auto reached = Interpreter(p).run();
    for (const auto& [point, states] : reached) {
      for (const auto& v : a.points[static_cast<std::size_t>(point)].vars) {
        const auto idx = static_cast<std::size_t>(
            std::find(p.vars.begin(), p.vars.end(), v.name) - p.vars.begin());
        for (const auto& s : states) {
          REQUIRE(s[idx].has_value());
          const XRat value{Rat(*s[idx])};
          INFO("point " << point << ", " << v.name << " = " << *s[idx]);
          CHECK(v.lo <= value);
          CHECK(value <= v.hi);
        }
      }
    }
  }
}
