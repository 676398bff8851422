// Toy imperative language over integer variables and its interval analysis.
//
//   int x, int y,
//   x=[0,2]; y=[10,15]
//   while (x<=y) {
//     x=x+1;
//     while (5<=y) { y=y-1; }
//   }
//
// Control points are numbered in source order. Point 0 is the program entry.
// A maximal run of assignments on one source line ends in one point; a loop
// has a head point (state after the guard holds) and an exit point (state
// after the guard fails). An interval [lo, hi] is encoded by the two bound
// unknowns m = -lo and p = hi, so every transfer function is monotone.
#ifndef PWAFIX_PROGRAM_HPP
#define PWAFIX_PROGRAM_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pwafix/equations.hpp"
#include "pwafix/solver.hpp"

namespace pwafix {

/// Operand of a guard: a variable index or an integer constant.
using GuardOperand = std::variant<Index, Rat>;

/// lhs <= rhs; at most one side is a constant.
struct Guard {
  GuardOperand lhs;
  GuardOperand rhs;
};

struct IntervalAssign {
  Index var;
  Rat lo;
  Rat hi;
};

/// var = var + delta.
struct Increment {
  Index var;
  Rat delta;
};

struct Located;

struct While {
  Guard guard;
  std::vector<Located> body;
  int head_point;
  int exit_point;
};

using Stmt = std::variant<IntervalAssign, Increment, While>;

struct Located {
  Stmt stmt;
  int line;
  /// Point reached after the statement: shared by a run of assignments on one
  /// line (only the last of the run materializes it); for a loop, its exit point.
  int point;
};

struct Program {
  std::vector<std::string> vars;
  std::vector<Located> body;
  /// Number of control points, including the entry point 0.
  int num_points = 1;
};

Program parse_program(std::string_view text);

/// Bound unknowns of one variable at one point.
struct BoundPair {
  Index lower;  // negated lower bound
  Index upper;
};

struct ProgramEquations {
  ExprSystem system;
  /// bounds[point][var], absent where the variable is not yet assigned.
  std::vector<std::vector<std::optional<BoundPair>>> bounds;
  /// Unknowns that stay in the solved system: both bounds of every variable
  /// a guard mentions, at that loop's head and exit points.
  std::vector<bool> keep;
};

/// Semantic equations over interval bounds. Unknowns are ordered by variable,
/// then point, then lower before upper bound.
ProgramEquations generate_equations(const Program& p);

struct VarInterval {
  std::string name;
  XRat lo;
  XRat hi;
};

struct PointIntervals {
  int id;
  std::vector<VarInterval> vars;
};

struct AnalysisOptions {
  SolveOptions solve;
  /// Widening threshold of the infinity pre-pass; 0 selects 3 d.
  int widen_after = 0;
  std::size_t term_budget = 10000;
};

struct Analysis {
  std::vector<PointIntervals> points;
  /// The finite system handed to the solver, with bound names like "x2m".
  NamedSystem residual;
  InfinityReport infinities;
  /// Absent when every kept unknown was eliminated as infinite.
  std::optional<Solution> solution;
};

Analysis analyze(const Program& p, const AnalysisOptions& opts = {});

/// Equations of the kept bound unknowns after eliminating all others; this is
/// the system the analysis solves, before the infinity pre-pass.
ExprSystem compile_program(const Program& p);

}  // namespace pwafix

#endif  // PWAFIX_PROGRAM_HPP
