// Value determination for a single policy: the smallest fixed point of a
// monotone nonexpansive max-of-affine map g is the unique optimum of
//
//     minimize sum_i x_i  subject to  g(x) <= x,
//
// solved here by an exact two-phase simplex method with Bland's rule.
#ifndef PWAFIX_LP_HPP
#define PWAFIX_LP_HPP

#include <string>
#include <variant>
#include <vector>

#include "pwafix/core.hpp"

namespace pwafix {

/// coeffs . x >= rhs
struct Constraint {
  Vec coeffs;
  Rat rhs;
};

/// minimize objective . x over free variables subject to every row.
struct LinearProgram {
  Index num_vars = 0;
  Vec objective;
  std::vector<Constraint> rows;
};

struct Optimal {
  Vec x;
};
struct Infeasible {};
/// Feasible direction along which the objective strictly decreases.
struct Unbounded {
  Vec ray;
};

using LpOutcome = std::variant<Optimal, Infeasible, Unbounded>;

class SolveError : public Error {
 public:
  enum class Kind {
    NoFiniteFixedPoint,
    UnboundedBelow,
    Undecidable,
    MonotonicityViolation,
    InvariantBroken,
  };
  SolveError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(SolveError::Kind kind);

/// One row (e_j - w) . x >= c per affine term w . x + c of coordinate j.
LinearProgram build_lp(const PolicySystem& ps);

/// Exact simplex; deterministic for a given program.
LpOutcome simplex_solve(const LinearProgram& lp);

/// Smallest fixed point of ps. Throws SolveError NoFiniteFixedPoint when the
/// program is infeasible and UnboundedBelow when it is unbounded.
Vec smallest_fixed_point_policy(const PolicySystem& ps);

/// Plain-text dump, one constraint per line, exact fractions.
std::string to_text(const LinearProgram& lp, const std::vector<std::string>& names = {});

}  // namespace pwafix

#endif  // PWAFIX_LP_HPP
