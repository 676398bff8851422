// Min/max/shift expression trees over affine atoms, and the passes that turn
// a system of such equations into a PwaSystem.
#ifndef PWAFIX_EXPR_HPP
#define PWAFIX_EXPR_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "pwafix/core.hpp"

namespace pwafix {

class Expr {
 public:
  enum class Kind { Min, Max, Shift, Atom };

  static Expr atom(AffineTerm term);
  static Expr constant(Index dim, Rat value);
  /// Unit-gradient atom x_var + offset.
  static Expr variable(Index dim, Index var, Rat offset = 0);
  static Expr min(std::vector<Expr> children);
  static Expr max(std::vector<Expr> children);
  static Expr shift(Expr child, Rat offset);

  Kind kind() const { return kind_; }
  const std::vector<Expr>& children() const { return children_; }
  const Rat& offset() const { return offset_; }
  const AffineTerm& term() const { return term_; }

  /// Value at a finite point, by direct tree interpretation.
  Rat operator()(const Vec& x) const;

  /// True when some atom has a positive weight on `var`.
  bool references(Index var) const;

  friend bool operator==(const Expr&, const Expr&);

 private:
  Kind kind_ = Kind::Atom;
  std::vector<Expr> children_;
  Rat offset_;
  AffineTerm term_;
};

/// Equations name_i = equations_i over the variables `names`.
struct ExprSystem {
  std::vector<std::string> names;
  std::vector<Expr> equations;

  Index dim() const { return static_cast<Index>(names.size()); }
};

/// Pushes shifts into atoms, flattens nested min/min and max/max, removes
/// single-child nodes and duplicate children, and keeps only the best
/// constant among atoms with identical gradients inside one min or max.
Expr simplify(const Expr& e);

/// Replaces variable `var` by `value` (an expression over the same variables).
/// Weights are pushed through min/max, which is exact because they are >= 0.
Expr substitute(const Expr& e, Index var, const Expr& value);

struct Elimination {
  /// Equations of the kept variables, over the kept variables.
  ExprSystem system;
  /// kept[i] is the original index of system variable i.
  std::vector<Index> kept;
  /// For every original variable, an expression over the kept variables whose
  /// value at the smallest fixed point of `system` is its value.
  std::vector<Expr> definitions;
};

/// Eliminates every variable not marked in `keep` by substitution, in index
/// order. A self-reference v = max(..., v + c, ...) with c <= 0 is dropped
/// first, which leaves smallest fixed points unchanged; any other remaining
/// self-reference makes the variable kept.
Elimination eliminate_variables(const ExprSystem& sys, std::vector<bool> keep);

/// A rational extended with -inf and +inf.
class XRat {
 public:
  XRat() : inf_(-1) {}
  XRat(Rat value) : inf_(0), value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  static XRat pos_inf() { return XRat(1); }
  static XRat neg_inf() { return XRat(-1); }

  bool finite() const { return inf_ == 0; }
  /// -1, 0 or +1.
  int infinity() const { return inf_; }
  const Rat& value() const { return value_; }

  friend bool operator==(const XRat& a, const XRat& b) {
    return a.inf_ == b.inf_ && (a.inf_ != 0 || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const XRat& a, const XRat& b);

 private:
  explicit XRat(int inf) : inf_(inf) {}
  int inf_;
  Rat value_;
};

std::string to_string(const XRat& x);

/// Tree evaluation over extended rationals; an atom with positive weight on a
/// -inf input is -inf, else on a +inf input +inf.
XRat eval_extended(const Expr& e, const std::vector<XRat>& x);

struct EliminatedVariable {
  Index index;
  std::string name;
  int sign;  // +1 or -1
  bool widened;
};

struct InfinityReport {
  /// Finite equations over the remaining variables.
  ExprSystem residual;
  /// residual_index[i] is the input index of residual variable i.
  std::vector<Index> residual_index;
  std::vector<EliminatedVariable> eliminated;
  /// Values reached by the ascending iteration, one per input variable.
  std::vector<XRat> values;
  int iterations = 0;
};

/// Ascending iteration from all -inf over extended rationals. After
/// `widen_after` steps (0 selects 3 d) any finite coordinate that still
/// increases is widened to +inf. Variables ending at -inf or +inf are
/// substituted away with min(+inf, t) = t, max(+inf, t) = +inf,
/// max(-inf, t) = t, min(-inf, t) = -inf.
InfinityReport eliminate_infinities(const ExprSystem& sys, int widen_after = 0);

class NormalizationTooLarge : public Error {
 public:
  using Error::Error;
};

/// Canonical min-of-max form of one expression.
PwaSystem::Coordinate normal_form(const Expr& e, std::size_t term_budget = 10000);

struct NamedSystem {
  PwaSystem system;
  std::vector<std::string> names;
};

/// Normal form of every equation; the whole system may hold at most
/// `term_budget` affine terms.
NamedSystem normalize(const ExprSystem& sys, std::size_t term_budget = 10000);

/// Readable rendering using the variable names.
std::string to_string(const Expr& e, const std::vector<std::string>& names);
std::string to_string(const AffineTerm& t, const std::vector<std::string>& names);

}  // namespace pwafix

#endif  // PWAFIX_EXPR_HPP
