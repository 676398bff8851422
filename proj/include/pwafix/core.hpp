// Min-of-max-of-affine self-maps of R^d with exact rational coefficients.
//
// Coordinate j of a system is  f_j(x) = min_{a in A_j} max_{b in B_a} (w_ab . x + c_ab).
// A system is valid when every affine term is monotone (w >= 0) and
// sup-norm nonexpansive (sum of w <= 1).
#ifndef PWAFIX_CORE_HPP
#define PWAFIX_CORE_HPP

#include <compare>
#include <string>
#include <vector>

#include "pwafix/rational.hpp"

namespace pwafix {

struct AffineTerm {
  Vec grad;
  Rat constant;

  Rat operator()(const Vec& x) const { return grad.dot(x) + constant; }
  bool is_constant() const;
  friend bool operator==(const AffineTerm& a, const AffineTerm& b) {
    return a.grad.size() == b.grad.size() && a.grad == b.grad && a.constant == b.constant;
  }
};

/// max over terms; one action of a coordinate.
struct MaxGroup {
  std::vector<AffineTerm> terms;

  Rat operator()(const Vec& x) const;
  friend bool operator==(const MaxGroup&, const MaxGroup&) = default;
};

class PwaSystem {
 public:
  /// The action set A_j of one coordinate.
  using Coordinate = std::vector<MaxGroup>;

  PwaSystem() = default;
  /// Only the coordinate count is checked here; see validate_system.
  PwaSystem(Index dim, std::vector<Coordinate> coords);

  Index dim() const { return dim_; }
  const Coordinate& coord(Index j) const { return coords_[static_cast<std::size_t>(j)]; }
  const std::vector<Coordinate>& coords() const { return coords_; }
  Index num_actions(Index j) const { return static_cast<Index>(coord(j).size()); }

  friend bool operator==(const PwaSystem&, const PwaSystem&) = default;

 private:
  Index dim_ = 0;
  std::vector<Coordinate> coords_;
};

struct Violation {
  enum class Kind {
    ZeroDimension,
    EmptyActionSet,
    EmptyGroup,
    GradientLength,
    NegativeGradient,
    GradientSumAboveOne,
  };
  Kind kind;
  // Zero-based locations; -1 where not applicable.
  Index coord = -1;
  Index action = -1;
  Index term = -1;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Lists every violated invariant. Empty iff the system is a valid monotone
/// nonexpansive piecewise-affine map.
ValidationReport validate_system(const PwaSystem& sys);

class InvalidSystem : public Error {
 public:
  explicit InvalidSystem(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Throws InvalidSystem when validate_system reports anything.
void require_valid(const PwaSystem& sys);

/// One action index per coordinate.
struct Policy {
  std::vector<Index> choice;

  Index size() const { return static_cast<Index>(choice.size()); }
  friend auto operator<=>(const Policy&, const Policy&) = default;
};

std::string to_string(const Policy& p);

/// A system with exactly one action per coordinate: the one-player map f^pi.
class PolicySystem {
 public:
  explicit PolicySystem(PwaSystem sys);
  const PwaSystem& system() const { return sys_; }
  Index dim() const { return sys_.dim(); }
  const MaxGroup& group(Index j) const { return sys_.coord(j).front(); }

 private:
  PwaSystem sys_;
};

Vec eval(const PwaSystem& sys, const Vec& x);
inline Vec eval(const PolicySystem& ps, const Vec& x) { return eval(ps.system(), x); }

/// Values of every action of coordinate j at x.
std::vector<Rat> action_values(const PwaSystem& sys, Index j, const Vec& x);

/// Keeps the chosen action of every coordinate.
PolicySystem restrict(const PwaSystem& sys, const Policy& policy);

/// Per coordinate, the lowest-index action attaining the minimum at x.
Policy argmin_policy(const PwaSystem& sys, const Vec& x);

/// Number of policies, saturated at `cap`.
std::size_t policy_count(const PwaSystem& sys, std::size_t cap);

struct KleeneResult {
  Vec point;
  bool converged = false;
  /// Number of applications of the map before reaching `point`.
  int iterations = 0;
};

/// Iterates x <- f(x) from `start` until exact stabilization or max_iter
/// applications. From a start below every fixed point with start <= f(start),
/// a converged result is the smallest fixed point.
KleeneResult kleene_lfp(const PwaSystem& sys, const Vec& start, int max_iter);

}  // namespace pwafix

#endif  // PWAFIX_CORE_HPP
