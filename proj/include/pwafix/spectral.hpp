// Fixed directions of homogeneous maps on the negative cone.
//
// For a monotone homogeneous nonexpansive g, the cone spectral radius on
// R^d_- is below one iff the only fixed point of g in R^d_- is zero. Both
// are decided here by iterating g from e = (-1, ..., -1).
#ifndef PWAFIX_SPECTRAL_HPP
#define PWAFIX_SPECTRAL_HPP

#include <variant>

#include "pwafix/semidiff.hpp"

namespace pwafix {

/// rho < 1, witnessed by g^k(e) > e componentwise.
struct RadiusLtOne {
  int certificate_k = 0;
};

/// rho = 1, witnessed by h <= 0, h != 0, g(h) = h.
struct UnitRadius {
  Vec h;
};

/// Iteration cap reached without a decision.
struct Inconclusive {
  Vec b_approx;
};

struct SpectralOutcome {
  std::variant<RadiusLtOne, UnitRadius, Inconclusive> result;
  /// Number of applications of g performed.
  int iterations = 0;

  bool radius_lt_one() const { return std::holds_alternative<RadiusLtOne>(result); }
  bool unit_radius() const { return std::holds_alternative<UnitRadius>(result); }
  bool inconclusive() const { return std::holds_alternative<Inconclusive>(result); }
};

/// True iff every gradient is zero or a unit coordinate vector, i.e. g is a
/// homogeneous min-max function built from min, max, h_1..h_d and 0.
bool is_unit_gradient(const HomogeneousSystem& g);

/// max(64, 8 d).
int default_spectral_cap(Index dim);

/// Iterates b_{k+1} = g(b_k) from b_0 = e. Stabilization at 0 or any b_k > e
/// gives RadiusLtOne; stabilization at a nonzero b gives UnitRadius{b}. For
/// unit-gradient g the sequence stabilizes within d steps and the cap is
/// raised to d + 1 if needed, so the outcome is never Inconclusive.
SpectralOutcome negative_cone_test(const HomogeneousSystem& g, int cap);

/// sup_i g^k(x)_i / x_i for x strictly negative. Its k-th root bounds the cone
/// spectral radius from above, so a value below one certifies rho < 1.
Rat collatz_wielandt_bound(const HomogeneousSystem& g, const Vec& x, int k);

}  // namespace pwafix

#endif  // PWAFIX_SPECTRAL_HPP
