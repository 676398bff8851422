// Semidifferentials of min-max-affine maps.
//
// At a point u the semidifferential keeps, in every coordinate, the actions
// attaining f_j(u) and inside each of them the terms attaining the max. Each
// kept term is replaced by its linear part, which yields a homogeneous map
// f'_u with f(u + h) = f(u) + f'_u(h) for all small enough h.
#ifndef PWAFIX_SEMIDIFF_HPP
#define PWAFIX_SEMIDIFF_HPP

#include <vector>

#include "pwafix/core.hpp"

namespace pwafix {

struct ActiveAction {
  Index action;
  std::vector<Index> terms;  // ascending
};

/// Active actions of one coordinate, ascending by action index.
using ActiveCoordinate = std::vector<ActiveAction>;

struct ActiveSets {
  std::vector<ActiveCoordinate> coords;

  const ActiveCoordinate& coord(Index j) const { return coords[static_cast<std::size_t>(j)]; }
};

/// A system whose affine terms all have a zero constant.
class HomogeneousSystem {
 public:
  explicit HomogeneousSystem(PwaSystem sys);
  const PwaSystem& system() const { return sys_; }
  Index dim() const { return sys_.dim(); }

 private:
  PwaSystem sys_;
};

inline Vec eval(const HomogeneousSystem& g, const Vec& x) { return eval(g.system(), x); }

/// Exact argmin/argmax sets at u.
ActiveSets active_sets(const PwaSystem& sys, const Vec& u);

/// f'_u. Action i of coordinate j in the result is active.coord(j)[i].
HomogeneousSystem semidifferential(const PwaSystem& sys, const Vec& u);
HomogeneousSystem semidifferential(const PwaSystem& sys, const ActiveSets& active);

/// Largest t such that f(u + s h) = f(u) + s f'_u(h) is guaranteed for all
/// 0 <= s <= t, derived from the gaps between attained and non-attained
/// branch values at u. Independent of active_sets.
Rat exactness_threshold(const PwaSystem& sys, const Vec& u, const Vec& h);

/// lim_{t -> 0+} (f(u + t h) - f(u)) / t, evaluated from difference quotients
/// of f alone.
Vec directional_derivative(const PwaSystem& sys, const Vec& u, const Vec& h);

}  // namespace pwafix

#endif  // PWAFIX_SEMIDIFF_HPP
