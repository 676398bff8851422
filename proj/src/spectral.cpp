#include "pwafix/spectral.hpp"

#include <algorithm>

namespace pwafix {

bool is_unit_gradient(const HomogeneousSystem& g) {
  for (const auto& coord : g.system().coords())
    for (const auto& group : coord)
      for (const auto& term : group.terms) {
        int ones = 0;
        for (const Rat& w : term.grad) {
          if (w == 1)
            ++ones;
          else if (w != 0)
            return false;
        }
        if (ones > 1) return false;
      }
  return true;
}

int default_spectral_cap(Index dim) { return static_cast<int>(std::max<Index>(64, 8 * dim)); }

SpectralOutcome negative_cone_test(const HomogeneousSystem& g, int cap) {
  require_valid(g.system());
  const Index d = g.dim();
  if (is_unit_gradient(g)) cap = std::max(cap, static_cast<int>(d) + 1);

  const Vec e = constant_vec(d, Rat(-1));
  const Vec zero = Vec::Zero(d);
  Vec b = e;
  for (int k = 1; k <= cap; ++k) {
    Vec next = eval(g, b);
    if (next == b) {
      if (b == zero) return {RadiusLtOne{k - 1}, k};
      return {UnitRadius{std::move(b)}, k};
    }
    if (strictly_less(e, next)) return {RadiusLtOne{k}, k};
    b = std::move(next);
  }
  return {Inconclusive{std::move(b)}, cap};
}

Rat collatz_wielandt_bound(const HomogeneousSystem& g, const Vec& x, int k) {
  if (x.size() != g.dim()) throw DimensionMismatch(g.dim(), x.size());
  if (k < 1) throw Error("collatz_wielandt_bound needs k >= 1");
  if (!(x.array() < Rat(0)).all()) throw Error("collatz_wielandt_bound needs x strictly negative");
  Vec y = x;
  for (int i = 0; i < k; ++i) y = eval(g, y);
  Rat bound = y[0] / x[0];
  for (Index i = 1; i < x.size(); ++i) bound = std::max(bound, Rat(y[i] / x[i]));
  return bound;
}

}  // namespace pwafix
