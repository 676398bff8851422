#include "pwafix/semidiff.hpp"

#include <optional>

namespace pwafix {

HomogeneousSystem::HomogeneousSystem(PwaSystem sys) : sys_(std::move(sys)) {
  for (Index j = 0; j < sys_.dim(); ++j)
    for (const auto& group : sys_.coord(j))
      for (const auto& term : group.terms)
        if (term.constant != 0)
          throw Error("homogeneous system has nonzero constant at coord " + std::to_string(j + 1));
}

ActiveSets active_sets(const PwaSystem& sys, const Vec& u) {
  if (u.size() != sys.dim()) throw DimensionMismatch(sys.dim(), u.size());
  ActiveSets active;
  active.coords.resize(static_cast<std::size_t>(sys.dim()));
  for (Index j = 0; j < sys.dim(); ++j) {
    const auto& actions = sys.coord(j);
    std::vector<std::vector<Rat>> term_values(actions.size());
    std::vector<Rat> group_values(actions.size());
    for (std::size_t a = 0; a < actions.size(); ++a) {
      for (const auto& t : actions[a].terms) term_values[a].push_back(t(u));
      group_values[a] = *std::max_element(term_values[a].begin(), term_values[a].end());
    }
    const Rat fj = *std::min_element(group_values.begin(), group_values.end());
    auto& out = active.coords[static_cast<std::size_t>(j)];
    for (std::size_t a = 0; a < actions.size(); ++a) {
      if (group_values[a] != fj) continue;
      ActiveAction act{static_cast<Index>(a), {}};
      for (std::size_t b = 0; b < term_values[a].size(); ++b)
        if (term_values[a][b] == group_values[a]) act.terms.push_back(static_cast<Index>(b));
      out.push_back(std::move(act));
    }
  }
  return active;
}

HomogeneousSystem semidifferential(const PwaSystem& sys, const ActiveSets& active) {
  if (static_cast<Index>(active.coords.size()) != sys.dim())
    throw DimensionMismatch(sys.dim(), static_cast<Index>(active.coords.size()));
  std::vector<PwaSystem::Coordinate> coords(static_cast<std::size_t>(sys.dim()));
  for (Index j = 0; j < sys.dim(); ++j) {
    for (const auto& act : active.coord(j)) {
      const auto& group = sys.coord(j)[static_cast<std::size_t>(act.action)];
      MaxGroup linear;
      for (Index b : act.terms)
        linear.terms.push_back({group.terms[static_cast<std::size_t>(b)].grad, Rat(0)});
      coords[static_cast<std::size_t>(j)].push_back(std::move(linear));
    }
  }
  return HomogeneousSystem(PwaSystem(sys.dim(), std::move(coords)));
}

HomogeneousSystem semidifferential(const PwaSystem& sys, const Vec& u) {
  return semidifferential(sys, active_sets(sys, u));
}

Rat exactness_threshold(const PwaSystem& sys, const Vec& u, const Vec& h) {
  if (u.size() != sys.dim()) throw DimensionMismatch(sys.dim(), u.size());
  if (h.size() != sys.dim()) throw DimensionMismatch(sys.dim(), h.size());
  const Rat n = sup_norm(h);
  if (n == 0) return Rat(1);

  // Smallest positive difference between an attained branch value and a
  // non-attained one, at either the max or the min level.
  std::optional<Rat> gap;
  auto note = [&gap](const Rat& d) {
    if (d > 0 && (!gap || d < *gap)) gap = d;
  };
  for (Index j = 0; j < sys.dim(); ++j) {
    std::vector<Rat> group_values;
    for (const auto& group : sys.coord(j)) {
      std::vector<Rat> values;
      for (const auto& t : group.terms) values.push_back(t(u));
      const Rat top = *std::max_element(values.begin(), values.end());
      for (const auto& v : values) note(top - v);
      group_values.push_back(top);
    }
    const Rat bottom = *std::min_element(group_values.begin(), group_values.end());
    for (const auto& v : group_values) note(v - bottom);
  }
  if (!gap) return Rat(1);
  // Each branch moves by at most s * |h|_inf along u + s h (gradient sums <= 1),
  // so orderings survive while 2 s |h|_inf < gap.
  return std::min(Rat(1), Rat(*gap / (4 * n)));
}

Vec directional_derivative(const PwaSystem& sys, const Vec& u, const Vec& h) {
  const Vec fu = eval(sys, u);
  const Rat limit = exactness_threshold(sys, u, h);
  auto quotient = [&](const Rat& t) -> Vec { return (eval(sys, u + t * h) - fu) / t; };

  Rat t = 1;
  Vec previous = quotient(t);
  for (;;) {
    t /= 2;
    Vec current = quotient(t);
    if (current == previous && t <= limit) return current;
    previous = std::move(current);
  }
}

}  // namespace pwafix
