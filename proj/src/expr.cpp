#include "pwafix/expr.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace pwafix {

Expr Expr::atom(AffineTerm term) {
  Expr e;
  e.kind_ = Kind::Atom;
  e.term_ = std::move(term);
  return e;
}

Expr Expr::constant(Index dim, Rat value) { return atom({Vec::Zero(dim), std::move(value)}); }

Expr Expr::variable(Index dim, Index var, Rat offset) {
  Vec grad = Vec::Zero(dim);
  grad[var] = 1;
  return atom({std::move(grad), std::move(offset)});
}

Expr Expr::min(std::vector<Expr> children) {
  if (children.empty()) throw Error("min() needs at least one argument");
  Expr e;
  e.kind_ = Kind::Min;
  e.children_ = std::move(children);
  return e;
}

Expr Expr::max(std::vector<Expr> children) {
  if (children.empty()) throw Error("max() needs at least one argument");
  Expr e;
  e.kind_ = Kind::Max;
  e.children_ = std::move(children);
  return e;
}

Expr Expr::shift(Expr child, Rat offset) {
  Expr e;
  e.kind_ = Kind::Shift;
  e.children_.push_back(std::move(child));
  e.offset_ = std::move(offset);
  return e;
}

Rat Expr::operator()(const Vec& x) const {
  switch (kind_) {
    case Kind::Atom: return term_(x);
    case Kind::Shift: return children_.front()(x) + offset_;
    case Kind::Min: {
      Rat v = children_.front()(x);
      for (std::size_t i = 1; i < children_.size(); ++i) v = std::min(v, children_[i](x));
      return v;
    }
    case Kind::Max: {
      Rat v = children_.front()(x);
      for (std::size_t i = 1; i < children_.size(); ++i) v = std::max(v, children_[i](x));
      return v;
    }
  }
  return Rat(0);
}

bool Expr::references(Index var) const {
  if (kind_ == Kind::Atom) return var < term_.grad.size() && term_.grad[var] != 0;
  return std::any_of(children_.begin(), children_.end(),
                     [var](const Expr& c) { return c.references(var); });
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Expr::Kind::Atom: return a.term_ == b.term_;
    case Expr::Kind::Shift: return a.offset_ == b.offset_ && a.children_ == b.children_;
    default: return a.children_ == b.children_;
  }
}

namespace {

Expr map_atoms(const Expr& e, const std::function<AffineTerm(const AffineTerm&)>& f) {
  switch (e.kind()) {
    case Expr::Kind::Atom: return Expr::atom(f(e.term()));
    case Expr::Kind::Shift: return Expr::shift(map_atoms(e.children().front(), f), e.offset());
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      std::vector<Expr> children;
      for (const auto& c : e.children()) children.push_back(map_atoms(c, f));
      return e.kind() == Expr::Kind::Min ? Expr::min(std::move(children))
                                         : Expr::max(std::move(children));
    }
  }
  return e;
}

Expr combine(Expr::Kind kind, std::vector<Expr> children) {
  const bool is_max = kind == Expr::Kind::Max;
  std::vector<Expr> flat;
  for (auto& c : children) {
    if (c.kind() == kind)
      for (const auto& g : c.children()) flat.push_back(g);
    else
      flat.push_back(std::move(c));
  }
  std::vector<Expr> out;
  for (auto& c : flat) {
    auto same = std::find_if(out.begin(), out.end(), [&](const Expr& o) {
      if (c.kind() == Expr::Kind::Atom && o.kind() == Expr::Kind::Atom)
        return o.term().grad == c.term().grad;
      return o == c;
    });
    if (same == out.end()) {
      out.push_back(std::move(c));
      continue;
    }
    if (c.kind() == Expr::Kind::Atom) {
      const Rat& k = c.term().constant;
      const Rat& current = same->term().constant;
      if (is_max ? k > current : k < current) *same = Expr::atom({same->term().grad, k});
    }
  }
  if (out.size() == 1) return std::move(out.front());
  return is_max ? Expr::max(std::move(out)) : Expr::min(std::move(out));
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Atom: return e;
    case Expr::Kind::Shift: {
      const Rat& k = e.offset();
      return map_atoms(simplify(e.children().front()),
                       [&k](const AffineTerm& t) { return AffineTerm{t.grad, t.constant + k}; });
    }
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      std::vector<Expr> children;
      for (const auto& c : e.children()) children.push_back(simplify(c));
      return combine(e.kind(), std::move(children));
    }
  }
  return e;
}

Expr substitute(const Expr& e, Index var, const Expr& value) {
  if (!e.references(var)) return e;
  const Expr v = simplify(value);
  const Expr replaced = map_atoms(e, [&](const AffineTerm& t) { return t; });  // copy
  std::function<Expr(const Expr&)> go = [&](const Expr& node) -> Expr {
    switch (node.kind()) {
      case Expr::Kind::Atom: {
        const AffineTerm& t = node.term();
        if (t.grad[var] == 0) return node;
        const Rat weight = t.grad[var];
        AffineTerm rest = t;
        rest.grad[var] = 0;
        return map_atoms(v, [&](const AffineTerm& s) {
          return AffineTerm{rest.grad + weight * s.grad, rest.constant + weight * s.constant};
        });
      }
      case Expr::Kind::Shift: return Expr::shift(go(node.children().front()), node.offset());
      case Expr::Kind::Min:
      case Expr::Kind::Max: {
        std::vector<Expr> children;
        for (const auto& c : node.children()) children.push_back(go(c));
        return node.kind() == Expr::Kind::Min ? Expr::min(std::move(children))
                                              : Expr::max(std::move(children));
      }
    }
    return node;
  };
  return simplify(go(replaced));
}

namespace {

bool is_self_step(const Expr& e, Index var) {
  if (e.kind() != Expr::Kind::Atom) return false;
  const AffineTerm& t = e.term();
  if (t.grad[var] != 1 || t.constant > 0) return false;
  for (Index i = 0; i < t.grad.size(); ++i)
    if (i != var && t.grad[i] != 0) return false;
  return true;
}

// v = max(..., v + c, ...) with c <= 0 has the same least solution without
// the self term.
Expr drop_self_steps(const Expr& e, Index var) {
  if (e.kind() != Expr::Kind::Max) return e;
  std::vector<Expr> rest;
  for (const auto& c : e.children())
    if (!is_self_step(c, var)) rest.push_back(c);
  if (rest.empty() || rest.size() == e.children().size()) return e;
  return combine(Expr::Kind::Max, std::move(rest));
}

Expr reindex(const Expr& e, const std::vector<Index>& kept) {
  return map_atoms(e, [&kept](const AffineTerm& t) {
    Vec grad(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) grad[static_cast<Index>(i)] = t.grad[kept[i]];
    return AffineTerm{std::move(grad), t.constant};
  });
}

}  // namespace

Elimination eliminate_variables(const ExprSystem& sys, std::vector<bool> keep) {
  const Index n = sys.dim();
  if (static_cast<Index>(keep.size()) != n) throw DimensionMismatch(n, static_cast<Index>(keep.size()));
  std::vector<Expr> eqs;
  for (const auto& e : sys.equations) eqs.push_back(simplify(e));
  std::vector<bool> eliminated(static_cast<std::size_t>(n), false);
  std::vector<std::optional<Expr>> defs(static_cast<std::size_t>(n));

  for (Index v = 0; v < n; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (keep[vi]) continue;
    Expr e = eqs[vi];
    if (e.references(v)) e = drop_self_steps(e, v);
    if (e.references(v)) {
      keep[vi] = true;
      continue;
    }
    for (Index u = 0; u < n; ++u) {
      const auto ui = static_cast<std::size_t>(u);
      if (u == v) continue;
      if (!eliminated[ui] && eqs[ui].references(v)) eqs[ui] = substitute(eqs[ui], v, e);
      if (eliminated[ui] && defs[ui]->references(v)) defs[ui] = substitute(*defs[ui], v, e);
    }
    defs[vi] = std::move(e);
    eliminated[vi] = true;
  }

  Elimination out;
  for (Index v = 0; v < n; ++v)
    if (!eliminated[static_cast<std::size_t>(v)]) out.kept.push_back(v);
  const auto k = static_cast<Index>(out.kept.size());
  for (Index i = 0; i < k; ++i) {
    const auto orig = static_cast<std::size_t>(out.kept[static_cast<std::size_t>(i)]);
    out.system.names.push_back(sys.names[orig]);
    out.system.equations.push_back(reindex(eqs[orig], out.kept));
  }
  for (Index v = 0; v < n; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (eliminated[vi]) {
      out.definitions.push_back(reindex(*defs[vi], out.kept));
    } else {
      const auto pos = std::find(out.kept.begin(), out.kept.end(), v) - out.kept.begin();
      out.definitions.push_back(Expr::variable(k, pos));
    }
  }
  return out;
}

std::strong_ordering operator<=>(const XRat& a, const XRat& b) {
  if (a.inf_ != b.inf_) return a.inf_ <=> b.inf_;
  if (a.inf_ != 0) return std::strong_ordering::equal;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const XRat& x) {
  if (x.infinity() > 0) return "+inf";
  if (x.infinity() < 0) return "-inf";
  return to_string(x.value());
}

XRat eval_extended(const Expr& e, const std::vector<XRat>& x) {
  switch (e.kind()) {
    case Expr::Kind::Atom: {
      const AffineTerm& t = e.term();
      bool pos = false;
      Rat sum = t.constant;
      for (Index i = 0; i < t.grad.size(); ++i) {
        if (t.grad[i] == 0) continue;
        const XRat& xi = x[static_cast<std::size_t>(i)];
        if (xi.infinity() < 0) return XRat::neg_inf();
        if (xi.infinity() > 0)
          pos = true;
        else
          sum += t.grad[i] * xi.value();
      }
      return pos ? XRat::pos_inf() : XRat(sum);
    }
    case Expr::Kind::Shift: {
      XRat v = eval_extended(e.children().front(), x);
      return v.finite() ? XRat(v.value() + e.offset()) : v;
    }
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      XRat v = eval_extended(e.children().front(), x);
      for (std::size_t i = 1; i < e.children().size(); ++i) {
        XRat c = eval_extended(e.children()[i], x);
        if (e.kind() == Expr::Kind::Min ? c < v : c > v) v = std::move(c);
      }
      return v;
    }
  }
  return XRat::neg_inf();
}

namespace {

struct Partial {
  int inf = 0;
  std::optional<Expr> expr;
};

Partial substitute_infinities(const Expr& e, const std::vector<XRat>& x) {
  switch (e.kind()) {
    case Expr::Kind::Atom: {
      const AffineTerm& t = e.term();
      int inf = 0;
      for (Index i = 0; i < t.grad.size(); ++i) {
        if (t.grad[i] == 0) continue;
        const int s = x[static_cast<std::size_t>(i)].infinity();
        if (s < 0) return {-1, std::nullopt};
        if (s > 0) inf = 1;
      }
      if (inf) return {1, std::nullopt};
      return {0, e};
    }
    case Expr::Kind::Shift: {
      Partial p = substitute_infinities(e.children().front(), x);
      if (p.inf) return p;
      return {0, Expr::shift(std::move(*p.expr), e.offset())};
    }
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      // The absorbing infinity of min is -inf, of max +inf.
      const int absorbing = e.kind() == Expr::Kind::Min ? -1 : 1;
      std::vector<Expr> kept;
      for (const auto& c : e.children()) {
        Partial p = substitute_infinities(c, x);
        if (p.inf == absorbing) return {absorbing, std::nullopt};
        if (p.inf == 0) kept.push_back(std::move(*p.expr));
      }
      if (kept.empty()) return {-absorbing, std::nullopt};
      return {0, combine(e.kind(), std::move(kept))};
    }
  }
  return {};
}

}  // namespace

InfinityReport eliminate_infinities(const ExprSystem& sys, int widen_after) {
  const Index d = sys.dim();
  const int threshold = widen_after > 0 ? widen_after : static_cast<int>(3 * d);
  const int hard_limit = threshold + 2 * static_cast<int>(d) + 2;

  InfinityReport report;
  std::vector<XRat> x(static_cast<std::size_t>(d), XRat::neg_inf());
  std::vector<bool> widened(static_cast<std::size_t>(d), false);
  for (int step = 1;; ++step) {
    if (step > hard_limit) throw Error("ascending iteration failed to stabilize");
    std::vector<XRat> next(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      next[j] = widened[j] ? XRat::pos_inf() : eval_extended(sys.equations[j], x);
      if (step > threshold && x[j].finite() && next[j] > x[j]) {
        widened[j] = true;
        next[j] = XRat::pos_inf();
      }
    }
    report.iterations = step;
    if (next == x) break;
    x = std::move(next);
  }

  for (Index j = 0; j < d; ++j) {
    const auto ji = static_cast<std::size_t>(j);
    if (x[ji].finite())
      report.residual_index.push_back(j);
    else
      report.eliminated.push_back({j, sys.names[ji], x[ji].infinity(), widened[ji]});
  }
  for (Index j : report.residual_index) {
    const auto ji = static_cast<std::size_t>(j);
    Partial p = substitute_infinities(sys.equations[ji], x);
    if (p.inf != 0)
      throw Error("variable " + sys.names[ji] + " is finite but its equation is infinite");
    report.residual.names.push_back(sys.names[ji]);
    report.residual.equations.push_back(reindex(*p.expr, report.residual_index));
  }
  report.values = std::move(x);
  return report;
}

namespace {

using Groups = std::vector<std::vector<AffineTerm>>;

Groups normal_groups(const Expr& e, std::size_t budget) {
  switch (e.kind()) {
    case Expr::Kind::Atom: return {{e.term()}};
    case Expr::Kind::Shift: {
      Groups g = normal_groups(e.children().front(), budget);
      for (auto& group : g)
        for (auto& t : group) t.constant += e.offset();
      return g;
    }
    case Expr::Kind::Min: {
      Groups out;
      for (const auto& c : e.children()) {
        Groups g = normal_groups(c, budget);
        out.insert(out.end(), std::make_move_iterator(g.begin()), std::make_move_iterator(g.end()));
      }
      return out;
    }
    case Expr::Kind::Max: {
      // max distributes over min: one action per child, terms concatenated.
      Groups out{{}};
      for (const auto& c : e.children()) {
        Groups g = normal_groups(c, budget);
        Groups next;
        std::size_t terms = 0;
        for (const auto& left : out)
          for (const auto& right : g) {
            auto merged = left;
            merged.insert(merged.end(), right.begin(), right.end());
            terms += merged.size();
            if (terms > budget)
              throw NormalizationTooLarge("min-of-max form exceeds " + std::to_string(budget) +
                                          " terms");
            next.push_back(std::move(merged));
          }
        out = std::move(next);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

PwaSystem::Coordinate normal_form(const Expr& e, std::size_t term_budget) {
  PwaSystem::Coordinate coord;
  std::size_t terms = 0;
  for (auto& g : normal_groups(e, term_budget)) {
    terms += g.size();
    coord.push_back(MaxGroup{std::move(g)});
  }
  if (terms > term_budget)
    throw NormalizationTooLarge("min-of-max form exceeds " + std::to_string(term_budget) + " terms");
  return coord;
}

NamedSystem normalize(const ExprSystem& sys, std::size_t term_budget) {
  std::vector<PwaSystem::Coordinate> coords;
  std::size_t used = 0;
  for (const auto& e : sys.equations) {
    auto coord = normal_form(e, term_budget - std::min(used, term_budget));
    for (const auto& g : coord) used += g.terms.size();
    coords.push_back(std::move(coord));
  }
  return {PwaSystem(sys.dim(), std::move(coords)), sys.names};
}

std::string to_string(const AffineTerm& t, const std::vector<std::string>& names) {
  std::ostringstream out;
  bool first = true;
  for (Index i = 0; i < t.grad.size(); ++i) {
    if (t.grad[i] == 0) continue;
    const Rat mag = abs(t.grad[i]);
    if (first)
      out << (t.grad[i] < 0 ? "-" : "");
    else
      out << (t.grad[i] < 0 ? " - " : " + ");
    if (mag != 1) out << to_string(mag) << '*';
    out << (static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)]
                                                       : "x" + std::to_string(i + 1));
    first = false;
  }
  if (first) return to_string(t.constant);
  if (t.constant > 0) out << " + " << to_string(t.constant);
  if (t.constant < 0) out << " - " << to_string(Rat(-t.constant));
  return out.str();
}

std::string to_string(const Expr& e, const std::vector<std::string>& names) {
  switch (e.kind()) {
    case Expr::Kind::Atom: return to_string(e.term(), names);
    case Expr::Kind::Shift: {
      const Rat& k = e.offset();
      std::string inner = to_string(e.children().front(), names);
      if (e.children().front().kind() == Expr::Kind::Atom) inner = "(" + inner + ")";
      if (k < 0) return inner + " - " + to_string(Rat(-k));
      return inner + " + " + to_string(k);
    }
    case Expr::Kind::Min:
    case Expr::Kind::Max: {
      std::string out = e.kind() == Expr::Kind::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < e.children().size(); ++i)
        out += (i ? ", " : "") + to_string(e.children()[i], names);
      return out + ")";
    }
  }
  return {};
}

}  // namespace pwafix
