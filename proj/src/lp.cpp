#include "pwafix/lp.hpp"

#include <sstream>

namespace pwafix {

SolveError::SolveError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

const char* to_string(SolveError::Kind kind) {
  switch (kind) {
    case SolveError::Kind::NoFiniteFixedPoint: return "NoFiniteFixedPoint";
    case SolveError::Kind::UnboundedBelow: return "UnboundedBelow";
    case SolveError::Kind::Undecidable: return "Undecidable";
    case SolveError::Kind::MonotonicityViolation: return "MonotonicityViolation";
    case SolveError::Kind::InvariantBroken: return "InvariantBroken";
  }
  return "unknown";
}

LinearProgram build_lp(const PolicySystem& ps) {
  const Index d = ps.dim();
  LinearProgram lp{d, Vec::Ones(d), {}};
  for (Index j = 0; j < d; ++j) {
    for (const auto& term : ps.group(j).terms) {
      Vec row = -term.grad;
      row[j] += 1;
      lp.rows.push_back({std::move(row), term.constant});
    }
  }
  return lp;
}

namespace {

// Dense simplex tableau. Rows 0..m-1 are constraints, row m holds reduced
// costs; the last column is the right-hand side (for row m, minus the
// objective value).
class Tableau {
 public:
  Tableau(Mat t, std::vector<Index> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  Index rows() const { return static_cast<Index>(basis_.size()); }
  Index cols() const { return t_.cols() - 1; }
  const Rat& at(Index i, Index j) const { return t_(i, j); }
  const Rat& rhs(Index i) const { return t_(i, cols()); }
  Index basic(Index i) const { return basis_[static_cast<std::size_t>(i)]; }

  /// Installs `cost` as the objective and prices out the basic columns.
  void set_objective(const Vec& cost) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cols()) = cost.transpose();
    for (Index i = 0; i < rows(); ++i) {
      const Rat c = cost[basic(i)];
      if (c != 0) t_.row(rows()) -= c * t_.row(i);
    }
  }

  Rat objective_value() const { return -t_(rows(), cols()); }

  void pivot(Index r, Index c) {
    t_.row(r) /= Rat(t_(r, c));
    for (Index i = 0; i <= rows(); ++i) {
      if (i == r || t_(i, c) == 0) continue;
      const Rat factor = t_(i, c);
      t_.row(i) -= factor * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void drop_row(Index r) {
    Mat next(t_.rows() - 1, t_.cols());
    next.topRows(r) = t_.topRows(r);
    next.bottomRows(t_.rows() - 1 - r) = t_.bottomRows(t_.rows() - 1 - r);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

  /// Bland's rule. Returns -1 at optimality, otherwise the entering column of
  /// an unbounded ray.
  Index optimize(const std::vector<bool>& allowed) {
    for (;;) {
      Index enter = -1;
      for (Index j = 0; j < cols(); ++j)
        if (allowed[static_cast<std::size_t>(j)] && t_(rows(), j) < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return -1;

      Index leave = -1;
      Rat best_ratio;
      for (Index i = 0; i < rows(); ++i) {
        if (t_(i, enter) <= 0) continue;
        Rat ratio = rhs(i) / t_(i, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basic(i) < basic(leave))) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave < 0) return enter;
      pivot(leave, enter);
    }
  }

 private:
  Mat t_;
  std::vector<Index> basis_;
};

}  // namespace

LpOutcome simplex_solve(const LinearProgram& lp) {
  const Index n = lp.num_vars;
  const Index m = static_cast<Index>(lp.rows.size());
  if (lp.objective.size() != n) throw DimensionMismatch(n, lp.objective.size());
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != n) throw DimensionMismatch(n, row.coeffs.size());

  // Columns: x+ (n), x- (n), surplus (m), artificial (one per row whose
  // surplus cannot start basic).
  std::vector<Index> needs_artificial;
  for (Index i = 0; i < m; ++i)
    if (lp.rows[static_cast<std::size_t>(i)].rhs >= 0) needs_artificial.push_back(i);
  const Index structural = 2 * n + m;
  const Index cols = structural + static_cast<Index>(needs_artificial.size());

  Mat t = Mat::Zero(m + 1, cols + 1);
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const auto& row = lp.rows[static_cast<std::size_t>(i)];
    // a.x+ - a.x- - s = b, negated when b < 0 so the right-hand side is >= 0.
    const Rat sign = row.rhs < 0 ? Rat(-1) : Rat(1);
    t.row(i).segment(0, n) = sign * row.coeffs.transpose();
    t.row(i).segment(n, n) = -sign * row.coeffs.transpose();
    t(i, 2 * n + i) = -sign;
    t(i, cols) = sign * row.rhs;
    basis[static_cast<std::size_t>(i)] = 2 * n + i;
  }
  for (std::size_t k = 0; k < needs_artificial.size(); ++k) {
    const Index i = needs_artificial[k];
    const Index col = structural + static_cast<Index>(k);
    t(i, col) = 1;
    basis[static_cast<std::size_t>(i)] = col;
  }
  Tableau tab(std::move(t), std::move(basis));

  // Phase 1: minimize the sum of artificials.
  Vec phase1 = Vec::Zero(cols);
  for (Index c = structural; c < cols; ++c) phase1[c] = 1;
  tab.set_objective(phase1);
  tab.optimize(std::vector<bool>(static_cast<std::size_t>(cols), true));
  if (tab.objective_value() > 0) return Infeasible{};

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (Index i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basic(i) < structural) continue;
    Index pivot_col = -1;
    for (Index c = 0; c < structural && pivot_col < 0; ++c)
      if (tab.at(i, c) != 0) pivot_col = c;
    if (pivot_col >= 0)
      tab.pivot(i, pivot_col);
    else
      tab.drop_row(i);
  }

  // Phase 2 over structural columns only.
  Vec cost = Vec::Zero(cols);
  cost.segment(0, n) = lp.objective;
  cost.segment(n, n) = -lp.objective;
  tab.set_objective(cost);
  std::vector<bool> allowed(static_cast<std::size_t>(cols), false);
  for (Index c = 0; c < structural; ++c) allowed[static_cast<std::size_t>(c)] = true;
  const Index ray_col = tab.optimize(allowed);

  auto to_original = [n](const Vec& full) -> Vec {
    return full.segment(0, n) - full.segment(n, n);
  };
  if (ray_col >= 0) {
    Vec dir = Vec::Zero(cols);
    dir[ray_col] = 1;
    for (Index i = 0; i < tab.rows(); ++i) dir[tab.basic(i)] = -tab.at(i, ray_col);
    return Unbounded{to_original(dir)};
  }
  Vec full = Vec::Zero(cols);
  for (Index i = 0; i < tab.rows(); ++i) full[tab.basic(i)] = tab.rhs(i);
  return Optimal{to_original(full)};
}

Vec smallest_fixed_point_policy(const PolicySystem& ps) {
  const LpOutcome outcome = simplex_solve(build_lp(ps));
  if (std::holds_alternative<Infeasible>(outcome))
    throw SolveError(SolveError::Kind::NoFiniteFixedPoint,
                     "value determination: {x | g(x) <= x} is empty, the policy map has no "
                     "finite fixed point");
  if (const auto* ray = std::get_if<Unbounded>(&outcome))
    throw SolveError(SolveError::Kind::UnboundedBelow,
                     "value determination: objective unbounded along " + to_string(ray->ray) +
                         ", the policy map has no smallest finite fixed point");
  Vec x = std::get<Optimal>(outcome).x;
  if (eval(ps, x) != x)
    throw SolveError(SolveError::Kind::InvariantBroken,
                     "value determination: optimum " + to_string(x) + " is not a fixed point");
  return x;
}

std::string to_text(const LinearProgram& lp, const std::vector<std::string>& names) {
  auto name = [&](Index i) {
    return static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)]
                                                      : "x" + std::to_string(i + 1);
  };
  auto linear = [&](const Vec& coeffs) {
    std::ostringstream out;
    bool first = true;
    for (Index i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == 0) continue;
      const Rat mag = abs(coeffs[i]);
      if (first)
        out << (coeffs[i] < 0 ? "-" : "");
      else
        out << (coeffs[i] < 0 ? " - " : " + ");
      if (mag != 1) out << to_string(mag) << '*';
      out << name(i);
      first = false;
    }
    if (first) out << '0';
    return out.str();
  };
  std::ostringstream out;
  out << "minimize " << linear(lp.objective) << '\n';
  for (const auto& row : lp.rows) out << linear(row.coeffs) << " >= " << to_string(row.rhs) << '\n';
  return out.str();
}

}  // namespace pwafix
