#include "pwafix/core.hpp"

#include <algorithm>
#include <sstream>

namespace pwafix {

bool AffineTerm::is_constant() const {
  return std::all_of(grad.begin(), grad.end(), [](const Rat& w) { return w == 0; });
}

Rat MaxGroup::operator()(const Vec& x) const {
  Rat best = terms.front()(x);
  for (std::size_t b = 1; b < terms.size(); ++b) best = std::max(best, terms[b](x));
  return best;
}

PwaSystem::PwaSystem(Index dim, std::vector<Coordinate> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (static_cast<Index>(coords_.size()) != dim_)
    throw DimensionMismatch(dim_, static_cast<Index>(coords_.size()));
}

namespace {

std::string where(Index j, Index a, Index b) {
  std::ostringstream out;
  out << "at coord " << j + 1;
  if (a >= 0) out << " (action " << a + 1;
  if (b >= 0) out << ", term " << b + 1;
  if (a >= 0) out << ')';
  return out.str();
}

}  // namespace

ValidationReport validate_system(const PwaSystem& sys) {
  using Kind = Violation::Kind;
  ValidationReport report;
  if (sys.dim() < 1) {
    report.push_back({Kind::ZeroDimension, -1, -1, -1, "system dimension must be at least 1"});
    return report;
  }
  for (Index j = 0; j < sys.dim(); ++j) {
    const auto& actions = sys.coord(j);
    if (actions.empty()) {
      report.push_back({Kind::EmptyActionSet, j, -1, -1, "empty action set " + where(j, -1, -1)});
      continue;
    }
    for (Index a = 0; a < static_cast<Index>(actions.size()); ++a) {
      const auto& terms = actions[static_cast<std::size_t>(a)].terms;
      if (terms.empty()) {
        report.push_back({Kind::EmptyGroup, j, a, -1, "empty max group " + where(j, a, -1)});
        continue;
      }
      for (Index b = 0; b < static_cast<Index>(terms.size()); ++b) {
        const auto& t = terms[static_cast<std::size_t>(b)];
        if (t.grad.size() != sys.dim()) {
          report.push_back({Kind::GradientLength, j, a, b,
                            "gradient length " + std::to_string(t.grad.size()) + " != " +
                                std::to_string(sys.dim()) + " " + where(j, a, b)});
          continue;
        }
        Rat sum = 0;
        for (Index i = 0; i < t.grad.size(); ++i) {
          if (t.grad[i] < 0)
            report.push_back({Kind::NegativeGradient, j, a, b,
                              "negative gradient entry " + to_string(t.grad[i]) + " for variable " +
                                  std::to_string(i + 1) + " " + where(j, a, b)});
          sum += t.grad[i];
        }
        if (sum > 1)
          report.push_back({Kind::GradientSumAboveOne, j, a, b,
                            "gradient sum " + to_string(sum) + " > 1 " + where(j, a, b)});
      }
    }
  }
  return report;
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string msg = "invalid system:";
  for (const auto& v : report) msg += "\n  " + v.message;
  return msg;
}

}  // namespace

InvalidSystem::InvalidSystem(ValidationReport report)
    : Error(summarize(report)), report_(std::move(report)) {}

void require_valid(const PwaSystem& sys) {
  if (auto report = validate_system(sys); !report.empty()) throw InvalidSystem(std::move(report));
}

std::string to_string(const Policy& p) {
  std::ostringstream out;
  out << '[';
  for (std::size_t j = 0; j < p.choice.size(); ++j) out << (j ? " " : "") << p.choice[j];
  out << ']';
  return out.str();
}

PolicySystem::PolicySystem(PwaSystem sys) : sys_(std::move(sys)) {
  for (Index j = 0; j < sys_.dim(); ++j)
    if (sys_.num_actions(j) != 1)
      throw Error("policy system coordinate " + std::to_string(j + 1) + " has " +
                  std::to_string(sys_.num_actions(j)) + " actions");
}

Vec eval(const PwaSystem& sys, const Vec& x) {
  if (x.size() != sys.dim()) throw DimensionMismatch(sys.dim(), x.size());
  Vec y(sys.dim());
  for (Index j = 0; j < sys.dim(); ++j) {
    const auto& actions = sys.coord(j);
    Rat best = actions.front()(x);
    for (std::size_t a = 1; a < actions.size(); ++a) best = std::min(best, actions[a](x));
    y[j] = best;
  }
  return y;
}

std::vector<Rat> action_values(const PwaSystem& sys, Index j, const Vec& x) {
  if (x.size() != sys.dim()) throw DimensionMismatch(sys.dim(), x.size());
  std::vector<Rat> values;
  values.reserve(sys.coord(j).size());
  for (const auto& group : sys.coord(j)) values.push_back(group(x));
  return values;
}

PolicySystem restrict(const PwaSystem& sys, const Policy& policy) {
  if (policy.size() != sys.dim()) throw DimensionMismatch(sys.dim(), policy.size());
  std::vector<PwaSystem::Coordinate> coords;
  coords.reserve(static_cast<std::size_t>(sys.dim()));
  for (Index j = 0; j < sys.dim(); ++j) {
    Index a = policy.choice[static_cast<std::size_t>(j)];
    if (a < 0 || a >= sys.num_actions(j))
      throw IndexOutOfRange("policy chooses action " + std::to_string(a) + " at coord " +
                            std::to_string(j + 1) + ", which has " +
                            std::to_string(sys.num_actions(j)) + " actions");
    coords.push_back({sys.coord(j)[static_cast<std::size_t>(a)]});
  }
  return PolicySystem(PwaSystem(sys.dim(), std::move(coords)));
}

Policy argmin_policy(const PwaSystem& sys, const Vec& x) {
  Policy p;
  p.choice.resize(static_cast<std::size_t>(sys.dim()));
  for (Index j = 0; j < sys.dim(); ++j) {
    auto values = action_values(sys, j, x);
    p.choice[static_cast<std::size_t>(j)] =
        std::min_element(values.begin(), values.end()) - values.begin();
  }
  return p;
}

std::size_t policy_count(const PwaSystem& sys, std::size_t cap) {
  std::size_t count = 1;
  for (Index j = 0; j < sys.dim(); ++j) {
    auto n = static_cast<std::size_t>(sys.num_actions(j));
    if (n != 0 && count > cap / n) return cap;
    count *= n;
  }
  return std::min(count, cap);
}

KleeneResult kleene_lfp(const PwaSystem& sys, const Vec& start, int max_iter) {
  if (start.size() != sys.dim()) throw DimensionMismatch(sys.dim(), start.size());
  KleeneResult result{start, false, 0};
  for (int k = 0; k < max_iter; ++k) {
    Vec next = eval(sys, result.point);
    if (next == result.point) {
      result.converged = true;
      return result;
    }
    result.point = std::move(next);
    result.iterations = k + 1;
  }
  // The last iterate may already be fixed.
  result.converged = eval(sys, result.point) == result.point;
  return result;
}

}  // namespace pwafix
