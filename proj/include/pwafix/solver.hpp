// Policy iteration for the smallest fixed point of a min-max-affine map.
//
// Each round computes the smallest fixed point u of the current one-player
// map (value determination), then either switches to the argmin policy when
// f(u) < u, or, when f(u) = u, inspects the semidifferential f'_u on the
// negative cone: if its only fixed direction is zero, u is the smallest fixed
// point; otherwise a fixed direction h < 0 selects a policy whose smallest
// fixed point lies strictly below u.
#ifndef PWAFIX_SOLVER_HPP
#define PWAFIX_SOLVER_HPP

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "pwafix/lp.hpp"
#include "pwafix/spectral.hpp"

namespace pwafix {

/// f(u) < u: switched to the argmin policy.
struct Strict {};
/// f(u) = u with a nonzero fixed direction h <= 0 of f'_u.
struct Descent {
  Vec h;
};
/// f(u) = u and u is minimal.
struct Terminal {};

using Improvement = std::variant<Strict, Descent, Terminal>;

struct IterationRecord {
  Policy policy;
  Vec value;
  Improvement improvement;
};

struct Solution {
  Vec u;
  std::vector<IterationRecord> trace;
  /// Negative-cone test outcome at u; always RadiusLtOne.
  SpectralOutcome certificate;
  /// Policy of the final round, indexing the actions of the input system.
  Policy policy;
  /// The initial policy had no finite fixed point and the run went through the
  /// capped system (see solve_smallest); trace policies may then refer to the
  /// extra cap action, whose index is the original action count.
  bool capped = false;
};

enum class SeedPolicy { First, Warmstart };

struct SolveOptions {
  /// Negative-cone test iteration cap; <= 0 selects default_spectral_cap.
  int oracle2_cap = 0;
  SeedPolicy seed = SeedPolicy::Warmstart;
  /// Overrides `seed`.
  std::optional<Policy> initial;
  /// Hard limit on value determinations; 0 selects (number of policies + 1).
  std::size_t max_iterations = 0;
  bool record_trace = true;
  /// Restart from a capped system when the initial policy has no finite
  /// fixed point.
  bool capped_fallback = true;
  /// Called with each program handed to value determination.
  std::function<void(std::size_t round, const Policy&, const LinearProgram&)> on_value_determination;
};

/// Argmin policy at three Kleene iterates of f from the zero vector.
Policy initial_policy(const PwaSystem& sys);

/// The argmin policy at u when f(u) < u; nothing when f(u) = u.
/// Throws SolveError InvariantBroken when f(u) <= u fails.
std::optional<Policy> improve_strict(const PwaSystem& sys, const Vec& u);

struct Minimal {
  SpectralOutcome certificate;
};
struct NewPolicy {
  Policy policy;
  Vec h;
};
struct Undecided {
  SpectralOutcome outcome;
};
using MinimalityStep = std::variant<Minimal, NewPolicy, Undecided>;

/// Requires f(u) = u. Runs the negative-cone test on f'_u; on a fixed
/// direction h picks, per coordinate, the active action minimizing its
/// semidifferential at h (lowest index on ties).
MinimalityStep improve_minimality(const PwaSystem& sys, const Vec& u, int cap);

/// Smallest fixed point of a valid system, with audit trace and certificate.
///
/// Throws SolveError: NoFiniteFixedPoint / UnboundedBelow from value
/// determination, Undecidable when the negative-cone test is inconclusive,
/// MonotonicityViolation or InvariantBroken on internal inconsistencies.
///
/// If the initial policy map has no finite fixed point, the run restarts on
/// f ^ M (every coordinate gets an extra constant action M) from the all-M
/// policy. M exceeds a Cramer/Hadamard bound on any vertex of the value
/// determination programs, so when f has a smallest fixed point it is the
/// smallest fixed point of f ^ M; otherwise the capped answer is not a fixed
/// point of f and NoFiniteFixedPoint is raised.
Solution solve_smallest(const PwaSystem& sys, const SolveOptions& opts = {});

/// The cap M used by the fallback.
Rat vertex_bound(const PwaSystem& sys);

}  // namespace pwafix

#endif  // PWAFIX_SOLVER_HPP
