#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "qhidden/formula.hpp"

namespace qhidden {

enum class SolveStatus { Sat, Unsat, GaveUp };

std::string to_string(SolveStatus status);

/// Result of one solver run. `effort` is solver specific: UC counts rounds
/// (free steps), DPLL counts split nodes, WalkSAT counts flips over all
/// tries. A Sat outcome always carries a model that satisfies the formula.
struct SolveOutcome {
  SolveStatus status = SolveStatus::GaveUp;
  std::optional<Assignment> model;
  std::uint64_t effort = 0;
};

/// Unit Clause heuristic: each round satisfies a uniformly random literal
/// over the unset variables, then propagates unit clauses until none are
/// left. Never backtracks; gives up at the first empty clause.
SolveOutcome uc_run(const Formula& formula, std::uint64_t seed);

struct DpllOptions {
  static constexpr std::int64_t kUnlimited = std::numeric_limits<std::int64_t>::max();
  /// Maximum number of split nodes; must be positive.
  std::int64_t node_limit = kUnlimited;
  /// With backtracking off the search stops (GaveUp) at the first conflict,
  /// which makes the first branch a UC run.
  bool backtrack = true;
};

/// Backtracking search with unit propagation at every node. Splits on a
/// uniformly random unset variable and tries its two values in random order.
/// A node is one split assignment; propagated assignments are free.
/// Throws ParameterError if node_limit <= 0.
SolveOutcome dpll_solve(const Formula& formula, std::uint64_t seed,
                        const DpllOptions& options = {});

enum class GreedyRule {
  BreakCount,  ///< minimise the number of satisfied clauses broken
  NetGain,     ///< maximise (clauses made) - (clauses broken)
};

struct WalkSatParams {
  std::uint64_t max_flips = 10'000;
  std::uint64_t max_tries = 10'000;
  /// Probability of a random (rather than greedy) flip at each step.
  double noise = 0.5;
  std::uint64_t seed = 0;
  GreedyRule greedy = GreedyRule::BreakCount;

  /// Total flip budget, max_flips * max_tries.
  std::uint64_t ceiling() const { return max_flips * max_tries; }
};

/// WalkSAT. Each try starts from a uniformly random assignment; each step
/// picks a uniformly random unsatisfied clause and flips one of its
/// variables: with probability `noise` a uniformly random one, otherwise the
/// one chosen by the greedy rule (ties broken uniformly).
/// Throws ParameterError on a zero budget or noise outside [0, 1].
SolveOutcome walksat_solve(const Formula& formula, const WalkSatParams& params);

/// Sets each variable to the polarity of the majority of its occurrences;
/// ties (including unused variables) are broken by a seeded coin.
Assignment majority_assignment(const Formula& formula, std::uint64_t seed);

}  // namespace qhidden
