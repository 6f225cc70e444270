#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qhidden/formula.hpp"

namespace qhidden {

enum class Scheme {
  ZeroHidden,  ///< uniform random k-SAT, nothing planted
  OneHidden,   ///< uniform over clauses satisfied by A (same as QHidden(1))
  TwoHidden,   ///< uniform over clauses satisfied by A and its complement
  QHidden,     ///< clause with t agreeing literals drawn with weight q^t
};

/// Generation scheme plus the reweighting parameter for QHidden.
class GeneratorMode {
 public:
  static GeneratorMode zero_hidden() { return GeneratorMode(Scheme::ZeroHidden, 0.0); }
  static GeneratorMode one_hidden() { return GeneratorMode(Scheme::OneHidden, 1.0); }
  static GeneratorMode two_hidden() { return GeneratorMode(Scheme::TwoHidden, 0.0); }
  /// Throws ParameterError unless 0 < q <= 1.
  static GeneratorMode q_hidden(double q);

  /// Parses "0-hidden", "1-hidden", "2-hidden" or "q-hidden" (q supplied
  /// separately). Throws ParameterError for anything else.
  static GeneratorMode parse(const std::string& name, double q);

  Scheme scheme() const { return scheme_; }
  /// The effective q: 1 for OneHidden, meaningless for ZeroHidden/TwoHidden.
  double q() const { return q_; }
  bool has_hidden() const { return scheme_ != Scheme::ZeroHidden; }
  /// "0-hidden", "1-hidden", "2-hidden" or "q-hidden".
  std::string name() const;

  friend bool operator==(const GeneratorMode&, const GeneratorMode&) = default;

 private:
  GeneratorMode(Scheme scheme, double q) : scheme_(scheme), q_(q) {}
  Scheme scheme_;
  double q_;
};

struct GeneratorParams {
  GeneratorMode mode = GeneratorMode::one_hidden();
  std::uint32_t n = 0;
  std::uint32_t k = 3;
  /// Clause density; m = round(r*n) with ties to even.
  std::optional<double> density;
  /// Explicit clause count. Takes precedence when both are set.
  std::optional<std::uint64_t> clauses;
  std::uint64_t seed = 0;

  /// Resolved clause count. Throws ParameterError if neither field is set.
  std::uint64_t num_clauses() const;
  /// Throws ParameterError on any violated invariant.
  void validate() const;
};

struct GeneratedInstance {
  Formula formula;
  std::optional<Assignment> hidden;
  GeneratorParams params;

  /// Key/value metadata: mode, q, k, n, r, m, seed, selection.
  std::vector<std::pair<std::string, std::string>> metadata() const;
};

/// Variables inside a clause are drawn without replacement. Recorded in
/// instance metadata as the literal-selection convention.
inline constexpr const char* kVariableSelection = "without-replacement";

/// P(t) for t = 0..k: probability that a generated clause has exactly t
/// literals agreeing with the hidden assignment, C(k,t) q^t / ((1+q)^k - 1).
/// Entry 0 is always 0. Throws ParameterError unless k >= 2 and 0 < q <= 1.
std::vector<double> sign_pattern_distribution(std::uint32_t k, double q);

/// Probability that a uniformly chosen literal occurrence agrees with the
/// hidden assignment: q (1+q)^(k-1) / ((1+q)^k - 1).
double expected_agree_fraction(std::uint32_t k, double q);

/// The root in (0,1) of (1-q)(1+q)^(k-1) = 1, where literal occurrences are
/// balanced. Throws ParameterError for k = 2 (the root degenerates to 0).
double qstar(std::uint32_t k);

/// Draws a random instance. Pure in `params`: equal params give equal
/// instances.
GeneratedInstance generate(const GeneratorParams& params);

/// m = round(r*n), ties to even.
std::uint64_t clauses_for_density(double r, std::uint32_t n);

}  // namespace qhidden
