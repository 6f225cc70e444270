#pragma once

#include <array>
#include <optional>
#include <vector>

namespace qhidden::uc_ode {

/// Clause densities during a Unit Clause run on a 3-SAT formula whose hidden
/// assignment is taken to be all-true. s3[j] (resp. s2[j]) is the number of
/// 3-clauses (2-clauses) with j positive literals, divided by n.
struct UcState {
  double x = 0.0;  ///< fraction of variables set
  std::array<double, 4> s3{};
  std::array<double, 3> s2{};
};

/// Two-type branching process of unit clauses within one round.
/// Type 0 is "set false", type 1 "set true".
struct BranchingStats {
  std::array<std::array<double, 2>, 2> M{};
  double lambda_max = 0.0;
  /// Expected number of false / true settings in a round. Only meaningful
  /// when !critical.
  double mF = 0.0;
  double mT = 0.0;
  bool critical = false;
};

/// A sampled point of the trajectory.
struct UcSample {
  UcState state;
  BranchingStats stats;
};

struct UcTrajectory {
  std::vector<UcSample> samples;
  /// Set to the first x at which lambda_max >= 1; empty if the run stays
  /// subcritical up to the cutoff.
  std::optional<double> critical_at;

  bool subcritical() const { return !critical_at.has_value(); }
};

inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kCutoff = 1e-6;          ///< integrate up to x = 1 - kCutoff
inline constexpr double kSampleInterval = 1e-2;
inline constexpr double kNegativeTolerance = 1e-9;

/// x = 0, s3[j] = r C(3,j) q^j / ((1+q)^3 - 1) for j >= 1, s3[0] = 0,
/// s2 = 0. Throws ParameterError unless r > 0 and 0 < q <= 1.
UcState initial_state(double r, double q);

/// M = (1/(1-x)) [[s2[1], 2 s2[0]], [2 s2[2], s2[1]]],
/// lambda_max = (s2[1] + 2 sqrt(s2[0] s2[2])) / (1-x), and when subcritical
/// (mF, mT) = (I - M)^-1 (1/2, 1/2). Criticality is a flag, not an error.
BranchingStats branching_stats(const UcState& state);

/// RK4 integration from x = 0 to 1 - kCutoff with a fixed step, shortened
/// near the end to at most a tenth of 1 - x, sampling every kSampleInterval. Stops at the first step boundary where lambda_max >= 1.
/// Throws IntegratorError if a density drops below -kNegativeTolerance.
UcTrajectory integrate(double r, double q, double step = kDefaultStep);

/// Density separating subcritical from critical runs, by bisection on r to
/// within `tolerance`. Throws RangeError if r = 20 is still subcritical.
double uc_threshold(double q, double tolerance = 1e-3, double step = kDefaultStep);

}  // namespace qhidden::uc_ode
