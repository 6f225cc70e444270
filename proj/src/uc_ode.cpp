#include "qhidden/uc_ode.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>

#include "qhidden/error.hpp"

namespace qhidden::uc_ode {
namespace {

constexpr double kBinom3[4] = {1.0, 3.0, 3.0, 1.0};
constexpr double kMaxDensity = 20.0;
constexpr double kMaxRelativeStep = 0.1;

struct Derivative {
  std::array<double, 4> s3{};
  std::array<double, 3> s2{};
};

// (mF, mT) used by the flow. At stage points the 2x2 system is solved even
// when slightly supercritical; criticality is only judged at step boundaries.
std::pair<double, double> round_settings(const UcState& s) {
  const double scale = 1.0 / (1.0 - s.x);
  const double a = s.s2[1] * scale, b = 2.0 * s.s2[0] * scale;
  const double c = 2.0 * s.s2[2] * scale, d = s.s2[1] * scale;
  // (I - M) = [[1-a, -b], [-c, 1-d]]
  const double det = (1.0 - a) * (1.0 - d) - b * c;
  const double mF = 0.5 * ((1.0 - d) + b) / det;
  const double mT = 0.5 * (c + (1.0 - a)) / det;
  return {mF, mT};
}

Derivative flow(const UcState& s) {
  Derivative d;
  const double inv = 1.0 / (1.0 - s.x);
  for (int j = 0; j < 4; ++j) d.s3[j] = -3.0 * s.s3[j] * inv;
  const auto [mF, mT] = round_settings(s);
  const double total = mF + mT;
  for (int j = 0; j < 3; ++j) {
    const double gain = mF * (j + 1) * s.s3[j + 1] + mT * (3 - j) * s.s3[j];
    d.s2[j] = -2.0 * s.s2[j] * inv + gain * inv / total;
  }
  return d;
}

UcState advance(const UcState& s, const Derivative& d, double h) {
  UcState out = s;
  out.x = s.x + h;
  for (int j = 0; j < 4; ++j) out.s3[j] += h * d.s3[j];
  for (int j = 0; j < 3; ++j) out.s2[j] += h * d.s2[j];
  return out;
}

UcState rk4_step(const UcState& s, double h) {
  const Derivative k1 = flow(s);
  const Derivative k2 = flow(advance(s, k1, h / 2));
  const Derivative k3 = flow(advance(s, k2, h / 2));
  const Derivative k4 = flow(advance(s, k3, h));
  UcState out = s;
  out.x = s.x + h;
  for (int j = 0; j < 4; ++j)
    out.s3[j] += h / 6.0 * (k1.s3[j] + 2 * k2.s3[j] + 2 * k3.s3[j] + k4.s3[j]);
  for (int j = 0; j < 3; ++j)
    out.s2[j] += h / 6.0 * (k1.s2[j] + 2 * k2.s2[j] + 2 * k3.s2[j] + k4.s2[j]);
  return out;
}

void check_nonnegative(UcState& s) {
  auto fix = [&](double& v) {
    if (v < -kNegativeTolerance)
      throw IntegratorError("density fell to " + std::to_string(v) + " at x=" +
                            std::to_string(s.x) + "; step too large?");
    if (v < 0.0) v = 0.0;
  };
  for (auto& v : s.s3) fix(v);
  for (auto& v : s.s2) fix(v);
}

}  // namespace

UcState initial_state(double r, double q) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("density r must be positive");
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("q must lie in (0, 1]");
  UcState s;
  const double norm = std::pow(1.0 + q, 3) - 1.0;
  for (int j = 1; j <= 3; ++j) s.s3[j] = r * kBinom3[j] * std::pow(q, j) / norm;
  return s;
}

BranchingStats branching_stats(const UcState& state) {
  if (!(state.x < 1.0)) throw DomainError("branching statistics need x < 1");
  BranchingStats b;
  const double scale = 1.0 / (1.0 - state.x);
  b.M = {{{state.s2[1] * scale, 2.0 * state.s2[0] * scale},
          {2.0 * state.s2[2] * scale, state.s2[1] * scale}}};
  b.lambda_max = (state.s2[1] + 2.0 * std::sqrt(state.s2[0] * state.s2[2])) * scale;
  b.critical = b.lambda_max >= 1.0;
  if (!b.critical) std::tie(b.mF, b.mT) = round_settings(state);
  return b;
}

UcTrajectory integrate(double r, double q, double step) {
  if (!(step > 0.0) || step > 0.1) throw ParameterError("step must lie in (0, 0.1]");
  UcTrajectory traj;
  UcState s = initial_state(r, q);
  const double end = 1.0 - kCutoff;
  double next_sample = 0.0;
  std::uint64_t i = 0;
  while (true) {
    const BranchingStats stats = branching_stats(s);
    if (s.x >= next_sample - 1e-12 || stats.critical || s.x >= end) {
      traj.samples.push_back({s, stats});
      next_sample += kSampleInterval;
    }
    if (stats.critical) {
      traj.critical_at = s.x;
      break;
    }
    if (s.x >= end) break;
    // Recompute x from the step index so the grid does not drift. Close to
    // x = 1 the flow grows like 1/(1-x), so steps are capped at a fixed
    // fraction of the remaining distance.
    double target = std::min(end, static_cast<double>(i + 1) * step);
    const double cap = s.x + kMaxRelativeStep * (1.0 - s.x);
    if (target > cap) target = std::min(end, cap);
    else ++i;
    s = rk4_step(s, target - s.x);
    s.x = target;
    check_nonnegative(s);
  }
  return traj;
}

double uc_threshold(double q, double tolerance, double step) {
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (integrate(kMaxDensity, q, step).subcritical())
    throw RangeError("no critical density found in (0, 20] for q=" + std::to_string(q));
  double lo = 0.0, hi = kMaxDensity;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (integrate(mid, q, step).subcritical()) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qhidden::uc_ode
