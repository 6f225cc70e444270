#include "qhidden/analytics.hpp"

#include <cmath>
#include <string>

#include "qhidden/error.hpp"
#include "qhidden/generator.hpp"

namespace qhidden::analytics {
namespace {

void check(std::uint32_t k, double r, double q) {
  if (k < 2) throw ParameterError("clause width k must be at least 2");
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("density r must be positive");
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("q must lie in (0, 1]");
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
}

// x log x with 0 log 0 = 0.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double log_clause_factor(std::uint32_t k, double q, double alpha) {
  const double norm = std::pow(1.0 + q, k) - 1.0;
  const double hit = std::pow(q * (1.0 - alpha) + alpha, k) - std::pow(alpha, k);
  return std::log1p(-hit / norm);
}

constexpr double kGridStep = 1e-3;
constexpr double kGoldenTol = 1e-7;

}  // namespace

double log_f_alpha(std::uint32_t k, double r, double q, double alpha) {
  check(k, r, q);
  check_alpha(alpha);
  const double entropy = -xlogx(alpha) - xlogx(1.0 - alpha);
  return entropy + r * log_clause_factor(k, q, alpha);
}

double f_alpha(std::uint32_t k, double r, double q, double alpha) {
  return std::exp(log_f_alpha(k, r, q, alpha));
}

double f_prime_half(std::uint32_t k, double r, double q) {
  const double h = kDerivativeStep;
  return (f_alpha(k, r, q, 0.5 + h) - f_alpha(k, r, q, 0.5 - h)) / (2.0 * h);
}

double clause_violation_probability(std::uint32_t k, double q, double alpha) {
  check_alpha(alpha);
  const double norm = std::pow(1.0 + q, k) - 1.0;
  double sum = 0.0;
  double binom = 1.0;
  for (std::uint32_t t = 1; t <= k; ++t) {
    binom = binom * (k - t + 1) / t;
    sum += binom * std::pow(q, t) * std::pow(1.0 - alpha, t) * std::pow(alpha, k - t);
  }
  return sum / norm;
}

double ExpectedSolutions::value() const { return std::exp(log_value); }

ExpectedSolutions expected_solutions_exact(std::uint32_t n, std::uint64_t m,
                                           std::uint32_t k, double q, double alpha) {
  if (n == 0) throw ParameterError("n must be positive");
  if (k < 2) throw ParameterError("clause width k must be at least 2");
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("q must lie in (0, 1]");
  check_alpha(alpha);
  const double agree = alpha * n;
  const double rounded = std::round(agree);
  if (std::abs(agree - rounded) > 1e-9)
    throw DomainError("alpha*n = " + std::to_string(agree) + " is not an integer");
  const double a = rounded;
  const double log_binom =
      std::lgamma(n + 1.0) - std::lgamma(a + 1.0) - std::lgamma(n - a + 1.0);
  const double p_sat = 1.0 - clause_violation_probability(k, q, alpha);
  const double log_sat = m == 0 ? 0.0 : static_cast<double>(m) * std::log(p_sat);
  return {log_binom + log_sat};
}

DensityCurve sample_density_curve(std::uint32_t k, double r, double q, std::uint32_t points) {
  if (points < 2) throw ParameterError("need at least 2 grid points");
  DensityCurve curve{k, r, q, {}};
  curve.samples.reserve(points);
  for (std::uint32_t i = 0; i < points; ++i) {
    const double alpha = static_cast<double>(i) / (points - 1);
    curve.samples.emplace_back(alpha, f_alpha(k, r, q, alpha));
  }
  return curve;
}

Maximum max_log_f_below_half(std::uint32_t k, double r, double q) {
  check(k, r, q);
  const int steps = static_cast<int>(std::lround(0.5 / kGridStep));
  int best = 0;
  double best_val = log_f_alpha(k, r, q, 0.0);
  for (int i = 1; i <= steps; ++i) {
    const double v = log_f_alpha(k, r, q, i * kGridStep);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0.0, (best - 1) * kGridStep);
  double hi = std::min(0.5, (best + 1) * kGridStep);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = log_f_alpha(k, r, q, a);
  double fb = log_f_alpha(k, r, q, b);
  while (hi - lo > kGoldenTol) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = log_f_alpha(k, r, q, b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = log_f_alpha(k, r, q, a);
    }
  }
  Maximum result{best * kGridStep, best_val};
  const double mid = 0.5 * (lo + hi);
  const double v = log_f_alpha(k, r, q, mid);
  if (v > result.log_value) result = {mid, v};
  return result;
}

RcBound rc_upper_bound(std::uint32_t k, double q) {
  if (k < 3) throw RegimeError("the bound needs a balanced q*, which does not exist for k < 3");
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("q must lie in (0, 1]");
  const double q_balanced = qstar(k);
  if (q > q_balanced + 1e-12)
    throw RegimeError("q=" + std::to_string(q) + " exceeds q*=" + std::to_string(q_balanced) +
                      "; the bound is only meaningful for q <= q*");

  // max log f over alpha <= 1/2 is strictly decreasing in r: every clause
  // factor is below 1. At r -> 0 it is log 2 > 0.
  auto excess = [&](double r) { return max_log_f_below_half(k, r, q).log_value; };
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw RangeError("could not bracket the bound for q=" + std::to_string(q));
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) >= 0.0) lo = mid; else hi = mid;
  }
  const double r = 0.5 * (lo + hi);
  return {k, q, r, max_log_f_below_half(k, r, q).alpha};
}

}  // namespace qhidden::analytics
