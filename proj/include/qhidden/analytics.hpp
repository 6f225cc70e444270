#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qhidden {

/// First-moment analysis of q-hidden formulas.
///
/// For an assignment B agreeing with the hidden assignment on a fraction
/// alpha of the variables, the expected number of such solutions behaves
/// like f(alpha)^n, where
///
///   f(alpha) = alpha^-alpha (1-alpha)^-(1-alpha)
///              * (1 - ((q(1-alpha) + alpha)^k - alpha^k) / ((1+q)^k - 1))^r.
///
/// Everything here is evaluated in log space; the linear value is exp(log).
namespace analytics {

/// log f(alpha). Uses 0^0 = 1 at alpha in {0, 1}.
/// Throws ParameterError / DomainError on out-of-range arguments.
double log_f_alpha(std::uint32_t k, double r, double q, double alpha);
double f_alpha(std::uint32_t k, double r, double q, double alpha);

/// Step used by f_prime_half for the central difference.
inline constexpr double kDerivativeStep = 1e-5;

/// f'(1/2) by central difference with step kDerivativeStep. The sign is
/// what matters: positive above q*, zero at q*, negative below.
double f_prime_half(std::uint32_t k, double r, double q);

/// Probability that an assignment at overlap alpha falsifies one random
/// clause, sum_t C(k,t) q^t (1-alpha)^t alpha^(k-t) / ((1+q)^k - 1).
/// Literal positions are independent (variables drawn with replacement).
double clause_violation_probability(std::uint32_t k, double q, double alpha);

/// E[X_alpha] = C(n, alpha n) (1 - violation probability)^m, exact
/// (no Stirling approximation).
struct ExpectedSolutions {
  double log_value;
  double value() const;
};

/// Throws DomainError if alpha*n is not an integer (within 1e-9).
ExpectedSolutions expected_solutions_exact(std::uint32_t n, std::uint64_t m,
                                           std::uint32_t k, double q, double alpha);

struct DensityCurve {
  std::uint32_t k;
  double r;
  double q;
  std::vector<std::pair<double, double>> samples;  ///< (alpha, f(alpha))
};

/// Samples f on `points` equally spaced alphas covering [0, 1].
DensityCurve sample_density_curve(std::uint32_t k, double r, double q,
                                  std::uint32_t points);

struct Maximum {
  double alpha;
  double log_value;
};

/// Maximum of log f over alpha in [0, 1/2]: grid of step 1e-3 to bracket,
/// then golden-section refinement to 1e-7 around the best grid point.
Maximum max_log_f_below_half(std::uint32_t k, double r, double q);

struct RcBound {
  std::uint32_t k;
  double q;
  double r_upper;
  double argmax_alpha;
};

/// Density at which max{f(alpha) : alpha <= 1/2} = 1, an upper bound on the
/// density above which only solutions near the hidden assignment survive.
/// Requires 0 < q <= q*(k); throws RegimeError for q > q*(k).
RcBound rc_upper_bound(std::uint32_t k, double q);

}  // namespace analytics
}  // namespace qhidden
