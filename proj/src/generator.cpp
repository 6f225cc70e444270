#include "qhidden/generator.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numeric>

#include "qhidden/error.hpp"
#include "qhidden/rng.hpp"

namespace qhidden {
namespace {

constexpr std::uint32_t kMaxWidth = 30;

void check_width_and_q(std::uint32_t k, double q) {
  if (k < 2) throw ParameterError("clause width k must be at least 2, got " + std::to_string(k));
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("q must lie in (0, 1], got " + std::to_string(q));
}

double binomial(std::uint32_t n, std::uint32_t k) {
  double c = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// Picks k distinct variables (0-based) uniformly; order is the draw order.
void draw_variables(Rng& rng, std::uint32_t n, std::uint32_t k,
                    std::array<std::uint32_t, kMaxWidth>& vars) {
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t v;
    bool repeat;
    do {
      v = static_cast<std::uint32_t>(rng.below(n));
      repeat = false;
      for (std::uint32_t j = 0; j < i; ++j) repeat |= (vars[j] == v);
    } while (repeat);
    vars[i] = v;
  }
}

}  // namespace

GeneratorMode GeneratorMode::q_hidden(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("q must lie in (0, 1], got " + std::to_string(q));
  return GeneratorMode(Scheme::QHidden, q);
}

GeneratorMode GeneratorMode::parse(const std::string& name, double q) {
  if (name == "0-hidden") return zero_hidden();
  if (name == "1-hidden") return one_hidden();
  if (name == "2-hidden") return two_hidden();
  if (name == "q-hidden") return q_hidden(q);
  throw ParameterError("unknown generator mode '" + name + "'");
}

std::string GeneratorMode::name() const {
  switch (scheme_) {
    case Scheme::ZeroHidden: return "0-hidden";
    case Scheme::OneHidden: return "1-hidden";
    case Scheme::TwoHidden: return "2-hidden";
    case Scheme::QHidden: return "q-hidden";
  }
  return "?";
}

std::uint64_t clauses_for_density(double r, std::uint32_t n) {
  // nearbyint honours the default rounding mode, round-half-to-even.
  return static_cast<std::uint64_t>(std::nearbyint(r * static_cast<double>(n)));
}

std::uint64_t GeneratorParams::num_clauses() const {
  if (clauses) return *clauses;
  if (density) return clauses_for_density(*density, n);
  throw ParameterError("either a density r or a clause count m is required");
}

void GeneratorParams::validate() const {
  if (k < 2 || k > kMaxWidth)
    throw ParameterError("clause width k must lie in [2, " + std::to_string(kMaxWidth) + "]");
  if (n < k) throw ParameterError("need n >= k, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  if (!clauses) {
    if (!density) throw ParameterError("either a density r or a clause count m is required");
    if (!(*density > 0.0) || !std::isfinite(*density))
      throw ParameterError("density r must be positive, got " + std::to_string(*density));
  }
  if (mode.scheme() == Scheme::QHidden) check_width_and_q(k, mode.q());
}

std::vector<std::pair<std::string, std::string>> GeneratedInstance::metadata() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("mode", params.mode.name());
  kv.emplace_back("q", params.mode.scheme() == Scheme::QHidden ||
                               params.mode.scheme() == Scheme::OneHidden
                           ? format_double(params.mode.q())
                           : "");
  kv.emplace_back("k", std::to_string(params.k));
  kv.emplace_back("n", std::to_string(params.n));
  kv.emplace_back("r", params.density ? format_double(*params.density) : "");
  kv.emplace_back("m", std::to_string(formula.num_clauses()));
  kv.emplace_back("seed", std::to_string(params.seed));
  kv.emplace_back("selection", kVariableSelection);
  return kv;
}

std::vector<double> sign_pattern_distribution(std::uint32_t k, double q) {
  check_width_and_q(k, q);
  std::vector<double> p(k + 1, 0.0);
  const double norm = std::pow(1.0 + q, k) - 1.0;
  for (std::uint32_t t = 1; t <= k; ++t) p[t] = binomial(k, t) * std::pow(q, t) / norm;
  return p;
}

double expected_agree_fraction(std::uint32_t k, double q) {
  check_width_and_q(k, q);
  return q * std::pow(1.0 + q, k - 1) / (std::pow(1.0 + q, k) - 1.0);
}

double qstar(std::uint32_t k) {
  if (k == 2)
    throw ParameterError("for k=2 the balance equation (1-q)(1+q) = 1 has only the root q=0");
  if (k < 2) throw ParameterError("clause width k must be at least 3");
  // g(q) = (1-q)(1+q)^(k-1) - 1 has g(0) = 0, g > 0 just above 0 and g(1) = -1.
  // It is concave on [0,1] for k >= 3, so the positive root is unique.
  auto g = [k](double q) { return (1.0 - q) * std::pow(1.0 + q, k - 1) - 1.0; };
  double lo = 1e-3, hi = 1.0;
  while (g(lo) <= 0.0) lo /= 2.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

GeneratedInstance generate(const GeneratorParams& params) {
  params.validate();
  const std::uint32_t n = params.n;
  const std::uint32_t k = params.k;
  const std::uint64_t m = params.num_clauses();
  Rng rng(params.seed);

  GeneratedInstance out;
  out.params = params;

  Assignment hidden(n);
  if (params.mode.has_hidden())
    for (std::uint32_t i = 0; i < n; ++i) hidden.set(i, rng.coin());

  // Cumulative t-distribution for the reweighted schemes. OneHidden shares
  // this path with q = 1.
  std::vector<double> cumulative;
  const Scheme scheme = params.mode.scheme();
  if (scheme == Scheme::QHidden || scheme == Scheme::OneHidden) {
    auto p = sign_pattern_distribution(k, params.mode.q());
    cumulative.resize(k + 1);
    std::partial_sum(p.begin(), p.end(), cumulative.begin());
  }

  std::vector<Literal> literals;
  literals.reserve(m * k);
  std::array<std::uint32_t, kMaxWidth> vars{};
  std::array<std::uint32_t, kMaxWidth> positions{};
  std::array<bool, kMaxWidth> agree{};

  for (std::uint64_t c = 0; c < m; ++c) {
    draw_variables(rng, n, k, vars);
    switch (scheme) {
      case Scheme::ZeroHidden:
        for (std::uint32_t i = 0; i < k; ++i) agree[i] = rng.coin();
        break;
      case Scheme::TwoHidden: {
        // Uniform over the 2^k - 2 masks with 1 <= t <= k-1 agreeing positions.
        const std::uint64_t mask = 1 + rng.below((std::uint64_t{1} << k) - 2);
        for (std::uint32_t i = 0; i < k; ++i) agree[i] = ((mask >> i) & 1U) != 0;
        break;
      }
      case Scheme::OneHidden:
      case Scheme::QHidden: {
        const double u = rng.uniform();
        std::uint32_t t = 1;
        while (t < k && u >= cumulative[t]) ++t;
        // Uniform size-t subset of positions by partial Fisher-Yates.
        std::iota(positions.begin(), positions.begin() + k, 0U);
        for (std::uint32_t i = 0; i < t; ++i) {
          const auto j = i + static_cast<std::uint32_t>(rng.below(k - i));
          std::swap(positions[i], positions[j]);
        }
        for (std::uint32_t i = 0; i < k; ++i) agree[i] = false;
        for (std::uint32_t i = 0; i < t; ++i) agree[positions[i]] = true;
        break;
      }
    }
    for (std::uint32_t i = 0; i < k; ++i) {
      // For ZeroHidden `hidden` is all false, so agree[i] is the polarity
      // coin read as "negative".
      const bool hidden_value = hidden[vars[i]];
      const bool positive = agree[i] ? hidden_value : !hidden_value;
      literals.emplace_back(vars[i] + 1, positive);
    }
  }

  out.formula = Formula(n, k, std::move(literals));
  if (params.mode.has_hidden()) out.hidden = std::move(hidden);
  return out;
}

}  // namespace qhidden
