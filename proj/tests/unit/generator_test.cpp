#include "qhidden/error.hpp"
#include "qhidden/generator.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>

using namespace qhidden;

namespace {

GeneratorParams params(GeneratorMode mode, std::uint32_t n, double r, std::uint64_t seed) {
  GeneratorParams p;
  p.mode = mode;
  p.n = n;
  p.density = r;
  p.seed = seed;
  return p;
}

// P(t) by brute-force enumeration of all 2^k sign patterns relative to the
// hidden assignment, each weighted by q^(agreeing literals).
std::vector<double> enumerate_pattern_weights(std::uint32_t k, double q) {
  std::vector<double> p(k + 1, 0.0);
  double total = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const int t = __builtin_popcount(mask);
    p[t] += std::pow(q, t);
    total += std::pow(q, t);
  }
  for (auto& v : p) v /= total;
  return p;
}

// Counts clauses by their number of literals agreeing with the hidden
// assignment.
std::array<std::uint64_t, 4> agreement_histogram(const GeneratedInstance& inst) {
  std::array<std::uint64_t, 4> hist{};
  for (std::size_t c = 0; c < inst.formula.num_clauses(); ++c) {
    int t = 0;
    for (auto lit : inst.formula.clause(c)) t += inst.hidden->satisfies(lit);
    ++hist[t];
  }
  return hist;
}

// Upper tail of chi-squared with 2 degrees of freedom.
double chi2_two_dof_pvalue(const std::array<std::uint64_t, 4>& hist, const std::vector<double>& p) {
  double total = 0.0;
  for (int t = 1; t <= 3; ++t) total += hist[t];
  double stat = 0.0;
  for (int t = 1; t <= 3; ++t) {
    const double expected = total * p[t];
    stat += (hist[t] - expected) * (hist[t] - expected) / expected;
  }
  return std::exp(-stat / 2.0);
}

}  // namespace

TEST(SignPatternTest, UniformOverSatisfyingPatternsAtQOne) {
  const auto p = sign_pattern_distribution(3, 1.0);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p[0], 0.0);
  EXPECT_NEAR(p[1], 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(p[2], 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(p[3], 1.0 / 7.0, 1e-15);
}

TEST(SignPatternTest, HalfReweighting) {
  const auto p = sign_pattern_distribution(3, 0.5);
  EXPECT_NEAR(p[1], 1.5 / 2.375, 1e-15);
  EXPECT_NEAR(p[2], 0.75 / 2.375, 1e-15);
  EXPECT_NEAR(p[3], 0.125 / 2.375, 1e-15);
}

TEST(SignPatternTest, MatchesEnumerationAndSumsToOne) {
  for (std::uint32_t k = 2; k <= 8; ++k) {
    for (double q : {0.05, 0.2, 0.5, 0.77, 1.0}) {
      const auto p = sign_pattern_distribution(k, q);
      const auto oracle = enumerate_pattern_weights(k, q);
      double sum = 0.0;
      for (std::uint32_t t = 0; t <= k; ++t) {
        EXPECT_NEAR(p[t], oracle[t], 1e-13) << "k=" << k << " q=" << q << " t=" << t;
        sum += p[t];
      }
      EXPECT_NEAR(sum, 1.0, 1e-13);
    }
  }
  EXPECT_THROW(sign_pattern_distribution(1, 0.5), ParameterError);
  EXPECT_THROW(sign_pattern_distribution(3, 0.0), ParameterError);
  EXPECT_THROW(sign_pattern_distribution(3, 1.5), ParameterError);
}

TEST(AgreeFractionTest, Values) {
  EXPECT_NEAR(expected_agree_fraction(3, 1.0), 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(expected_agree_fraction(3, qstar(3)), 0.5, 1e-12);
  EXPECT_LT(expected_agree_fraction(3, 0.3), 0.5);
  for (double q : {0.3, 0.5, 0.9}) {
    const auto oracle = enumerate_pattern_weights(3, q);
    double mean = 0.0;
    for (int t = 1; t <= 3; ++t) mean += oracle[t] * t / 3.0;
    EXPECT_NEAR(expected_agree_fraction(3, q), mean, 1e-14);
  }
}

TEST(AgreeFractionTest, SampledClausesAtQ03) {
  const auto inst = generate(params(GeneratorMode::q_hidden(0.3), 1000, 1000.0, 5));
  const auto hist = agreement_histogram(inst);
  double agree = 0.0, total = 0.0;
  for (int t = 1; t <= 3; ++t) {
    agree += static_cast<double>(t) * hist[t];
    total += 3.0 * hist[t];
  }
  const double p = expected_agree_fraction(3, 0.3);
  const double se = std::sqrt(0.5 * 0.5 / total);
  EXPECT_NEAR(agree / total, p, 4.0 * se);
  EXPECT_LT(agree / total, 0.5);
}

TEST(QStarTest, GoldenRatioForThreeSat) {
  const double q = qstar(3);
  EXPECT_NEAR(q, 0.6180339887, 1e-9);
  EXPECT_NEAR(q, (std::sqrt(5.0) - 1.0) / 2.0, 1e-12);
  EXPECT_NEAR((1 - q) * (1 + q) * (1 + q) - 1.0, 0.0, 1e-9);
}

TEST(QStarTest, FourSatMatchesBisectionOracle) {
  // Root of (1-q)(1+q)^3 = 1 from an independent bisection run.
  EXPECT_NEAR(qstar(4), 0.83928675521416, 1e-9);
  EXPECT_NEAR(qstar(5), 0.9275619754829253, 1e-9);
  EXPECT_THROW(qstar(2), ParameterError);
}

TEST(GeneratorTest, HiddenAssignmentSatisfiesEveryClause) {
  const GeneratorMode modes[] = {GeneratorMode::one_hidden(), GeneratorMode::q_hidden(0.2),
                                 GeneratorMode::q_hidden(qstar(3)), GeneratorMode::q_hidden(1.0)};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (const auto& mode : modes) {
      const auto inst = generate(params(mode, 60, 6.0, seed));
      ASSERT_TRUE(inst.hidden);
      ASSERT_EQ(evaluate(inst.formula, *inst.hidden), 0u);
    }
    const auto two = generate(params(GeneratorMode::two_hidden(), 60, 6.0, seed));
    ASSERT_EQ(evaluate(two.formula, *two.hidden), 0u);
    ASSERT_EQ(evaluate(two.formula, two.hidden->complement()), 0u);
  }
  EXPECT_FALSE(generate(params(GeneratorMode::zero_hidden(), 10, 2.0, 1)).hidden);
}

TEST(GeneratorTest, ClauseShape) {
  GeneratorParams p = params(GeneratorMode::q_hidden(0.5), 30, 4.0, 9);
  p.k = 5;
  const auto inst = generate(p);
  EXPECT_EQ(inst.formula.num_clauses(), 120u);
  EXPECT_EQ(inst.formula.width(), 5u);
  EXPECT_TRUE(inst.formula.uniform());
  EXPECT_EQ(inst.formula.num_vars(), 30u);
}

TEST(GeneratorTest, Deterministic) {
  const auto p = params(GeneratorMode::q_hidden(0.4), 100, 4.2, 77);
  const auto a = generate(p);
  const auto b = generate(p);
  EXPECT_EQ(a.formula, b.formula);
  EXPECT_EQ(a.hidden, b.hidden);
  auto other = p;
  other.seed = 78;
  EXPECT_FALSE(generate(other).formula == a.formula);
}

TEST(GeneratorTest, OneHiddenIsQHiddenAtOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = generate(params(GeneratorMode::one_hidden(), 50, 5.0, seed));
    const auto b = generate(params(GeneratorMode::q_hidden(1.0), 50, 5.0, seed));
    EXPECT_EQ(a.formula, b.formula);
    EXPECT_EQ(a.hidden, b.hidden);
  }
}

TEST(GeneratorTest, OneHiddenPatternChiSquared) {
  const auto inst = generate(params(GeneratorMode::one_hidden(), 1000, 1000.0, 21));
  EXPECT_GT(chi2_two_dof_pvalue(agreement_histogram(inst), {0.0, 3.0 / 7, 3.0 / 7, 1.0 / 7}), 0.01);
}

TEST(GeneratorTest, TwoHiddenPatternsAreUniformOverSix) {
  const auto inst = generate(params(GeneratorMode::two_hidden(), 1000, 600.0, 4));
  const auto hist = agreement_histogram(inst);
  EXPECT_EQ(hist[0], 0u);
  EXPECT_EQ(hist[3], 0u);
  const double total = static_cast<double>(hist[1] + hist[2]);
  EXPECT_NEAR(hist[1] / total, 0.5, 4.0 * std::sqrt(0.25 / total));
}

TEST(GeneratorTest, ZeroHiddenSignsAreFair) {
  const auto inst = generate(params(GeneratorMode::zero_hidden(), 1000, 300.0, 8));
  double positive = 0.0;
  for (auto lit : inst.formula.literals()) positive += lit.positive();
  const double total = static_cast<double>(inst.formula.literals().size());
  EXPECT_NEAR(positive / total, 0.5, 4.0 * std::sqrt(0.25 / total));
}

TEST(GeneratorTest, ClauseCountRounding) {
  EXPECT_EQ(clauses_for_density(0.5, 5), 2u);
  EXPECT_EQ(clauses_for_density(0.5, 7), 4u);
  EXPECT_EQ(clauses_for_density(4.26, 100), 426u);
  auto p = params(GeneratorMode::one_hidden(), 10, 3.0, 0);
  p.clauses = 7;
  EXPECT_EQ(p.num_clauses(), 7u);
}

TEST(GeneratorTest, ParameterErrors) {
  EXPECT_THROW(GeneratorMode::q_hidden(0.0), ParameterError);
  EXPECT_THROW(GeneratorMode::q_hidden(1.01), ParameterError);
  EXPECT_THROW(GeneratorMode::parse("3-hidden", 0.5), ParameterError);
  EXPECT_EQ(GeneratorMode::parse("q-hidden", 0.5), GeneratorMode::q_hidden(0.5));

  auto p = params(GeneratorMode::one_hidden(), 2, 3.0, 0);
  EXPECT_THROW(generate(p), ParameterError);
  p.n = 10;
  p.k = 1;
  EXPECT_THROW(generate(p), ParameterError);
  p.k = 3;
  p.density.reset();
  EXPECT_THROW(generate(p), ParameterError);
  p.density = -1.0;
  EXPECT_THROW(generate(p), ParameterError);
}

TEST(GeneratorTest, Metadata) {
  const auto inst = generate(params(GeneratorMode::q_hidden(0.5), 10, 3.0, 12));
  const auto pairs = inst.metadata();
  std::map<std::string, std::string> meta(pairs.begin(), pairs.end());
  EXPECT_EQ(meta["mode"], "q-hidden");
  EXPECT_EQ(meta["m"], "30");
  EXPECT_EQ(meta["seed"], "12");
  EXPECT_EQ(meta["selection"], kVariableSelection);
}
