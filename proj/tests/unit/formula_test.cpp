#include "qhidden/error.hpp"
#include "qhidden/formula.hpp"
#include "qhidden/generator.hpp"
#include "qhidden/rng.hpp"

#include <gtest/gtest.h>

using namespace qhidden;

TEST(LiteralTest, Encoding) {
  const Literal a(3, true);
  const Literal b = Literal::from_dimacs(-3);
  EXPECT_EQ(a.var(), 3u);
  EXPECT_EQ(a.index(), 2u);
  EXPECT_EQ(a.code(), 4u);
  EXPECT_EQ(b.code(), 5u);
  EXPECT_EQ(~a, b);
  EXPECT_EQ(b.dimacs(), -3);
  EXPECT_EQ(Literal::from_code(b.code()), b);
}

TEST(FormulaTest, Validation) {
  EXPECT_THROW(Formula::from_dimacs(2, {{1, 3}}), ValidationError);
  EXPECT_THROW(Formula::from_dimacs(3, {{1, -1, 2}}), ValidationError);
  EXPECT_THROW(Formula(3, std::vector<std::vector<Literal>>{{}}), ValidationError);
  EXPECT_THROW(Formula(3, 3, std::vector<Literal>(4, Literal(1, true))), ValidationError);
}

TEST(FormulaTest, MixedWidths) {
  const auto f = Formula::from_dimacs(3, {{1}, {-1, 2, 3}});
  EXPECT_FALSE(f.uniform());
  EXPECT_EQ(f.width(), 3u);
  EXPECT_EQ(f.clause(0).size(), 1u);
  EXPECT_EQ(f.clause(1)[0], Literal(1, false));
}

TEST(EvaluateTest, Examples) {
  const Formula empty(5, 3, {});
  EXPECT_EQ(evaluate(empty, Assignment(5)), 0u);
  EXPECT_EQ(evaluate(empty, Assignment(5, true)), 0u);

  const auto single = Formula::from_dimacs(3, {{1, 2, 3}});
  EXPECT_EQ(evaluate(single, Assignment(3)), 1u);
  EXPECT_EQ(evaluate(single, Assignment(std::vector<std::uint8_t>{0, 1, 0})), 0u);

  EXPECT_THROW(evaluate(single, Assignment(4)), DimensionError);
}

TEST(EvaluateTest, MonotoneUnderClauseAddition) {
  Rng rng(17);
  for (int round = 0; round < 200; ++round) {
    GeneratorParams p;
    p.mode = GeneratorMode::zero_hidden();
    p.n = 20;
    p.clauses = 60;
    p.seed = round;
    const auto inst = generate(p);
    std::vector<std::uint8_t> bits(20);
    for (auto& b : bits) b = rng.coin();
    const Assignment a(bits);

    std::vector<std::vector<Literal>> clauses;
    std::size_t previous = 0;
    for (std::size_t c = 0; c < inst.formula.num_clauses(); ++c) {
      const auto cl = inst.formula.clause(c);
      clauses.emplace_back(cl.begin(), cl.end());
      const auto now = evaluate(Formula(20, clauses), a);
      ASSERT_GE(now, previous);
      ASSERT_LE(now, previous + 1);
      previous = now;
    }
    EXPECT_EQ(previous, evaluate(inst.formula, a));
  }
}

TEST(OverlapTest, Examples) {
  const Assignment a(std::vector<std::uint8_t>{1, 0, 1, 1});
  const Assignment b(std::vector<std::uint8_t>{1, 0, 1, 0});
  EXPECT_DOUBLE_EQ(overlap_alpha(a, a), 1.0);
  EXPECT_DOUBLE_EQ(overlap_alpha(a, a.complement()), 0.0);
  EXPECT_DOUBLE_EQ(overlap_alpha(a, b), 0.75);
  EXPECT_THROW(overlap_alpha(a, Assignment(3)), DimensionError);
}

TEST(OverlapTest, ComplementIdentity) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::uint8_t> x(37), y(37);
    for (auto& v : x) v = rng.coin();
    for (auto& v : y) v = rng.coin();
    const Assignment a(x), b(y);
    EXPECT_NEAR(overlap_alpha(a, b) + overlap_alpha(a, b.complement()), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(overlap_alpha(a, b), overlap_alpha(b, a));
  }
}

TEST(OccurrenceListsTest, IndexedByLiteralCode) {
  const auto f = Formula::from_dimacs(2, {{1, 2}, {-1, 2}, {1}});
  const auto occ = occurrence_lists(f);
  ASSERT_EQ(occ.size(), 4u);
  EXPECT_EQ(occ[Literal(1, true).code()], (std::vector<std::uint32_t>{0, 2}));
  EXPECT_EQ(occ[Literal(1, false).code()], (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(occ[Literal(2, true).code()], (std::vector<std::uint32_t>{0, 1}));
  EXPECT_TRUE(occ[Literal(2, false).code()].empty());
}
