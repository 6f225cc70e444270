#include "qhidden/bench.hpp"
#include "qhidden/error.hpp"
#include "qhidden/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qhidden;
using namespace qhidden::bench;

namespace {

SweepConfig small_walksat_sweep() {
  SweepConfig cfg;
  cfg.modes = {"1-hidden", "q-hidden"};
  cfg.qs = {0.5, 1.0};
  cfg.ns = {40, 60};
  cfg.rs = {3.0, 4.5};
  cfg.trials = 5;
  cfg.master_seed = 3;
  return cfg;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(MedianTest, MatchesSortedOracle) {
  EXPECT_EQ(median({3.0}), 3.0);
  EXPECT_EQ(median({4.0, 1.0}), 2.5);
  EXPECT_EQ(median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_THROW(median({}), ParameterError);
  Rng rng(12);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(1 + rng.below(30));
    for (auto& x : v) x = static_cast<double>(rng.below(50));
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    const double expected = sorted.size() % 2 ? sorted[h] : (sorted[h - 1] + sorted[h]) / 2;
    EXPECT_EQ(median(v), expected);
  }
}

TEST(SweepTest, SingleCell) {
  SweepConfig cfg;
  cfg.modes = {"1-hidden"};
  cfg.ns = {50};
  cfg.rs = {4.0};
  cfg.trials = 1;
  const auto res = run_sweep(cfg);
  ASSERT_EQ(res.records.size(), 1u);
  ASSERT_EQ(res.summaries.size(), 1u);
  EXPECT_EQ(res.records[0].status, RecordStatus::Sat);
  EXPECT_EQ(res.records[0].m, 200u);
  EXPECT_EQ(res.summaries[0].median, res.records[0].value);
  const auto csv = to_csv(res);
  EXPECT_EQ(count_lines(csv), 3u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
}

TEST(SweepTest, CanonicalOrderAndCounts) {
  const auto cfg = small_walksat_sweep();
  const auto points = cfg.points();
  ASSERT_EQ(points.size(), 12u);
  EXPECT_EQ(points[0].mode, GeneratorMode::one_hidden());
  EXPECT_EQ(points[4].mode, GeneratorMode::q_hidden(0.5));
  EXPECT_EQ(points[8].mode, GeneratorMode::q_hidden(1.0));
  EXPECT_EQ(points[1].r, 4.5);
  EXPECT_EQ(points[2].n, 60u);

  const auto res = run_sweep(cfg);
  EXPECT_EQ(res.records.size(), 60u);
  EXPECT_EQ(res.summaries.size(), 12u);
  for (std::size_t i = 0; i < res.records.size(); ++i) EXPECT_EQ(res.records[i].trial, i % 5);
}

TEST(SweepTest, RepeatRunsGiveIdenticalCsv) {
  const auto cfg = small_walksat_sweep();
  EXPECT_EQ(to_csv(run_sweep(cfg)), to_csv(run_sweep(cfg)));
}

TEST(SweepTest, ParallelMatchesSerial) {
  auto cfg = small_walksat_sweep();
  const auto serial = to_csv(run_sweep(cfg));
  cfg.threads = 4;
  EXPECT_EQ(to_csv(run_sweep(cfg)), serial);
}

TEST(SweepTest, TrialSeedDependsOnlyOnCell) {
  const auto cfg = small_walksat_sweep();
  const auto p = cfg.points()[5];
  EXPECT_EQ(trial_seed(3, p, 2), trial_seed(3, p, 2));
  EXPECT_NE(trial_seed(3, p, 2), trial_seed(3, p, 3));
  EXPECT_NE(trial_seed(3, p, 2), trial_seed(4, p, 2));
  auto other = p;
  other.r += 0.25;
  EXPECT_NE(trial_seed(3, p, 2), trial_seed(3, other, 2));

  // Adding points to a sweep leaves existing cells unchanged.
  auto bigger = cfg;
  bigger.rs.push_back(6.0);
  const auto a = run_sweep(cfg), b = run_sweep(bigger);
  EXPECT_EQ(a.records[0].seed, b.records[0].seed);
  EXPECT_EQ(a.records[0].value, b.records[0].value);
}

TEST(SweepTest, SummaryRowAndPlotData) {
  SweepConfig cfg;
  cfg.modes = {"0-hidden"};
  cfg.ns = {30};
  cfg.rs = {2.0, 6.0};
  cfg.trials = 4;
  cfg.solver = SolverSpec::parse("dpll");
  const auto res = run_sweep(cfg);
  EXPECT_EQ(res.summaries[1].gaveup_fraction, 0.0);
  const auto csv = to_csv(res);
  EXPECT_NE(csv.find("0-hidden,,3,30,2,60,summary,,dpll,gaveup=0.000000,median_nodes,"), std::string::npos);

  const auto plot = to_plot_data(res);
  EXPECT_EQ(plot.rfind("# mode=0-hidden q= n=30 nodes\n2 ", 0), 0u);
  EXPECT_EQ(count_lines(plot), 3u);
}

TEST(SweepTest, KeepsInstances) {
  const auto dir = std::filesystem::temp_directory_path() / "qhidden-bench-keep";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  SweepConfig cfg;
  cfg.modes = {"q-hidden"};
  cfg.qs = {0.5};
  cfg.ns = {20};
  cfg.rs = {4.0};
  cfg.trials = 2;
  cfg.keep_cnf_dir = dir.string();
  run_sweep(cfg);
  EXPECT_TRUE(std::filesystem::exists(dir / "q-hidden_q0.5_n20_r4_t0.cnf"));
  EXPECT_TRUE(std::filesystem::exists(dir / "q-hidden_q0.5_n20_r4_t1.cnf"));
  std::filesystem::remove_all(dir);
}

TEST(SweepTest, UnwritableOutput) {
  SweepConfig cfg;
  cfg.modes = {"1-hidden"};
  cfg.ns = {20};
  cfg.rs = {3.0};
  cfg.trials = 1;
  cfg.output = "/nonexistent-dir/out.csv";
  EXPECT_THROW(run_sweep(cfg), Error);
}

TEST(SweepTest, WritesOutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "qhidden-bench-out.csv";
  SweepConfig cfg;
  cfg.modes = {"2-hidden"};
  cfg.ns = {20};
  cfg.rs = {3.0};
  cfg.trials = 2;
  cfg.solver = SolverSpec::parse("uc");
  cfg.output = path.string();
  const auto res = run_sweep(cfg);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), to_csv(res));
  std::filesystem::remove(path);
}

TEST(SweepTest, InvalidConfig) {
  SweepConfig cfg;
  cfg.ns = {20};
  cfg.rs = {3.0};
  EXPECT_THROW(cfg.validate(), ParameterError);  // q-hidden without q
  cfg.qs = {0.5};
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), ParameterError);
  cfg.trials = 1;
  cfg.solver = SolverSpec::parse("external");
  EXPECT_THROW(cfg.validate(), ParameterError);
  EXPECT_THROW(SolverSpec::parse("cdcl"), ParameterError);
}

TEST(ConfigTest, ParsesFlatKeyValues) {
  const auto cfg = parse_sweep_config(
      "# walksat q sweep\n"
      "modes = 1-hidden, q-hidden\n"
      "q = star, 0.3\n"
      "n = 100, 200\n"
      "r = 4:5:0.5\n"
      "trials = 15\n"
      "solver = walksat\n"
      "max_flips = 1000\n"
      "max_tries = 20\n"
      "greedy = netgain\n"
      "seed = 9\n"
      "threads = 2\n");
  EXPECT_EQ(cfg.modes, (std::vector<std::string>{"1-hidden", "q-hidden"}));
  ASSERT_EQ(cfg.qs.size(), 2u);
  EXPECT_NEAR(cfg.qs[0], 0.6180339887, 1e-9);
  EXPECT_EQ(cfg.ns, (std::vector<std::uint32_t>{100, 200}));
  EXPECT_EQ(cfg.rs, (std::vector<double>{4.0, 4.5, 5.0}));
  EXPECT_EQ(cfg.trials, 15u);
  EXPECT_EQ(cfg.solver.kind, SolverKind::WalkSAT);
  EXPECT_EQ(cfg.solver.ceiling(), 20000.0);
  EXPECT_EQ(cfg.solver.walksat.greedy, GreedyRule::NetGain);
  EXPECT_EQ(cfg.master_seed, 9u);
  EXPECT_EQ(cfg.threads, 2u);
  EXPECT_EQ(cfg.points().size(), 18u);
}

TEST(ConfigTest, ReportsLine) {
  try {
    parse_sweep_config("n = 100\nr = 4\nbogus = 1\n");
    FAIL() << "unknown key accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_sweep_config("n = 100\nr = 4\ntrials\n"), ParseError);
  EXPECT_THROW(parse_sweep_config("n = 1.5\nr = 4\n"), ParseError);
  EXPECT_THROW(parse_sweep_config("n = 10\nr = 5:4:1\n"), ParseError);
}

TEST(NumberListTest, RangesAndStar) {
  const auto v = parse_number_list("4.0:5.0:0.25, 7");
  EXPECT_EQ(v, (std::vector<double>{4.0, 4.25, 4.5, 4.75, 5.0, 7.0}));
  EXPECT_NEAR(parse_number_list("q*", 4)[0], 0.83928675521416, 1e-9);
  EXPECT_THROW(parse_number_list("1:2"), ParameterError);
}

TEST(InstanceNameTest, Format) {
  EXPECT_EQ(instance_file_name({GeneratorMode::zero_hidden(), 3, 200, 5.5}, 7), "0-hidden_qna_n200_r5.5_t7.cnf");
}

TEST(RcEstimateTest, Errors) {
  RcSearch s;
  s.solver = SolverSpec::parse("walksat");
  s.r_grid = {4.0, 5.0};
  EXPECT_THROW(estimate_rc_empirical(s), ParameterError);
  s.r_grid = {4.0, 5.0, 5.0};
  EXPECT_THROW(estimate_rc_empirical(s), ParameterError);
  s.r_grid = {4.0, 5.0, 6.0};
  s.solver = SolverSpec::parse("majority");
  EXPECT_THROW(estimate_rc_empirical(s), ParameterError);
}

TEST(RcEstimateTest, FlatCurveIsLowConfidence) {
  // Densities so low that every instance has no clauses: zero flips everywhere.
  RcSearch s;
  s.q = 0.5;
  s.n = 20;
  s.solver = SolverSpec::parse("walksat");
  s.r_grid = {0.01, 0.02, 0.024};
  s.trials = 3;
  const auto est = estimate_rc_empirical(s);
  EXPECT_FALSE(est.hit_ceiling);
  EXPECT_TRUE(est.low_confidence);
  EXPECT_EQ(est.r, 0.01);
  EXPECT_EQ(est.scanned.size(), 3u);
}

TEST(RcEstimateTest, StopsAtCeiling) {
  RcSearch s;
  s.q = 0.3;
  s.n = 60;
  s.solver = SolverSpec::parse("walksat");
  s.solver.walksat.max_flips = 5;
  s.solver.walksat.max_tries = 1;
  s.r_grid = {0.05, 6.0, 7.0, 8.0};
  s.trials = 5;
  const auto est = estimate_rc_empirical(s);
  EXPECT_TRUE(est.hit_ceiling);
  EXPECT_EQ(est.r, 6.0);
  EXPECT_EQ(est.scanned.size(), 2u);
}

TEST(RcEstimateTest, DpllUsesPeak) {
  RcSearch s;
  s.q = 0.5;
  s.n = 40;
  s.solver = SolverSpec::parse("dpll");
  s.r_grid = {1.0, 4.0, 12.0};
  s.trials = 5;
  const auto est = estimate_rc_empirical(s);
  EXPECT_FALSE(est.hit_ceiling);
  EXPECT_EQ(est.scanned.size(), 3u);
  const auto peak = std::max_element(est.scanned.begin(), est.scanned.end(),
                                     [](const auto& a, const auto& b) { return a.median < b.median; });
  EXPECT_EQ(est.r, peak->point.r);
}
