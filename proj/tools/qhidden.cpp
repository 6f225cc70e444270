// qhidden: generate q-hidden k-SAT instances, solve them, and run the
// analysis and benchmark tooling from the command line.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qhidden/analytics.hpp"
#include "qhidden/bench.hpp"
#include "qhidden/dimacs.hpp"
#include "qhidden/error.hpp"
#include "qhidden/generator.hpp"
#include "qhidden/solvers.hpp"
#include "qhidden/uc_ode.hpp"

namespace {

using namespace qhidden;

std::string num(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// Accepts a number or "star" for the balanced value q*(k).
double parse_q(const std::string& text, std::uint32_t k) {
  auto values = bench::parse_number_list(text, k);
  if (values.size() != 1) throw ParameterError("expected a single q, got '" + text + "'");
  return values.front();
}

struct GenOptions {
  std::string mode = "q-hidden";
  std::uint32_t n = 100;
  std::uint32_t k = 3;
  double r = 0.0;
  std::uint64_t m = 0;
  std::string q = "star";
  std::uint64_t seed = 1;
  std::string out;
  std::string meta;
  bool no_hidden = false;
};

int cmd_gen(const GenOptions& o) {
  GeneratorParams p;
  const double q = o.mode == "q-hidden" ? parse_q(o.q, o.k) : 1.0;
  p.mode = GeneratorMode::parse(o.mode, q);
  p.n = o.n;
  p.k = o.k;
  if (o.m > 0) p.clauses = o.m;
  if (o.r > 0.0) p.density = o.r;
  p.seed = o.seed;
  auto inst = generate(p);
  std::vector<std::string> comments;
  std::string meta_text;
  for (const auto& [key, value] : inst.metadata()) {
    comments.push_back(key + " " + value);
    meta_text += key + " = " + value + "\n";
  }
  write_output(o.out, write_dimacs(inst.formula, o.no_hidden ? std::nullopt : inst.hidden, comments));
  if (!o.meta.empty()) write_output(o.meta, meta_text);
  return 0;
}

struct SolveOptions {
  std::string solver = "walksat";
  std::string in;
  std::uint64_t seed = 1;
  std::uint64_t max_flips = 10'000;
  std::uint64_t max_tries = 10'000;
  double noise = 0.5;
  std::string greedy = "break";
  std::int64_t node_limit = DpllOptions::kUnlimited;
};

int cmd_solve(const SolveOptions& o) {
  const auto doc = parse_dimacs(read_file(o.in));
  const Formula& f = doc.formula;
  SolveOutcome out;
  if (o.solver == "uc") {
    out = uc_run(f, o.seed);
  } else if (o.solver == "dpll") {
    DpllOptions opt;
    opt.node_limit = o.node_limit;
    out = dpll_solve(f, o.seed, opt);
  } else if (o.solver == "walksat") {
    WalkSatParams wp;
    wp.max_flips = o.max_flips;
    wp.max_tries = o.max_tries;
    wp.noise = o.noise;
    wp.seed = o.seed;
    wp.greedy = o.greedy == "netgain" ? GreedyRule::NetGain : GreedyRule::BreakCount;
    out = walksat_solve(f, wp);
  } else if (o.solver == "majority") {
    auto a = majority_assignment(f, o.seed);
    const auto unsat = evaluate(f, a);
    out.effort = unsat;
    if (unsat == 0) {
      out.status = SolveStatus::Sat;
      out.model = std::move(a);
    }
  } else {
    throw ParameterError("unknown solver '" + o.solver + "'");
  }

  std::cout << "c effort " << out.effort << "\n";
  switch (out.status) {
    case SolveStatus::Sat: {
      std::cout << "s SATISFIABLE\nv";
      for (std::size_t i = 0; i < out.model->size(); ++i)
        std::cout << ' ' << ((*out.model)[i] ? "" : "-") << i + 1;
      std::cout << " 0\n";
      return 10;
    }
    case SolveStatus::Unsat: std::cout << "s UNSATISFIABLE\n"; return 20;
    case SolveStatus::GaveUp: std::cout << "s UNKNOWN\n"; return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-hidden k-SAT generator, solvers and analysis"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance in DIMACS CNF");
  gen_cmd->add_option("--mode", gen.mode, "0-hidden | 1-hidden | 2-hidden | q-hidden")
      ->check(CLI::IsMember({"0-hidden", "1-hidden", "2-hidden", "q-hidden"}));
  gen_cmd->add_option("--n", gen.n, "number of variables")->required();
  gen_cmd->add_option("--k", gen.k, "clause width");
  auto* r_opt = gen_cmd->add_option("--r", gen.r, "clause density m/n");
  auto* m_opt = gen_cmd->add_option("--m", gen.m, "explicit clause count");
  r_opt->excludes(m_opt);
  gen_cmd->add_option("--q", gen.q, "reweighting parameter, or 'star' for the balanced value");
  gen_cmd->add_option("--seed", gen.seed, "64-bit seed");
  gen_cmd->add_option("--out", gen.out, "output file (default stdout)");
  gen_cmd->add_option("--meta", gen.meta, "write key = value metadata to this file");
  gen_cmd->add_flag("--no-hidden", gen.no_hidden, "omit the 'c hidden' line");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "run a built-in solver on a DIMACS file");
  solve_cmd->add_option("--solver", solve.solver, "uc | dpll | walksat | majority")
      ->check(CLI::IsMember({"uc", "dpll", "walksat", "majority"}));
  solve_cmd->add_option("--in", solve.in, "DIMACS file, '-' for stdin")->required();
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--max-flips", solve.max_flips);
  solve_cmd->add_option("--max-tries", solve.max_tries);
  solve_cmd->add_option("--noise", solve.noise);
  solve_cmd->add_option("--greedy", solve.greedy)->check(CLI::IsMember({"break", "netgain"}));
  solve_cmd->add_option("--node-limit", solve.node_limit);

  auto* analyze = app.add_subcommand("analyze", "first-moment analytics");
  analyze->require_subcommand(1);
  std::uint32_t a_k = 3;
  double a_r = 6.0;
  std::string a_q = "0.5";
  std::uint32_t a_grid = 1001;
  auto* falpha = analyze->add_subcommand("falpha", "CSV of (alpha, f)");
  falpha->add_option("--k", a_k);
  falpha->add_option("--r", a_r)->required();
  falpha->add_option("--q", a_q)->required();
  falpha->add_option("--grid", a_grid, "number of alpha samples");
  auto* qstar_cmd = analyze->add_subcommand("qstar", "balanced q for width k");
  qstar_cmd->add_option("--k", a_k);
  auto* rc_cmd = analyze->add_subcommand("rc", "analytic upper bound on r_c(q)");
  rc_cmd->add_option("--k", a_k);
  rc_cmd->add_option("--q", a_q)->required();

  auto* ucode = app.add_subcommand("uc-ode", "Unit Clause differential-equation model (k=3)");
  ucode->require_subcommand(1);
  double u_r = 2.0, u_step = uc_ode::kDefaultStep, u_tol = 1e-3;
  std::string u_q = "star";
  auto* traj = ucode->add_subcommand("trajectory", "CSV of the sampled trajectory");
  traj->add_option("--r", u_r)->required();
  traj->add_option("--q", u_q)->required();
  traj->add_option("--step", u_step);
  auto* thr = ucode->add_subcommand("threshold", "critical density for this q");
  thr->add_option("--q", u_q)->required();
  thr->add_option("--tol", u_tol);
  thr->add_option("--step", u_step);

  auto* bench_cmd = app.add_subcommand("bench", "experiment sweeps");
  bench_cmd->require_subcommand(1);
  std::string b_config, b_out, b_plot;
  unsigned b_threads = 0;
  auto* sweep = bench_cmd->add_subcommand("sweep", "run a sweep described by a config file");
  sweep->add_option("--config", b_config)->required();
  sweep->add_option("--out", b_out, "CSV output (overrides the config)");
  sweep->add_option("--plot-data", b_plot, "also write gnuplot two-column data");
  sweep->add_option("--threads", b_threads);

  bench::RcSearch rc;
  std::string rc_q = "0.5", rc_solver = "walksat", rc_grid = "4.0:8.0:0.25", rc_ext;
  double rc_timeout = 60.0;
  auto* brc = bench_cmd->add_subcommand("rc", "empirical threshold density r_c(q)");
  brc->add_option("--q", rc_q)->required();
  brc->add_option("--solver", rc_solver)->check(CLI::IsMember({"walksat", "dpll", "external"}));
  brc->add_option("--n", rc.n);
  brc->add_option("--r-grid", rc_grid, "comma list or start:stop:step");
  brc->add_option("--trials", rc.trials);
  brc->add_option("--seed", rc.master_seed);
  brc->add_option("--threads", rc.threads);
  brc->add_option("--max-flips", rc.solver.walksat.max_flips);
  brc->add_option("--max-tries", rc.solver.walksat.max_tries);
  brc->add_option("--noise", rc.solver.walksat.noise);
  brc->add_option("--node-limit", rc.solver.node_limit);
  brc->add_option("--command", rc_ext, "external command template containing {cnf}");
  brc->add_option("--timeout", rc_timeout);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) return cmd_solve(solve);
    if (*falpha) {
      const double q = parse_q(a_q, a_k);
      const auto curve = analytics::sample_density_curve(a_k, a_r, q, a_grid);
      std::cout << "alpha,f\n";
      for (const auto& [alpha, f] : curve.samples) std::cout << num(alpha) << ',' << num(f) << '\n';
      return 0;
    }
    if (*qstar_cmd) {
      std::cout << num(qstar(a_k)) << '\n';
      return 0;
    }
    if (*rc_cmd) {
      const auto b = analytics::rc_upper_bound(a_k, parse_q(a_q, a_k));
      std::cout << "q,r_upper,argmax_alpha\n" << num(b.q) << ',' << num(b.r_upper) << ','
                << num(b.argmax_alpha) << '\n';
      return 0;
    }
    if (*traj) {
      const auto t = uc_ode::integrate(u_r, parse_q(u_q, 3), u_step);
      std::cout << "x,s30,s31,s32,s33,s20,s21,s22,lambda,mF,mT\n";
      for (const auto& s : t.samples) {
        std::cout << num(s.state.x);
        for (double v : s.state.s3) std::cout << ',' << num(v);
        for (double v : s.state.s2) std::cout << ',' << num(v);
        std::cout << ',' << num(s.stats.lambda_max) << ',' << num(s.stats.mF) << ','
                  << num(s.stats.mT) << '\n';
      }
      if (t.critical_at) std::cerr << "critical at x=" << num(*t.critical_at) << '\n';
      return 0;
    }
    if (*thr) {
      const double q = parse_q(u_q, 3);
      std::cout << "q,r_threshold\n" << num(q) << ',' << num(uc_ode::uc_threshold(q, u_tol, u_step)) << '\n';
      return 0;
    }
    if (*sweep) {
      auto cfg = bench::parse_sweep_config(read_file(b_config));
      if (!b_out.empty()) cfg.output = b_out;
      if (b_threads > 0) cfg.threads = b_threads;
      const bool to_stdout = cfg.output.empty() || cfg.output == "-";
      if (to_stdout) cfg.output.clear();
      const auto result = bench::run_sweep(cfg);
      if (to_stdout) std::cout << bench::to_csv(result);
      if (!b_plot.empty()) write_output(b_plot, bench::to_plot_data(result));
      return 0;
    }
    if (*brc) {
      rc.q = parse_q(rc_q, rc.k);
      const auto walk = rc.solver.walksat;
      const auto limit = rc.solver.node_limit;
      rc.solver = bench::SolverSpec::parse(rc_solver);
      rc.solver.walksat = walk;
      rc.solver.node_limit = limit;
      if (rc.solver.kind == bench::SolverKind::External)
        rc.solver.external = ExternalSolverSpec{rc_ext, rc_timeout};
      rc.r_grid = bench::parse_number_list(rc_grid, rc.k);
      const auto est = bench::estimate_rc_empirical(rc);
      std::cout << "r,median,gaveup_fraction\n";
      for (const auto& s : est.scanned)
        std::cout << num(s.point.r) << ',' << num(s.median) << ',' << num(s.gaveup_fraction) << '\n';
      std::cout << "# r_c estimate " << num(est.r) << (est.hit_ceiling ? " (ceiling reached)" : "")
                << (est.low_confidence ? " LowConfidence" : "") << '\n';
      return 0;
    }
  } catch (const qhidden::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
