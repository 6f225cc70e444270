#include "qhidden/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "qhidden/dimacs.hpp"
#include "qhidden/error.hpp"
#include "qhidden/rng.hpp"

namespace qhidden::bench {
namespace {

constexpr std::uint64_t kSolverSeedSalt = 0x50c0ffee5eedULL;

std::string fmt_double(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15)
    return std::to_string(static_cast<long long>(v));
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string q_field(const GeneratorMode& mode) {
  switch (mode.scheme()) {
    case Scheme::OneHidden:
    case Scheme::QHidden: return fmt_double(mode.q());
    default: return "";
  }
}

std::string fmt_wall(double ms) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), ms, std::chars_format::fixed, 3);
  return std::string(buf.data(), ptr);
}

RecordStatus from_solve(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return RecordStatus::Sat;
    case SolveStatus::Unsat: return RecordStatus::Unsat;
    case SolveStatus::GaveUp: return RecordStatus::GaveUp;
  }
  return RecordStatus::Error;
}

RecordStatus from_external(ExternalStatus s) {
  switch (s) {
    case ExternalStatus::Sat: return RecordStatus::Sat;
    case ExternalStatus::Unsat: return RecordStatus::Unsat;
    case ExternalStatus::GaveUp: return RecordStatus::GaveUp;
    case ExternalStatus::Error: return RecordStatus::Error;
  }
  return RecordStatus::Error;
}

std::string point_prefix(const SweepPoint& p, std::uint64_t m) {
  return p.mode.name() + "," + q_field(p.mode) + "," + std::to_string(p.k) + "," +
         std::to_string(p.n) + "," + fmt_double(p.r) + "," + std::to_string(m);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    auto item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParameterError("not a number: '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParameterError("not a non-negative integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParameterError("not a boolean: '" + s + "'");
}

}  // namespace

std::string SolverSpec::name() const {
  switch (kind) {
    case SolverKind::UC: return "uc";
    case SolverKind::DPLL: return "dpll";
    case SolverKind::WalkSAT: return "walksat";
    case SolverKind::Majority: return "majority";
    case SolverKind::External: return "external";
  }
  return "?";
}

std::string SolverSpec::metric() const {
  switch (kind) {
    case SolverKind::UC: return "rounds";
    case SolverKind::DPLL: return "nodes";
    case SolverKind::WalkSAT: return "flips";
    case SolverKind::Majority: return "unsat_clauses";
    case SolverKind::External: return "wall_ms";
  }
  return "?";
}

std::optional<double> SolverSpec::ceiling() const {
  if (kind == SolverKind::WalkSAT) return static_cast<double>(walksat.ceiling());
  if (kind == SolverKind::DPLL && node_limit != DpllOptions::kUnlimited)
    return static_cast<double>(node_limit);
  return std::nullopt;
}

SolverSpec SolverSpec::parse(const std::string& name) {
  SolverSpec s;
  if (name == "uc") s.kind = SolverKind::UC;
  else if (name == "dpll") s.kind = SolverKind::DPLL;
  else if (name == "walksat") s.kind = SolverKind::WalkSAT;
  else if (name == "majority") s.kind = SolverKind::Majority;
  else if (name == "external") s.kind = SolverKind::External;
  else throw ParameterError("unknown solver '" + name + "'");
  return s;
}

std::vector<SweepPoint> SweepConfig::points() const {
  std::vector<GeneratorMode> modes_expanded;
  for (const auto& m : modes) {
    if (m == "q-hidden") {
      for (double q : qs) modes_expanded.push_back(GeneratorMode::q_hidden(q));
    } else {
      modes_expanded.push_back(GeneratorMode::parse(m, 1.0));
    }
  }
  std::vector<SweepPoint> pts;
  for (const auto& mode : modes_expanded)
    for (auto n : ns)
      for (double r : rs) pts.push_back({mode, k, n, r});
  return pts;
}

void SweepConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (modes.empty()) throw ParameterError("no generator modes given");
  if (ns.empty()) throw ParameterError("no n values given");
  if (rs.empty()) throw ParameterError("no r values given");
  if (std::find(modes.begin(), modes.end(), "q-hidden") != modes.end() && qs.empty())
    throw ParameterError("mode q-hidden needs at least one q");
  if (threads < 1) throw ParameterError("threads must be at least 1");
  if (solver.kind == SolverKind::External) {
    if (!solver.external) throw ParameterError("external solver needs a command");
    solver.external->validate();
  }
  for (const auto& p : points()) {
    GeneratorParams gp{p.mode, p.n, p.k, p.r, std::nullopt, 0};
    gp.validate();
  }
}

std::string to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::Sat: return "sat";
    case RecordStatus::Unsat: return "unsat";
    case RecordStatus::GaveUp: return "gaveup";
    case RecordStatus::Error: return "error";
  }
  return "?";
}

std::uint64_t trial_seed(std::uint64_t master_seed, const SweepPoint& point, std::uint32_t trial) {
  std::uint64_t h = mix64(master_seed);
  h = combine_seed(h, static_cast<std::uint64_t>(point.mode.scheme()));
  h = combine_seed(h, std::bit_cast<std::uint64_t>(point.mode.q()));
  h = combine_seed(h, point.k);
  h = combine_seed(h, point.n);
  h = combine_seed(h, std::bit_cast<std::uint64_t>(point.r));
  return combine_seed(h, trial);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ParameterError("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::string instance_file_name(const SweepPoint& point, std::uint32_t trial) {
  std::string q = q_field(point.mode);
  if (q.empty()) q = "na";
  return point.mode.name() + "_q" + q + "_n" + std::to_string(point.n) + "_r" +
         fmt_double(point.r) + "_t" + std::to_string(trial) + ".cnf";
}

BenchRecord run_cell(const SweepConfig& config, const SweepPoint& point, std::uint32_t trial) {
  BenchRecord rec;
  rec.point = point;
  rec.trial = trial;
  rec.seed = trial_seed(config.master_seed, point, trial);
  rec.solver = config.solver.name();
  rec.metric = config.solver.metric();

  const auto start = std::chrono::steady_clock::now();
  GeneratorParams gp{point.mode, point.n, point.k, point.r, std::nullopt, rec.seed};
  const GeneratedInstance inst = generate(gp);
  rec.m = inst.formula.num_clauses();
  const std::uint64_t solver_seed = combine_seed(rec.seed, kSolverSeedSalt);

  std::string kept_path;
  if (!config.keep_cnf_dir.empty()) {
    kept_path = (std::filesystem::path(config.keep_cnf_dir) / instance_file_name(point, trial)).string();
    std::ofstream(kept_path, std::ios::binary) << write_dimacs(inst.formula, inst.hidden);
  }

  try {
    const SolverSpec& s = config.solver;
    switch (s.kind) {
      case SolverKind::UC: {
        auto out = uc_run(inst.formula, solver_seed);
        rec.status = from_solve(out.status);
        rec.value = static_cast<double>(out.effort);
        break;
      }
      case SolverKind::DPLL: {
        DpllOptions opt;
        opt.node_limit = s.node_limit;
        auto out = dpll_solve(inst.formula, solver_seed, opt);
        rec.status = from_solve(out.status);
        rec.value = static_cast<double>(out.effort);
        break;
      }
      case SolverKind::WalkSAT: {
        WalkSatParams wp = s.walksat;
        wp.seed = solver_seed;
        auto out = walksat_solve(inst.formula, wp);
        rec.status = from_solve(out.status);
        rec.value = static_cast<double>(out.effort);
        break;
      }
      case SolverKind::Majority: {
        auto a = majority_assignment(inst.formula, solver_seed);
        const auto unsat = evaluate(inst.formula, a);
        rec.status = unsat == 0 ? RecordStatus::Sat : RecordStatus::GaveUp;
        rec.value = static_cast<double>(unsat);
        break;
      }
      case SolverKind::External: {
        std::string path = kept_path;
        const bool temporary = path.empty();
        if (temporary) {
          path = (std::filesystem::temp_directory_path() /
                  ("qhidden-" + std::to_string(::getpid()) + "-" + std::to_string(rec.seed) + ".cnf"))
                     .string();
          std::ofstream(path, std::ios::binary) << write_dimacs(inst.formula, std::nullopt);
        }
        auto out = run_external(*s.external, path);
        if (temporary) std::filesystem::remove(path);
        rec.status = from_external(out.status);
        rec.value = out.wall_ms;
        rec.wall_ms = out.wall_ms;
        break;
      }
    }
  } catch (const std::exception&) {
    rec.status = RecordStatus::Error;
    rec.value = 0.0;
  }
  if (config.record_wall_time && config.solver.kind != SolverKind::External)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  std::ofstream out_file;
  if (!config.output.empty()) {
    out_file.open(config.output, std::ios::binary | std::ios::trunc);
    if (!out_file) throw Error("cannot write output file '" + config.output + "'");
  }
  if (!config.keep_cnf_dir.empty()) std::filesystem::create_directories(config.keep_cnf_dir);

  const auto pts = config.points();
  const std::size_t cells = pts.size() * config.trials;
  SweepResult result;
  result.records.resize(cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      const auto& p = pts[i / config.trials];
      result.records[i] = run_cell(config, p, static_cast<std::uint32_t>(i % config.trials));
    }
  };
  const unsigned workers = std::min<std::size_t>(config.threads, std::max<std::size_t>(cells, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  for (std::size_t p = 0; p < pts.size(); ++p) {
    PointSummary s;
    s.point = pts[p];
    s.trials = config.trials;
    s.solver = config.solver.name();
    s.metric = config.solver.metric();
    std::vector<double> values, walls;
    std::size_t gave_up = 0;
    for (std::uint32_t t = 0; t < config.trials; ++t) {
      const auto& rec = result.records[p * config.trials + t];
      s.m = rec.m;
      values.push_back(rec.value);
      walls.push_back(rec.wall_ms);
      gave_up += rec.status == RecordStatus::GaveUp;
    }
    s.median = median(values);
    s.median_wall_ms = median(walls);
    s.gaveup_fraction = static_cast<double>(gave_up) / config.trials;
    result.summaries.push_back(std::move(s));
  }

  if (out_file.is_open()) {
    out_file << to_csv(result);
    if (!out_file) throw Error("failed writing output file '" + config.output + "'");
  }
  return result;
}

std::string to_csv(const SweepResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : result.records) {
    out += point_prefix(r.point, r.m) + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) +
           "," + r.solver + "," + to_string(r.status) + "," + r.metric + "," + fmt_double(r.value) +
           "," + fmt_wall(r.wall_ms) + "\n";
  }
  for (const auto& s : result.summaries) {
    std::array<char, 32> frac{};
    auto [ptr, ec] = std::to_chars(frac.data(), frac.data() + frac.size(), s.gaveup_fraction,
                                   std::chars_format::fixed, 6);
    out += point_prefix(s.point, s.m) + ",summary,," + s.solver + ",gaveup=" +
           std::string(frac.data(), ptr) + ",median_" + s.metric + "," + fmt_double(s.median) + "," +
           fmt_wall(s.median_wall_ms) + "\n";
  }
  return out;
}

std::string to_plot_data(const SweepResult& result) {
  std::string out;
  std::string current;
  for (const auto& s : result.summaries) {
    const std::string key = "# mode=" + s.point.mode.name() + " q=" + q_field(s.point.mode) +
                            " n=" + std::to_string(s.point.n) + " " + s.metric;
    if (key != current) {
      if (!current.empty()) out += "\n\n";
      out += key + "\n";
      current = key;
    }
    out += fmt_double(s.point.r) + " " + fmt_double(s.median) + "\n";
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text, std::uint32_t k) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    if (item == "star" || item == "q*") {
      out.push_back(qstar(k));
      continue;
    }
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ParameterError("range must be start:stop:step, got '" + item + "'");
    const double a = parse_double(trim(item.substr(0, c1)));
    const double b = parse_double(trim(item.substr(c1 + 1, c2 - c1 - 1)));
    const double step = parse_double(trim(item.substr(c2 + 1)));
    if (!(step > 0.0) || b < a) throw ParameterError("bad range '" + item + "'");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(std::round((a + i * step) * 1e9) / 1e9);
  }
  return out;
}

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg;
  std::string q_text, r_text, n_text;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "modes" || key == "mode") cfg.modes = split_list(value);
      else if (key == "q") q_text = value;
      else if (key == "k") cfg.k = static_cast<std::uint32_t>(parse_u64(value));
      else if (key == "n") n_text = value;
      else if (key == "r") r_text = value;
      else if (key == "trials") cfg.trials = static_cast<std::uint32_t>(parse_u64(value));
      else if (key == "solver") {
        auto ext = cfg.solver.external;
        auto ws = cfg.solver.walksat;
        auto nl = cfg.solver.node_limit;
        cfg.solver = SolverSpec::parse(value);
        cfg.solver.external = ext;
        cfg.solver.walksat = ws;
        cfg.solver.node_limit = nl;
      } else if (key == "max_flips") cfg.solver.walksat.max_flips = parse_u64(value);
      else if (key == "max_tries") cfg.solver.walksat.max_tries = parse_u64(value);
      else if (key == "noise") cfg.solver.walksat.noise = parse_double(value);
      else if (key == "greedy") {
        if (value == "break") cfg.solver.walksat.greedy = GreedyRule::BreakCount;
        else if (value == "netgain") cfg.solver.walksat.greedy = GreedyRule::NetGain;
        else throw ParameterError("greedy must be 'break' or 'netgain'");
      } else if (key == "node_limit") cfg.solver.node_limit = static_cast<std::int64_t>(parse_u64(value));
      else if (key == "external_command") {
        if (!cfg.solver.external) cfg.solver.external.emplace();
        cfg.solver.external->command = value;
      } else if (key == "timeout") {
        if (!cfg.solver.external) cfg.solver.external.emplace();
        cfg.solver.external->timeout_seconds = parse_double(value);
      } else if (key == "seed") cfg.master_seed = parse_u64(value);
      else if (key == "output") cfg.output = value;
      else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_u64(value));
      else if (key == "keep_cnf") cfg.keep_cnf_dir = value;
      else if (key == "wall_time") cfg.record_wall_time = parse_bool(value);
      else throw ParameterError("unknown key '" + key + "'");
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  try {
    cfg.qs = parse_number_list(q_text, cfg.k);
    cfg.rs = parse_number_list(r_text, cfg.k);
    for (double n : parse_number_list(n_text, cfg.k)) {
      if (n < 1 || n != std::floor(n)) throw ParameterError("n must be a positive integer");
      cfg.ns.push_back(static_cast<std::uint32_t>(n));
    }
  } catch (const ParameterError& e) {
    throw ParseError(line_no, e.what());
  }
  return cfg;
}

RcEstimate estimate_rc_empirical(const RcSearch& search) {
  if (search.r_grid.size() < 3) throw ParameterError("need at least 3 grid densities");
  for (std::size_t i = 1; i < search.r_grid.size(); ++i)
    if (!(search.r_grid[i] > search.r_grid[i - 1]))
      throw ParameterError("density grid must be strictly ascending");
  if (search.solver.kind == SolverKind::Majority || search.solver.kind == SolverKind::UC)
    throw ParameterError("threshold estimation needs walksat, dpll or an external solver");

  SweepConfig cfg;
  cfg.modes = {"q-hidden"};
  cfg.qs = {search.q};
  cfg.k = search.k;
  cfg.ns = {search.n};
  cfg.trials = search.trials;
  cfg.solver = search.solver;
  cfg.master_seed = search.master_seed;
  cfg.threads = search.threads;

  // Only WalkSAT uses the ceiling rule; DPLL and external solvers peak.
  const std::optional<double> ceiling =
      search.solver.kind == SolverKind::WalkSAT ? search.solver.ceiling() : std::nullopt;

  RcEstimate est;
  for (double r : search.r_grid) {
    cfg.rs = {r};
    auto res = run_sweep(cfg);
    est.scanned.push_back(res.summaries.front());
    if (ceiling && est.scanned.back().median >= *ceiling) {
      est.r = r;
      est.hit_ceiling = true;
      return est;
    }
  }
  auto best = std::max_element(est.scanned.begin(), est.scanned.end(),
                               [](const auto& a, const auto& b) { return a.median < b.median; });
  est.r = best->point.r;
  const bool flat = std::all_of(est.scanned.begin(), est.scanned.end(),
                                [&](const auto& s) { return s.median == best->median; });
  est.low_confidence = flat;
  return est;
}

}  // namespace qhidden::bench
