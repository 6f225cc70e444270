#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qhidden/external.hpp"
#include "qhidden/generator.hpp"
#include "qhidden/solvers.hpp"

namespace qhidden::bench {

enum class SolverKind { UC, DPLL, WalkSAT, Majority, External };

/// Which solver a sweep runs, with its parameters. Seeds inside are ignored;
/// every trial derives its own.
struct SolverSpec {
  SolverKind kind = SolverKind::WalkSAT;
  WalkSatParams walksat;
  std::int64_t node_limit = DpllOptions::kUnlimited;
  std::optional<ExternalSolverSpec> external;

  /// "uc", "dpll", "walksat", "majority" or "external".
  std::string name() const;
  /// Name of the effort metric: rounds, nodes, flips, unsat_clauses, wall_ms.
  std::string metric() const;
  /// Effort value that marks an exhausted budget, if the solver has one.
  std::optional<double> ceiling() const;

  /// Parses a solver name; parameters keep their defaults.
  static SolverSpec parse(const std::string& name);
};

/// One (mode, q, k, n, r) cell of a sweep.
struct SweepPoint {
  GeneratorMode mode = GeneratorMode::one_hidden();
  std::uint32_t k = 3;
  std::uint32_t n = 0;
  double r = 0.0;
};

struct SweepConfig {
  /// Modes in canonical order. A q-hidden entry is expanded over `qs`.
  std::vector<std::string> modes{"q-hidden"};
  std::vector<double> qs;
  std::uint32_t k = 3;
  std::vector<std::uint32_t> ns;
  std::vector<double> rs;
  std::uint32_t trials = 49;
  SolverSpec solver;
  std::uint64_t master_seed = 1;
  /// CSV destination; empty means "do not write".
  std::string output;
  /// Worker threads for independent (point, trial) cells.
  unsigned threads = 1;
  /// Directory for retained instances; empty means in-memory only.
  std::string keep_cnf_dir;
  /// Fill wall_ms. Off by default so that repeated runs give identical CSV.
  bool record_wall_time = false;

  /// Points in canonical order: modes (q-hidden expanded over qs), then n,
  /// then r.
  std::vector<SweepPoint> points() const;
  /// Throws ParameterError on an unusable configuration.
  void validate() const;
};

enum class RecordStatus { Sat, Unsat, GaveUp, Error };
std::string to_string(RecordStatus status);

struct BenchRecord {
  SweepPoint point;
  std::uint64_t m = 0;
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  std::string solver;
  RecordStatus status = RecordStatus::Error;
  std::string metric;
  double value = 0.0;
  double wall_ms = 0.0;
};

struct PointSummary {
  SweepPoint point;
  std::uint64_t m = 0;
  std::uint32_t trials = 0;
  std::string solver;
  std::string metric;
  double median = 0.0;
  double gaveup_fraction = 0.0;
  double median_wall_ms = 0.0;
};

struct SweepResult {
  std::vector<BenchRecord> records;     ///< sorted by point, then trial
  std::vector<PointSummary> summaries;  ///< one per point, same order
};

/// Instance seed for (point, trial), derived by hashing the master seed
/// with the point's parameters and the trial index. Independent of the
/// sweep's other points and of execution order.
std::uint64_t trial_seed(std::uint64_t master_seed, const SweepPoint& point, std::uint32_t trial);

/// Median; for an even count, the mean of the two middle elements.
/// Throws ParameterError on an empty input.
double median(std::vector<double> values);

/// Runs one (point, trial) cell: generate, solve, record. Solver failures
/// become an Error record.
BenchRecord run_cell(const SweepConfig& config, const SweepPoint& point, std::uint32_t trial);

/// Runs every cell (in parallel when config.threads > 1), assembles records
/// in canonical order and appends per-point summaries. If config.output is
/// set the CSV is written there; an unwritable path throws before any work
/// is done.
SweepResult run_sweep(const SweepConfig& config);

/// Column header of the CSV, without newline.
inline constexpr const char* kCsvHeader =
    "mode,q,k,n,r,m,trial,seed,solver,status,metric,value,wall_ms";

/// Header, one row per record, then one summary row per point. A summary
/// row has trial "summary", an empty seed, status "gaveup=<fraction>",
/// metric "median_<metric>" and the median as value.
std::string to_csv(const SweepResult& result);

/// gnuplot-friendly blocks "r median", one block per (mode, q, n), separated
/// by two blank lines.
std::string to_plot_data(const SweepResult& result);

/// File name used for retained instances:
/// <mode>_q<q>_n<n>_r<r>_t<trial>.cnf
std::string instance_file_name(const SweepPoint& point, std::uint32_t trial);

/// Parses the flat "key = value" configuration format. Lists are comma
/// separated; numeric lists also accept "start:stop:step"; q accepts "star"
/// for the balanced value. Throws ParseError on unknown keys or bad values.
SweepConfig parse_sweep_config(const std::string& text);

/// Expands a comma list of numbers and inclusive "start:stop:step" ranges.
std::vector<double> parse_number_list(const std::string& text, std::uint32_t k = 3);

struct RcEstimate {
  double r = 0.0;
  /// True when the estimate fell back to the argmax of a flat effort curve.
  bool low_confidence = false;
  /// True when some grid point reached the solver's effort ceiling.
  bool hit_ceiling = false;
  /// Summaries of the grid points that were evaluated, in grid order.
  std::vector<PointSummary> scanned;
};

struct RcSearch {
  double q = 0.5;
  SolverSpec solver;
  std::uint32_t k = 3;
  std::uint32_t n = 200;
  std::vector<double> r_grid;
  std::uint32_t trials = 49;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
};

/// Empirical threshold density for q-hidden formulas. For WalkSAT it is the
/// smallest grid density whose median flip count reaches max_flips *
/// max_tries; the scan stops there. For DPLL and external solvers, or when
/// WalkSAT never reaches its ceiling, it is the density of maximal median
/// effort. Throws ParameterError for fewer than three grid points, a grid
/// that is not strictly ascending, or a UC / majority solver.
RcEstimate estimate_rc_empirical(const RcSearch& search);

}  // namespace qhidden::bench
