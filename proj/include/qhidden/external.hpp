#pragma once

#include <string>

namespace qhidden {

/// An external SAT solver driven as a subprocess.
struct ExternalSolverSpec {
  /// Placeholder for the DIMACS path inside `command`.
  static constexpr const char* kPlaceholder = "{cnf}";

  /// Shell command line containing kPlaceholder exactly once, e.g.
  /// "minisat {cnf}". Run through /bin/sh.
  std::string command;
  double timeout_seconds = 60.0;

  /// Throws ParameterError unless the template has exactly one placeholder
  /// and the timeout is positive.
  void validate() const;
};

enum class ExternalStatus { Sat, Unsat, GaveUp, Error };

struct ExternalResult {
  ExternalStatus status = ExternalStatus::Error;
  double wall_ms = 0.0;
  /// Exit code, or -1 if the process was killed or never started.
  int exit_code = -1;
  std::string message;
};

/// Runs the solver on `instance_path`. The status comes from an
/// "s SATISFIABLE" / "s UNSATISFIABLE" / "s UNKNOWN" line on stdout, falling
/// back to exit codes 10 / 20. A timeout kills the whole process group and
/// yields GaveUp; anything unparseable yields Error. Never throws for solver
/// misbehaviour.
ExternalResult run_external(const ExternalSolverSpec& spec, const std::string& instance_path);

}  // namespace qhidden
