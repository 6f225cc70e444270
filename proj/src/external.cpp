#include "qhidden/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "qhidden/error.hpp"

namespace qhidden {
namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

ExternalStatus parse_status(const std::string& output, int exit_code, bool exited) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("s ", 0) != 0) continue;
    const std::string word = line.substr(2);
    if (word == "SATISFIABLE") return ExternalStatus::Sat;
    if (word == "UNSATISFIABLE") return ExternalStatus::Unsat;
    if (word == "UNKNOWN") return ExternalStatus::GaveUp;
  }
  if (exited && exit_code == 10) return ExternalStatus::Sat;
  if (exited && exit_code == 20) return ExternalStatus::Unsat;
  return ExternalStatus::Error;
}

}  // namespace

void ExternalSolverSpec::validate() const {
  const std::string ph = kPlaceholder;
  const auto first = command.find(ph);
  if (first == std::string::npos)
    throw ParameterError("external command must contain the placeholder " + ph);
  if (command.find(ph, first + 1) != std::string::npos)
    throw ParameterError("external command must contain the placeholder " + ph + " exactly once");
  if (!(timeout_seconds > 0.0)) throw ParameterError("external timeout must be positive");
}

ExternalResult run_external(const ExternalSolverSpec& spec, const std::string& instance_path) {
  spec.validate();
  ExternalResult result;
  std::string command = spec.command;
  command.replace(command.find(ExternalSolverSpec::kPlaceholder),
                  std::strlen(ExternalSolverSpec::kPlaceholder), shell_quote(instance_path));

  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    result.message = std::string("pipe: ") + std::strerror(errno);
    return result;
  }
  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    result.message = std::string("fork: ") + std::strerror(errno);
    return result;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);  // also done by the child; whichever runs first wins
  close(fds[1]);

  const auto deadline = start + std::chrono::duration<double>(spec.timeout_seconds);
  std::string output;
  bool timed_out = false;
  char buf[4096];
  while (true) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    const auto left_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{fds[0], POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::max<long long>(1, left_ms)));
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) continue;
    const ssize_t got = read(fds[0], buf, sizeof buf);
    if (got > 0) {
      output.append(buf, static_cast<std::size_t>(got));
      continue;
    }
    if (got < 0 && errno == EINTR) continue;
    break;  // EOF: the child closed stdout
  }
  close(fds[0]);

  int wstatus = 0;
  if (timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
    waitpid(pid, &wstatus, 0);
  } else {
    // Output closed; wait for exit but still honour the deadline.
    while (true) {
      const pid_t done = waitpid(pid, &wstatus, WNOHANG);
      if (done == pid) break;
      if (std::chrono::steady_clock::now() >= deadline) {
        timed_out = true;
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
        waitpid(pid, &wstatus, 0);
        break;
      }
      usleep(200);
    }
  }
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (timed_out) {
    result.status = ExternalStatus::GaveUp;
    result.message = "timeout";
    return result;
  }
  const bool exited = WIFEXITED(wstatus);
  result.exit_code = exited ? WEXITSTATUS(wstatus) : -1;
  result.status = parse_status(output, result.exit_code, exited);
  if (result.status == ExternalStatus::Error)
    result.message = "no solver status in output (exit code " + std::to_string(result.exit_code) + ")";
  return result;
}

}  // namespace qhidden
