#pragma once

#include <optional>
#include <string>

namespace realtori {

// Overrides applied to every request; a set field takes precedence over the
// value in the request object, which in turn beats the command default.
struct JobOptions {
  std::optional<double> tol;
  std::optional<double> eps;
  std::optional<long long> bound;
  std::optional<unsigned long long> seed;
  int threads = 1;  // worker threads for batch arrays
  std::optional<std::string> default_cmd;  // used by requests without "cmd"
};

// Exit codes shared by the C API and the command-line tool.
enum class JobExit : int { Ok = 0, Internal = 1, Input = 2, Undecided = 3 };

struct JobOutcome {
  std::string json;  // deterministic text, trailing newline
  JobExit exit = JobExit::Ok;
};

// Runs a request object {"cmd": …, …} or a JSON array of them. Never throws:
// malformed input and library errors become {"status": "error", …} results.
// For arrays the exit code is the most severe one, ordered 1 > 2 > 3 > 0.
JobOutcome run_jobs(const std::string& request_text, const JobOptions& options = {});

// The command names accepted in "cmd".
const char* const* job_command_names(std::size_t* count);

}  // namespace realtori
