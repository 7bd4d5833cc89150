#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace weierlab::cli {

/// Exit codes: success, operational error, mathematical verdict failed.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitVerdict = 2 };

struct RunConfig {
  std::string command;  // triple, estimate, surface, probe, example
  std::string action;   // check, verify, synth, ...
  /// Effective input record: the config file with command-line overrides.
  nlohmann::json input = nlohmann::json::object();
  std::string out_dir = "weierlab-run";
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct CommandResult {
  nlohmann::json report;
  /// One line for stderr.
  std::string summary;
  int exit_code = kExitOk;
};

/// Dispatches to the subcommand. Throws `Error` on operational failure.
CommandResult execute(const RunConfig& config);

/// Validates, executes and writes `<out_dir>/report.json`. Prints the report
/// path on `out`, the summary or a JSON error object on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Command-line entry point.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Tool version string.
const char* version();

}  // namespace weierlab::cli
