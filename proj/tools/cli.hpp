#pragma once

#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "centrifugal/config.hpp"

namespace centrifugal::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kConfigError = 2,
  kConvergenceError = 3,
  kPartialSweep = 4,
};

const std::vector<std::string>& subcommands();

/// Column schema of the CSV a subcommand writes, for --help and tests.
const std::vector<std::string>& csv_columns(const std::string& subcommand);

struct Report {
  std::string csv;      // empty when the subcommand has no table
  std::string summary;  // human-readable lines
  std::string plot;     // gnuplot script, filled when requested
  bool passed = true;   // verify only
};

/// Runs one subcommand on an already validated config. `csv_name` is the
/// file the plot script should read. Throws the library's error types.
Report run(const std::string& subcommand, const RunConfig& config, bool plot_script = false,
           const std::string& csv_name = "out.csv");

struct Invocation {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::string> output;
  std::optional<int> threads;
  bool plot_script = false;
};

/// Prints the error to `err` and returns the matching exit code.
int report_error(std::exception_ptr error, std::ostream& err);

/// Loads the config, applies the flag overrides, runs, writes files and
/// maps exceptions onto exit codes.
int execute(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace centrifugal::cli
