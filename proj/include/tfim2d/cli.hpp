#ifndef TFIM2D_CLI_HPP
#define TFIM2D_CLI_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "tfim2d/analysis.hpp"

namespace tfim2d {

/// Thrown for malformed command lines; exit_code 0 carries help text.
struct UsageError : std::runtime_error {
  int exit_code;
  explicit UsageError(const std::string& msg, int code = 1)
      : std::runtime_error(msg), exit_code(code) {}
};

/// Full description of one CLI invocation. A parsed config regenerates its
/// own argument vector through to_args() and parses back to an equal value.
struct RunConfig {
  std::string subcommand;
  int shell = 1;
  double j = 1.0;
  std::vector<std::pair<int, int>> pairs;
  LambdaGrid grid{0.0, 6.0, 0.01};
  bool want_gap = false;
  int impurity_site = 0;     // sweep-family flag; 0 = clean lattice
  double impurity_alpha = 0.0;
  std::vector<double> alphas = {0.0, 0.5, 1.0};  // impurity subcommand scan list
  int scan_site = 0;                             // impurity subcommand site
  SolverConfig solver;
  bool warm_start = true;
  std::string output;       // CSV path; default depends on the subcommand
  std::string diagnostics;  // optional per-iteration solver CSV path
  bool plot = false;        // also emit a plot script next to the CSV
  std::string figure;       // reproduce target, fig1..fig8
  int trials = 200;         // verify
  int max_sites = 10;       // verify

  bool operator==(const RunConfig&) const = default;
};

/// Parse an argument vector (without the program name). Throws UsageError on
/// malformed input; help requests throw with exit_code 0 and the help text.
RunConfig parse_args(const std::vector<std::string>& args);

/// Canonical argument vector regenerating this config.
std::vector<std::string> to_args(const RunConfig& config);

/// Write records as CSV: fixed header, 12 significant digits, rows sorted by
/// (alpha, lambda, i, j), trailing newline, empty cells for absent optionals.
/// On write failure the partial file is removed and an exception raised.
void write_csv(const std::vector<SweepRecord>& records, const std::string& path);

/// gnuplot script drawing one curve per (pair, alpha) group from the CSV.
/// Plots the derivative column when present (with peak markers), otherwise
/// the gap column when present, otherwise concurrence.
std::string emit_plot_script(const std::string& csv_path);

/// Dispatch a full command line. Returns the process exit code:
/// 0 success, 1 usage error, 2 numerical/runtime failure, 3 verification
/// failure. Honors the TFIM2D_OUTDIR environment variable as the directory
/// for relative output paths.
int run_cli(int argc, char** argv);

}  // namespace tfim2d

#endif
