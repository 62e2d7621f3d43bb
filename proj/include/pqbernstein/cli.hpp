#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pqbernstein/table.hpp"

namespace pqb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Format { csv, json };

/// Everything a command needs. Precedence when filled from the command line:
/// flags, then the optional key=value config file, then these defaults.
struct RunConfig {
  std::string command;

  std::optional<int> n;
  std::optional<double> p;
  std::optional<double> q;

  std::string function = "paper_cubic";
  std::vector<double> poly;  // overrides `function` when non-empty

  int grid = 1001;
  std::string output;  // empty: stdout
  Format format = Format::csv;
  bool reproducible = false;
  bool use_original = false;

  // verify
  bool expect_defect = false;

  // converge
  std::string rule = "half_harmonic";
  int n_min = 2;
  int n_max = 100;
  std::vector<int> n_values;  // overrides n_min..n_max when non-empty
  double threshold = 0.01;

  // trend / figure
  std::string kind = "vary_q";  // also the figure id
  std::vector<std::string> values;  // q's, n's or p:q pairs depending on kind
};

/// Result of a command before serialization.
struct CommandResult {
  Table table;
  bool checks_passed = true;
};

CommandResult cmd_eval(const RunConfig& config);
CommandResult cmd_moments(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);
CommandResult cmd_converge(const RunConfig& config);
CommandResult cmd_trend(const RunConfig& config);
CommandResult cmd_figure(const RunConfig& config);

/// Applies key=value lines (keys are long flag names, '-' or '_' accepted,
/// '#' starts a comment) on top of `config`. Throws std::runtime_error.
void apply_config_file(const std::string& path, RunConfig& config);

/// Dispatch, serialization and exit-status mapping. Diagnostics go to `err`,
/// table output to `out` unless --output names a file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pqb::cli
