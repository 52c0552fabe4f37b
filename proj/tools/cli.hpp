#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "betalab/rotational.hpp"
#include "betalab/tolerances.hpp"

namespace betalab::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

/// Bad flags, bad config values, unwritable outputs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  double beta = 2.0;
  std::vector<double> betas;  // empty: subcommand default
  double c1 = 1.0, c2 = 1.0;
  double eps = 1e-3, r_max = 1e3;
  std::optional<int> samples;
  double f0 = 0.0, g0 = 0.0;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 42;
  Tolerances tol;
  bool perturb_fp = false;
  int fields = 20;

  int grid_nodes() const { return samples.value_or(4097); }
};

/// Parses argv-style arguments (without the program name). Throws UsageError;
/// returns nullopt when help was printed.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Runs a full invocation and returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_variation(const RunConfig& cfg, std::ostream& out);
int cmd_symbol(const RunConfig& cfg, std::ostream& out);

// --- tables and figures ------------------------------------------------------

void write_profile_csv(std::ostream& os, const RotationalProfile& p);
/// Inverse of write_profile_csv; beta, c1, c2 are not part of the table.
RotationalProfile read_profile_csv(std::istream& is, double beta, double c1, double c2);

struct Curve {
  std::string label;
  std::vector<double> r, f;
  bool dashed = false;
};

/// Self-contained SVG overlay of f(r) curves; log r axis when `log_r`.
void write_svg(std::ostream& os, const std::vector<Curve>& curves, bool log_r,
               const std::string& title);

}  // namespace betalab::cli
