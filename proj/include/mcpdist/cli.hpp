#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcpdist/simulate.hpp"

namespace mcpdist::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kUsage = 2,
  kNumerical = 3,
};

enum class Subcommand { cdf, simulate, validate, sweep };
enum class OutputFormat { csv, json };

struct GridSpec {
  double r_min = 0.0;
  /// Upper grid radius (and censoring radius for simulations); <= 0 picks
  /// 4 * the largest r_d.
  double r_max = 0.0;
  std::size_t points = 200;
  bool log_spaced = false;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::cdf;
  double lambda_p = 20e-6;
  double m_bar = 30.0;
  /// Cluster radii; sweep uses all of them, validate uses them as the
  /// r_d study list when more than one is given.
  std::vector<double> r_d{40.0};
  GridSpec grid;
  SimulationConfig simulation;
  std::string out;  // empty: standard output
  OutputFormat format = OutputFormat::csv;
  /// Relative quadrature tolerance.
  double tol = 1e-8;
  double ks_threshold = 0.02;
  double gap_threshold = 0.0;  // <= 0: built-in default
  std::string dump_samples;    // prefix for raw sample files
  int verbosity = 0;
  bool mutate_ppp_sign = false;  // test hook: flips the baseline exponent sign
};

/// Builds the grid described by config (validates n >= 2 and bounds).
std::vector<double> make_grid(const RunConfig& config);

int run_cdf(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand and maps exceptions to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point: args excludes the program name.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

}  // namespace mcpdist::cli
