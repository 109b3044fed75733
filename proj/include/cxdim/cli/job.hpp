#pragma once

#include "cxdim/roots.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cxdim::cli {

enum class Command { dims, tube, content, approx, orbits, overlap, plot };

/// Throws ParseError for an unknown name.
Command parse_command(const std::string& name);
std::string command_name(Command c);

struct JobConfig {
  Command command = Command::dims;
  std::string spec_path;  // JSON spec; exactly one of spec_path / builtin
  std::string builtin;
  std::filesystem::path out_dir = "out";
  bool csv = true;
  bool svg = true;
  int threads = 0;  // 0 leaves the OpenMP default

  std::optional<Window> window;  // dims
  int stages = 6;                // approx, 1..10

  // Epsilon ladder for tube/content/overlap: an explicit list wins,
  // otherwise a geometric ladder (command-specific defaults when unset).
  std::vector<double> epsilons;
  std::optional<double> eps_max;
  std::optional<double> eps_min;
  std::optional<int> eps_count;

  double t_max = 200;           // tube: explicit formula truncation, 0 disables it
  std::vector<double> shifts;   // overlap: x values
  int depth = -1;               // overlap: prefractal depth, -1 picks one
  int max_len = 10;             // orbits: longest listed word
  int k_min = 10, k_max = 30;   // orbits: psi at x = 2^k

  std::string input;            // plot: CSV to render
  std::string x_column, y_column;
  bool log_x = false;

  std::string command_line;     // recorded in the manifest
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files;  // relative to out_dir, manifest excluded
  std::filesystem::path manifest;
};

/// Runs one job. Diagnostics go to `diag` as one JSON object per line.
/// Exit code 0 on success, 1 for input and I/O failures, 2 for domain
/// failures. Whatever was written before a failure is still listed in the
/// manifest.
RunResult run(const JobConfig& config, std::ostream& diag);

}  // namespace cxdim::cli
