#include "cxdim/cli/builtins.hpp"
#include "cxdim/cli/job.hpp"
#include "cxdim/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

using cxdim::cli::Command;
using cxdim::cli::JobConfig;

namespace {

void common(CLI::App* sub, JobConfig& c, std::string& format) {
  sub->add_option("--spec", c.spec_path, "JSON string spec");
  sub->add_option("--builtin", c.builtin, "named example spec (see --list-builtins)");
  sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--format", format, "csv, svg or both")
      ->check(CLI::IsMember({"csv", "svg", "both"}))
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "OpenMP worker cap (0 = default)");
}

void ladder(CLI::App* sub, JobConfig& c) {
  sub->add_option("--eps", c.epsilons, "explicit epsilon values")->delimiter(',');
  sub->add_option("--eps-max", c.eps_max, "largest ladder epsilon");
  sub->add_option("--eps-min", c.eps_min, "smallest ladder epsilon");
  sub->add_option("--eps-count", c.eps_count, "ladder points");
}

// argv without the output directory, so manifests compare equal across
// output locations.
std::string command_line(int argc, char** argv) {
  std::ostringstream os;
  os << "cxdim";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0) continue;
    os << ' ' << a;
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex dimensions of self-similar fractal strings"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-builtins", list, "print the builtin spec names and exit");

  JobConfig c;
  std::string format = "both";
  std::vector<double> window;

  auto* dims = app.add_subcommand("dims", "poles of the geometric zeta function in a window");
  common(dims, c, format);
  dims->add_option("--window", window, "sigma_min,sigma_max,t_min,t_max")->delimiter(',')->expected(4);

  auto* tube = app.add_subcommand("tube", "tube volumes by direct summation and the explicit formula");
  common(tube, c, format);
  ladder(tube, c);
  tube->add_option("--tmax", c.t_max, "explicit formula truncation height (0 disables)")->capture_default_str();

  auto* content = app.add_subcommand("content", "Minkowski content and its empirical estimate");
  common(content, c, format);
  ladder(content, c);

  auto* approx = app.add_subcommand("approx", "lattice approximation stages");
  common(approx, c, format);
  approx->add_option("--stages", c.stages, "number of stages (1..10)")->capture_default_str();

  auto* orbits = app.add_subcommand("orbits", "primitive periodic orbits and the prime orbit ratio");
  common(orbits, c, format);
  orbits->add_option("--max-len", c.max_len, "longest listed word")->capture_default_str();
  orbits->add_option("--k-min", c.k_min, "psi grid starts at x = 2^k_min")->capture_default_str();
  orbits->add_option("--k-max", c.k_max, "psi grid ends at x = 2^k_max")->capture_default_str();

  auto* overlap = app.add_subcommand("overlap", "dimension and content of F intersected with F + x");
  common(overlap, c, format);
  ladder(overlap, c);
  overlap->add_option("--x", c.shifts, "shifts")->delimiter(',');
  overlap->add_option("--depth", c.depth, "prefractal depth (-1 picks one)")->capture_default_str();

  auto* plot = app.add_subcommand("plot", "render a CSV as SVG");
  plot->add_option("--input", c.input, "CSV file")->required();
  plot->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  plot->add_option("--x-col", c.x_column, "x column name");
  plot->add_option("--y-col", c.y_column, "y column name");
  plot->add_flag("--log-x", c.log_x, "logarithmic x axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlohmann::json{{"level", "error"}, {"code", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }

  if (list) {
    for (const auto& [name, doc] : cxdim::cli::builtin_specs()) std::cout << name << "  " << doc.dump() << "\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 1;
  }
  c.command = cxdim::cli::parse_command(app.get_subcommands().front()->get_name());
  c.csv = format != "svg";
  c.svg = format != "csv";
  if (!window.empty()) c.window = cxdim::Window{window[0], window[1], window[2], window[3]};
  c.command_line = command_line(argc, argv);
  return cxdim::cli::run(c, std::cerr).exit_code;
}
