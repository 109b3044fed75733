#include "cxdim/cli/job.hpp"

#include "cxdim/cli/builtins.hpp"
#include "cxdim/dimensions.hpp"
#include "cxdim/diophantine.hpp"
#include "cxdim/dynamics.hpp"
#include "cxdim/errors.hpp"
#include "cxdim/io/format.hpp"
#include "cxdim/io/manifest.hpp"
#include "cxdim/io/svg.hpp"
#include "cxdim/tube.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cxdim::cli {
namespace {

using io::format_number;
using nlohmann::json;

constexpr const char* kCommands[] = {"dims", "tube", "content", "approx", "orbits", "overlap", "plot"};

void diagnose(std::ostream& diag, const std::string& level, const std::string& code, const std::string& message) {
  diag << json{{"level", level}, {"code", code}, {"message", message}}.dump() << "\n";
  diag.flush();
}

// Collects outputs so the manifest can list them even after a failure.
class Output {
 public:
  Output(const JobConfig& config) : config_(config) {}

  void text(const std::string& name, const std::string& body) {
    io::write_text(config_.out_dir / name, body);
    files_.push_back(name);
  }
  void csv(const std::string& name, const io::Csv& table) {
    if (config_.csv) text(name, table.str());
  }
  void svg(const std::string& name, const std::string& body) {
    if (config_.svg) text(name, body);
  }
  void summary(const json& doc) { text("summary.json", doc.dump(2) + "\n"); }

  const std::vector<std::string>& files() const { return files_; }

 private:
  const JobConfig& config_;
  std::vector<std::string> files_;
};

// Thrown for domain outcomes that are reported after all files are written.
struct Deferred {
  Error error;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::parse_error, what);
}

SelfSimilarStringSpec load(const JobConfig& c) {
  check(c.spec_path.empty() != c.builtin.empty(), "give exactly one of --spec and --builtin");
  if (!c.builtin.empty()) return builtin_spec(c.builtin);
  if (!std::filesystem::exists(c.spec_path)) throw Error(Errc::io_error, "spec file not found: " + c.spec_path);
  return load_spec(c.spec_path);
}

std::vector<double> ladder(const JobConfig& c, double max, double min, int count) {
  if (!c.epsilons.empty()) {
    for (double e : c.epsilons) check(e > 0, "epsilons must be positive");
    auto out = c.epsilons;
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }
  const double hi = c.eps_max.value_or(max), lo = c.eps_min.value_or(min);
  const int n = c.eps_count.value_or(count);
  check(hi > lo && lo > 0, "need eps_max > eps_min > 0");
  check(n >= 2 && n <= 100000, "eps_count must be in [2, 100000]");
  return geometric_ladder(hi, lo, n);
}

std::vector<std::string> root_cells(const ComplexDimension& r) {
  return {format_number(r.omega.real()), format_number(r.omega.imag()), std::to_string(r.multiplicity),
          r.residue ? format_number(r.residue->real()) : "", r.residue ? format_number(r.residue->imag()) : ""};
}

io::Csv roots_csv(const std::vector<ComplexDimension>& roots) {
  io::Csv t({"re", "im", "multiplicity", "residue_re", "residue_im"});
  for (const auto& r : roots) t.row(root_cells(r));
  return t;
}

std::vector<io::ScatterPoint> points(const std::vector<ComplexDimension>& roots) {
  std::vector<io::ScatterPoint> out;
  for (const auto& r : roots) out.push_back({r.omega.real(), r.omega.imag(), r.multiplicity});
  return out;
}

std::vector<io::Step> steps(const std::vector<StairStep>& s) {
  std::vector<io::Step> out;
  for (const auto& x : s) out.push_back({x.x, static_cast<double>(x.count)});
  return out;
}

io::Csv staircase_csv(const std::vector<StairStep>& s) {
  io::Csv t({"x", "count"});
  for (const auto& x : s) t.row({format_number(x.x), std::to_string(x.count)});
  return t;
}

json structure_json(const LatticeStructure& s) {
  json j{{"lattice", s.lattice}};
  if (s.lattice) {
    j["r"] = s.r();
    j["period"] = s.period;
    json e = json::array();
    for (const auto& [k, m] : s.exponents) e.push_back({{"k", k}, {"m", m}});
    j["exponents"] = e;
  } else {
    j["rank"] = s.rank;
    j["generic"] = s.generic;
  }
  return j;
}

bool is_fibonacci(const SelfSimilarStringSpec& spec) {
  const auto r = spec.expanded_ratios();
  const auto g = spec.expanded_gaps();
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-15; };
  return near(spec.total_length(), 4) && r.size() == 2 && near(r[0], 0.5) && near(r[1], 0.25) && g.size() == 1 &&
         near(g[0], 0.25);
}

void run_dims(const JobConfig& c, const SelfSimilarStringSpec& spec, Output& out) {
  Window w;
  if (c.window) {
    w = *c.window;
  } else {
    const auto [lo, hi] = zero_strip(denominator(spec));
    w = {lo - 0.1, hi + 0.1, 0, 40};
  }
  check(w.sigma_min < w.sigma_max && w.t_min < w.t_max, "window needs sigma_min < sigma_max and t_min < t_max");
  const auto found = cancellation_reduce(spec, w);
  const auto density = real_parts_density(found.roots);
  const double D = real_dimension(spec);
  const auto structure = classify_lattice(spec);

  out.csv("dims.csv", roots_csv(found.roots));
  out.csv("staircase.csv", staircase_csv(density));
  out.svg("dims.svg", io::scatter_svg(points(found.roots), found.window.sigma_min, found.window.sigma_max,
                                      found.window.t_min, found.window.t_max, D, "complex dimensions"));
  out.svg("staircase.svg", io::staircase_svg(steps(density), D, "real parts"));
  out.summary({{"D", D},
               {"structure", structure_json(structure)},
               {"window",
                {found.window.sigma_min, found.window.sigma_max, found.window.t_min, found.window.t_max}},
               {"poles", found.roots.size()},
               {"winding_total", found.winding_total},
               {"perturbations", found.perturbations}});
}

void run_tube(const JobConfig& c, const SelfSimilarStringSpec& spec, Output& out) {
  const auto eps = ladder(c, 0.4, 1e-3, 20);
  check(c.t_max >= 0, "t_max must be >= 0");
  const double D = real_dimension(spec);
  const auto table = enumerate_lengths(spec, 2 * eps.back());
  const bool fib = is_fibonacci(spec);
  const auto structure = classify_lattice(spec);
  bool lattice_ok = structure.lattice && spec.gap_count() == 1 &&
                    std::abs(spec.largest_gap() * spec.total_length() - 1) < 1e-12;

  io::Csv lengths({"length", "multiplicity"});
  for (const auto& e : table.entries) lengths.row({format_number(e.length), std::to_string(e.multiplicity)});
  out.csv("lengths.csv", lengths);

  io::Csv tube({"epsilon", "volume", "method", "error_bound"});
  std::vector<double> xs, ys;
  auto add = [&](const TubeVolume& v) {
    tube.row({format_number(v.epsilon), format_number(v.volume), method_name(v.method), format_number(v.error_bound)});
  };
  for (double e : eps) {
    const auto d = volume_direct(table, e);
    add(d);
    xs.push_back(e);
    ys.push_back(std::pow(e, D - 1) * d.volume);
    if (c.t_max > 0) add(volume_explicit(spec, e, c.t_max));
    if (fib && e < 0.5) add(fibonacci_closed_form(e));
    if (lattice_ok && e < 0.5) add(lattice_tube(spec, e, 0).leading);
  }
  out.csv("tube.csv", tube);
  out.svg("tube.svg", io::line_plot_svg(xs, ys, "normalized tube volume", "epsilon", "eps^(D-1) V", true));

  if (lattice_ok) {
    const auto lt = lattice_tube(spec, 0.25);
    io::Csv g({"x", "g"});
    for (std::size_t i = 0; i < lt.profile.x.size(); ++i)
      g.row({format_number(lt.profile.x[i]), format_number(lt.profile.g[i])});
    out.csv("gprofile.csv", g);
    out.svg("gprofile.svg", io::line_plot_svg(lt.profile.x, lt.profile.g, "periodic factor G", "x", "G"));
  }
  out.summary({{"D", D},
               {"structure", structure_json(structure)},
               {"l_min", table.l_min},
               {"tail", table.tail},
               {"distinct_lengths", table.entries.size()}});
}

void run_content(const JobConfig& c, const SelfSimilarStringSpec& spec, Output& out) {
  const auto eps = ladder(c, 1e-2, 1e-6, 17);
  const auto est = minkowski_content_empirical(spec, eps);
  const double D = real_dimension(spec);

  io::Csv t({"epsilon", "volume", "normalized"});
  for (std::size_t i = 0; i < est.epsilons.size(); ++i)
    t.row(io::cells({est.epsilons[i], est.volumes[i], est.normalized[i]}));
  out.csv("content.csv", t);
  out.svg("content.svg",
          io::line_plot_svg(est.epsilons, est.normalized, "eps^(D-1) V(eps)", "epsilon", "normalized", true));

  json s{{"D", D}, {"D_est", est.D_est}};
  if (est.M_est) s["M_est"] = *est.M_est;
  if (est.oscillation)
    s["oscillation"] = {{"min", est.oscillation->min},
                        {"max", est.oscillation->max},
                        {"period", est.oscillation->period}};
  std::optional<Error> failure;
  try {
    s["M_formula"] = minkowski_content_formula(spec);
    s["M_residue"] = minkowski_content_residue(spec);
    s["measurable"] = true;
  } catch (const Error& e) {
    if (e.code() != Errc::lattice_not_measurable) throw;
    s["measurable"] = false;
    failure = e;
  }
  out.summary(s);
  if (failure) throw Deferred{*failure};
}

std::string exponents_text(const std::vector<std::pair<int, int>>& exps) {
  std::string s;
  for (const auto& [k, m] : exps) {
    if (!s.empty()) s += ";";
    s += std::to_string(k);
    if (m > 1) s += "x" + std::to_string(m);
  }
  return s;
}

void run_approx(const JobConfig& c, const SelfSimilarStringSpec& spec, Output& out) {
  check(c.stages >= 1 && c.stages <= 10, "stages must be in [1, 10]");
  io::Csv stages({"stage", "q", "r", "exponents", "period"});
  for (int n = 1; n <= c.stages; ++n) {
    const auto a = lattice_approximation(spec, n);
    const auto lines = lattice_lines(classify_lattice(a.approximant), a.approximant);
    std::vector<ComplexDimension> roots;
    for (const auto& l : lines.lines) {
      ComplexDimension d{l.omega, l.multiplicity, std::nullopt};
      if (l.multiplicity == 1) d.residue = residue_at(a.approximant, l.omega);
      roots.push_back(d);
    }
    const double D = real_dimension(a.approximant);
    const auto density = real_parts_density(roots);
    const std::string stem = "stage_" + std::to_string(n);
    out.csv(stem + ".csv", roots_csv(roots));
    std::ostringstream title;
    title << "stage " << n << ": q = " << a.q << ", p = " << format_number(lines.period);
    out.svg(stem + ".svg", io::scatter_staircase_svg(points(roots), steps(density), D, lines.period, title.str()));
    stages.row({std::to_string(n), std::to_string(a.q), format_number(static_cast<double>(a.base)),
                exponents_text(a.exponents), format_number(lines.period)});
  }
  out.csv("stages.csv", stages);
}

void run_orbits(const JobConfig& c, const SelfSimilarStringSpec& spec, Output& out) {
  check(c.max_len >= 1 && c.max_len <= 30, "max_len must be in [1, 30]");
  check(c.k_min >= 0 && c.k_min <= c.k_max && c.k_max <= 60, "need 0 <= k_min <= k_max <= 60");
  const auto flow = FlowSpec::from_string(spec);
  const auto table = primitive_orbits(flow, c.max_len);
  io::Csv orbits({"word", "length", "total_weight"});
  for (const auto& o : table.orbits)
    orbits.row({o.word_string(flow.letters()), std::to_string(o.length()), format_number(o.total_weight)});
  out.csv("orbits.csv", orbits);

  std::vector<double> grid;
  for (int k = c.k_min; k <= c.k_max; ++k) grid.push_back(std::ldexp(1.0, k));
  const auto report = prime_orbit_check(flow, grid);
  io::Csv psi({"x", "psi", "ratio"});
  std::vector<double> xs, ys;
  for (const auto& r : report.rows) {
    psi.row(io::cells({r.x, r.psi, r.ratio}));
    xs.push_back(r.x);
    ys.push_back(r.ratio);
  }
  out.csv("psi.csv", psi);
  out.svg("psi.svg", io::line_plot_svg(xs, ys, "psi_w(x) D / x^D", "x", "ratio", true));

  const double D = flow.dimension();
  json s{{"D", D},
         {"letters", flow.letters()},
         {"orbits", table.orbits.size()},
         {"oscillatory", report.oscillatory},
         {"trend_slope", report.trend_slope},
         {"error_exponent", report.error_exponent}};
  if (c.max_len >= 2) {
    const Complex at{D + 1, 0};
    const auto e = euler_log_derivative(flow, at, c.max_len);
    const Complex closed = log_derivative_closed_form(flow, at);
    s["euler"] = {{"s", D + 1},
                  {"value", e.value.real()},
                  {"closed_form", closed.real()},
                  {"difference", std::abs(e.value - closed)},
                  {"tail_bound", e.tail_bound}};
  }
  out.summary(s);
}

void run_overlap(const JobConfig& c, const SelfSimilarStringSpec& spec, Output& out) {
  std::vector<double> eps;
  if (c.epsilons.empty() && !c.eps_max && !c.eps_min && !c.eps_count) {
    // Ladder adapted to the largest ratio so lattice strings are sampled in phase.
    const double r = spec.ratios()[0].r();
    for (int k = 4; k <= 12; ++k) eps.push_back(0.7 * spec.total_length() * std::pow(r, k));
  } else {
    eps = ladder(c, 1e-2, 1e-4, 9);
  }
  const auto shifts = c.shifts.empty() ? std::vector<double>{0.0} : c.shifts;
  io::Csv summary({"x", "D", "M_star", "degenerate"});
  io::Csv scan({"x", "epsilon", "value"});
  std::vector<double> xs, ds;
  for (double x : shifts) {
    const auto r = overlap_dimension_and_content(spec, x, eps, c.depth);
    summary.row({format_number(x), format_number(r.D), format_number(r.M_star), r.degenerate ? "1" : "0"});
    for (std::size_t i = 0; i < r.epsilons.size(); ++i) scan.row(io::cells({x, r.epsilons[i], r.values[i]}));
    xs.push_back(x);
    ds.push_back(r.D);
  }
  out.csv("overlap.csv", summary);
  out.csv("overlap_scan.csv", scan);
  out.svg("overlap.svg", io::line_plot_svg(xs, ds, "overlap dimension", "x", "D(x)"));
}

void run_plot(const JobConfig& c, Output& out) {
  check(!c.input.empty(), "plot needs --input");
  if (!std::filesystem::exists(c.input)) throw Error(Errc::io_error, "input not found: " + c.input);
  const auto t = io::read_csv(c.input);
  const auto& h = t.header();
  auto column = [&](const std::string& name, std::size_t fallback) {
    if (name.empty()) {
      check(fallback < h.size(), "input has too few columns");
      return fallback;
    }
    const auto it = std::find(h.begin(), h.end(), name);
    check(it != h.end(), "no column '" + name + "' in " + c.input);
    return static_cast<std::size_t>(it - h.begin());
  };
  auto value = [&](const std::vector<std::string>& row, std::size_t i) {
    check(i < row.size() && !row[i].empty(), "missing value in " + c.input);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(row[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    check(used == row[i].size(), "not a number: '" + row[i] + "'");
    return v;
  };
  const std::string stem = std::filesystem::path(c.input).stem().string();
  const bool roots = c.x_column.empty() && h.size() >= 2 && h[0] == "re" && h[1] == "im";
  if (roots) {
    std::vector<io::ScatterPoint> pts;
    double s0 = 0, s1 = 0, t0 = 0, t1 = 0;
    for (const auto& row : t.data()) {
      io::ScatterPoint p{value(row, 0), value(row, 1), 1};
      if (h.size() > 2 && h[2] == "multiplicity") p.multiplicity = static_cast<int>(value(row, 2));
      if (pts.empty()) {
        s0 = s1 = p.re;
        t0 = t1 = p.im;
      }
      s0 = std::min(s0, p.re);
      s1 = std::max(s1, p.re);
      t0 = std::min(t0, p.im);
      t1 = std::max(t1, p.im);
      pts.push_back(p);
    }
    const double ms = 0.05 * std::max(s1 - s0, 1e-3), mt = 0.05 * std::max(t1 - t0, 1e-3);
    out.text(stem + ".svg", io::scatter_svg(pts, s0 - ms, s1 + ms, t0 - mt, t1 + mt, NAN, stem));
    return;
  }
  const auto xi = column(c.x_column, 0), yi = column(c.y_column, 1);
  std::vector<double> xs, ys;
  for (const auto& row : t.data()) {
    xs.push_back(value(row, xi));
    ys.push_back(value(row, yi));
  }
  if (c.log_x)
    for (double x : xs) check(x > 0, "log x axis needs positive x");
  out.text(stem + ".svg", io::line_plot_svg(xs, ys, stem, h[xi], h[yi], c.log_x));
}

}  // namespace

Command parse_command(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kCommands); ++i)
    if (name == kCommands[i]) return static_cast<Command>(i);
  throw Error(Errc::parse_error, "unknown command '" + name + "'");
}

std::string command_name(Command c) { return kCommands[static_cast<int>(c)]; }

RunResult run(const JobConfig& config, std::ostream& diag) {
  RunResult result;
  Output out(config);
  bool dir_ok = false;
  try {
    if (config.threads < 0) throw Error(Errc::parse_error, "threads must be >= 0");
    if (config.threads > 0) omp_set_num_threads(config.threads);
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec || !std::filesystem::is_directory(config.out_dir))
      throw Error(Errc::io_error, "cannot create output directory " + config.out_dir.string());
    dir_ok = true;

    if (config.command == Command::plot) {
      run_plot(config, out);
    } else {
      const auto spec = load(config);
      out.text("spec.json", spec_to_json(spec).dump(2) + "\n");
      switch (config.command) {
        case Command::dims: run_dims(config, spec, out); break;
        case Command::tube: run_tube(config, spec, out); break;
        case Command::content: run_content(config, spec, out); break;
        case Command::approx: run_approx(config, spec, out); break;
        case Command::orbits: run_orbits(config, spec, out); break;
        case Command::overlap: run_overlap(config, spec, out); break;
        case Command::plot: break;
      }
    }
  } catch (const Deferred& d) {
    diagnose(diag, "error", std::string(code_name(d.error.code())), d.error.what());
    result.exit_code = 2;
  } catch (const Error& e) {
    diagnose(diag, "error", std::string(code_name(e.code())), e.what());
    result.exit_code = is_input_error(e.code()) ? 1 : 2;
  } catch (const std::filesystem::filesystem_error& e) {
    diagnose(diag, "error", "IoError", e.what());
    result.exit_code = 1;
  } catch (const std::exception& e) {
    diagnose(diag, "error", "Internal", e.what());
    result.exit_code = 2;
  }
  result.files = out.files();
  if (dir_ok) {
    try {
      result.manifest = io::write_manifest(config.out_dir, result.files, config.command_line);
    } catch (const Error& e) {
      diagnose(diag, "error", std::string(code_name(e.code())), e.what());
      result.exit_code = 1;
    }
  }
  if (result.exit_code == 0)
    diag << json{{"level", "info"}, {"code", "Done"}, {"files", result.files.size()}}.dump() << "\n";
  return result;
}

}  // namespace cxdim::cli
