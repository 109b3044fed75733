// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures. Usage: acceptance <cxdim binary> <scratch dir>

#include "cxdim/cli/builtins.hpp"
#include "cxdim/dimensions.hpp"
#include "cxdim/diophantine.hpp"
#include "cxdim/dynamics.hpp"
#include "cxdim/io/format.hpp"
#include "cxdim/stats.hpp"
#include "cxdim/tube.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>

using namespace cxdim;
using cli::builtin_spec;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

void criterion(const std::string& id, double limit_s, const std::function<Check()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && dt > limit_s) c.require(false, "runtime " + num(dt) + " s over " + num(limit_s) + " s");
  std::printf("%s %-4s %7.2fs  %s\n", c.ok ? "PASS" : "FAIL", id.c_str(), dt, c.detail.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

double nearest(Complex z, const std::vector<ComplexDimension>& set) {
  double best = 1e300;
  for (const auto& r : set) best = std::min(best, std::abs(z - r.omega));
  return best;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cxdim binary> <scratch dir>\n");
    return 64;
  }
  const std::string tool = argv[1];
  const fs::path scratch = argv[2];

  const double log2 = std::log(2.0), log3 = std::log(3.0);

  criterion("1", 5, [&] {
    Check c;
    const auto cantor = builtin_spec("cantor");
    const double D = real_dimension(cantor), p = two_pi / log3;
    c.require(std::abs(D - log2 / log3) < 1e-12, "D off by " + num(D - log2 / log3));
    const auto w = find_roots(cantor, {0, 1, 0, 40});
    // D + ikp with k = 0..6 lie in t <= 40; 7p = 40.03 does not.
    int expected = 0;
    for (int k = 0; k * p <= 40; ++k) {
      ++expected;
      c.require(nearest({D, k * p}, w.roots) < 1e-9, "missing k=" + std::to_string(k));
    }
    c.require(static_cast<int>(w.roots.size()) == expected,
              "found " + std::to_string(w.roots.size()) + " roots, expected " + std::to_string(expected));
    for (const auto& r : w.roots) {
      c.require(r.multiplicity == 1, "non-simple root");
      c.require(r.residue && std::abs(*r.residue - 1 / log3) < 1e-9, "residue off");
    }
    c.detail += (c.detail.empty() ? "" : "; ") + std::to_string(w.roots.size()) + " simple poles on Re = log2/log3";
    return c;
  });

  criterion("2", 0, [&] {
    Check c;
    auto compare = [&](const char* a, const char* b, const Window& win) {
      const auto reduced = cancellation_reduce(builtin_spec(a), win);
      const auto plain = find_roots(builtin_spec(b), win);
      c.require(reduced.roots.size() == plain.roots.size(),
                std::string(a) + ": " + std::to_string(reduced.roots.size()) + " vs " + std::to_string(plain.roots.size()));
      double worst = 0;
      for (const auto& r : reduced.roots) worst = std::max(worst, nearest(r.omega, plain.roots));
      for (const auto& r : plain.roots) worst = std::max(worst, nearest(r.omega, reduced.roots));
      c.require(worst < 1e-9, std::string(a) + " max distance " + num(worst));
    };
    compare("modified-cantor", "cantor", {0, 1, 0, 40});
    compare("modified-fibonacci", "fibonacci", {-2, 2, -1e-6, 40});
    return c;
  });

  criterion("3", 0, [&] {
    Check c;
    const auto w = find_roots(builtin_spec("multiple"), {-0.5, 0.5, 2, 4});
    const Complex target{0, pi / log3};
    bool seen = false;
    for (const auto& r : w.roots)
      if (std::abs(r.omega - target) < 1e-8) {
        seen = true;
        c.require(r.multiplicity == 2, "multiplicity " + std::to_string(r.multiplicity));
      }
    c.require(seen, "no pole at i pi/log 3");
    return c;
  });

  criterion("4", 30, [&] {
    Check c;
    const auto fib = builtin_spec("fibonacci");
    const auto table = enumerate_lengths(fib, std::ldexp(1.0, -30));
    const auto eps = geometric_ladder(0.4, std::ldexp(1.0, -12), 50);
    const double T = 200.5 * two_pi / log2 + 1;
    double worst_direct = 0, worst_explicit = 0, worst_eps = 0;
    int over = 0;
    for (double e : eps) {
      const double closed = fibonacci_closed_form(e).volume;
      worst_direct = std::max(worst_direct, std::abs(closed - volume_direct(table, e).volume));
      const double d = std::abs(closed - volume_explicit(fib, e, T).volume);
      if (d >= 1e-6) ++over;
      if (d > worst_explicit) {
        worst_explicit = d;
        worst_eps = e;
      }
    }
    c.require(worst_direct < 1e-9, "closed vs direct " + num(worst_direct));
    c.require(worst_explicit < 1e-6, "closed vs explicit " + num(worst_explicit) + " at eps " + num(worst_eps) + " (" +
                                         std::to_string(over) + " of 50 points over 1e-6)");
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("direct ") + num(worst_direct) + ", explicit " +
                num(worst_explicit);
    return c;
  });

  criterion("5", 0, [&] {
    Check c;
    const auto cf = continued_fraction(boost::multiprecision::sqrt(Quad(2)), 6);
    c.require(cf.convergents == std::vector<std::pair<std::int64_t, std::int64_t>>{
                                    {3, 2}, {7, 5}, {17, 12}, {41, 29}, {99, 70}, {239, 169}},
              "convergents");
    const auto ng = builtin_spec("nongeneric");
    const auto s4 = lattice_approximation(ng, 4);
    c.require(s4.q == 29, "stage 4 q");
    c.require(std::abs(s4.period - 58 * pi / log2) < 0.01, "stage 4 period " + num(s4.period));
    c.require(lattice_approximation(ng, 1).exponents == std::vector<std::pair<int, int>>{{2, 1}, {4, 1}, {5, 1}},
              "stage 1 exponents");
    return c;
  });

  criterion("6", 120, [&] {
    Check c;
    const auto ng = builtin_spec("nongeneric");
    const double p1 = lattice_approximation(ng, 1).period;
    const auto s4 = lattice_approximation(ng, 4);
    const auto lines = lattice_lines(classify_lattice(s4.approximant), s4.approximant);
    const auto lat = lattice_roots(lines, 0, 2 * p1);
    const auto strip = zero_strip(denominator(ng));
    const auto exact = find_roots(ng, {strip.first - 0.1, strip.second + 0.1, -1, 2 * p1 + 1});
    double worst = 0;
    for (const auto& r : lat) worst = std::max(worst, nearest(r.omega, exact.roots));
    c.require(!lat.empty(), "no lattice roots");
    c.require(worst < 0.1, "max distance " + num(worst));
    c.detail += (c.detail.empty() ? "" : "; ") + std::to_string(lat.size()) + " roots up to Im " + num(2 * p1) +
                ", max distance " + num(worst);
    return c;
  });

  criterion("7", 0, [&] {
    Check c;
    const auto gp = builtin_spec("generic-pair");
    const double D = real_dimension(gp);
    std::vector<double> lx, le;
    for (int k = 1; k <= 50; ++k) {
      const auto r = perturbation_root(gp, k);
      c.require(r.refined.real() < D, "Re >= D at k=" + std::to_string(k));
      if (r.error > 0) {
        lx.push_back(std::log(std::abs(r.x)));
        le.push_back(std::log(r.error));
      }
    }
    const double slope = fit_line(lx, le).slope;
    c.require(std::abs(slope - 3) <= 0.3, "slope " + num(slope));
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("slope ") + num(slope);
    return c;
  });

  criterion("8", 0, [&] {
    Check c;
    for (const char* name : {"fibonacci", "generic-pair"}) {
      const auto s = builtin_spec(name);
      const double rN = s.expanded_ratios().back();
      const auto strip = zero_strip(denominator(s));
      for (double T : {100.0, 300.0, 1000.0}) {
        const auto w = find_roots(s, {strip.first - 0.1, strip.second + 0.1, -1e-6, T});
        int count = 0;
        for (const auto& r : w.roots)
          if (r.omega.imag() >= -1e-9 && r.omega.imag() <= T) count += r.multiplicity;
        const double dev = count - std::log(1 / rN) / two_pi * T;
        c.require(std::abs(dev) <= 10, std::string(name) + " T=" + num(T) + " deviation " + num(dev));
      }
    }
    return c;
  });

  criterion("9", 0, [&] {
    Check c;
    const auto gp = builtin_spec("generic-pair");
    const double M = minkowski_content_formula(gp), Mr = minkowski_content_residue(gp);
    c.require(std::abs(M - Mr) <= 1e-12 * M, "identity off by " + num(M - Mr));
    const auto est = minkowski_content_empirical(gp, geometric_ladder(1e-2, 1e-6, 17));
    c.require(est.M_est && std::abs(*est.M_est / M - 1) < 0.02, "estimate vs formula");
    const auto cantor = minkowski_content_empirical(builtin_spec("cantor"), geometric_ladder(1e-1, 1e-6, 21));
    c.require(cantor.oscillation.has_value(), "no oscillation reported for Cantor");
    if (cantor.oscillation)
      c.require(std::abs(cantor.oscillation->period / log3 - 1) < 0.02,
                "period " + num(cantor.oscillation->period));
    if (est.M_est) c.detail += (c.detail.empty() ? "" : "; ") + std::string("M ") + num(M) + " est " + num(*est.M_est);
    return c;
  });

  criterion("10", 120, [&] {
    Check c;
    const auto cantor = FlowSpec::from_string(builtin_spec("cantor"));
    const double D = cantor.dimension();
    const auto e = euler_log_derivative(cantor, D + 1, 25);
    const double err = std::abs(e.value - log_derivative_closed_form(cantor, D + 1));
    c.require(err < 1e-8, "Euler sum off by " + num(err));
    const auto table = primitive_orbits(cantor, 20);
    std::vector<std::uint64_t> by_len(21, 0);
    for (const auto& o : table.orbits) ++by_len[static_cast<std::size_t>(o.length())];
    for (int l = 1; l <= 20; ++l) {
      std::uint64_t s = 0;
      for (int d = 1; d <= l; ++d)
        if (l % d == 0) s += static_cast<std::uint64_t>(d) * by_len[static_cast<std::size_t>(d)];
      c.require(s == (1ull << l), "orbit count at length " + std::to_string(l));
    }
    const Quad l2 = boost::multiprecision::log(Quad(2));
    const FlowSpec nl({l2, (1 + boost::multiprecision::sqrt(Quad(2))) * l2});
    std::vector<double> xs;
    for (int k = 10; k <= 30; ++k) xs.push_back(std::ldexp(1.0, k));
    const auto rep = prime_orbit_check(nl, xs);
    c.require(!rep.oscillatory, "nonlattice flow flagged oscillatory");
    c.require(rep.trend_slope < 0, "ratio does not trend toward 1");
    c.require(prime_orbit_check(cantor, xs).oscillatory, "Cantor flow not flagged oscillatory");
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("trend ") + num(rep.trend_slope) + ", error exponent " +
                num(rep.error_exponent);
    return c;
  });

  criterion("11", 0, [&] {
    Check c;
    // Unit-length Cantor set, shifts measured in its own units.
    const auto unit = builtin_spec("cantor").scaled(Quad(1) / 3);
    std::vector<double> ladder;
    for (int k = 4; k <= 12; ++k) ladder.push_back(0.7 * std::pow(3.0, -k));
    const auto o0 = overlap_dimension_and_content(unit, 0, ladder);
    const auto o1 = overlap_dimension_and_content(unit, 2.0 / 3, ladder);
    const auto o2 = overlap_dimension_and_content(unit, 2.0 / 3 + 2.0 / 9, ladder);
    const double D = log2 / log3;
    c.require(std::abs(o1.D - D) <= 0.02, "D(2/3) " + num(o1.D));
    c.require(std::abs(o1.M_star / o0.M_star - 0.5) <= 0.1, "ratio(2/3) " + num(o1.M_star / o0.M_star));
    c.require(std::abs(o2.M_star / o0.M_star - 0.25) <= 0.07, "ratio(8/9) " + num(o2.M_star / o0.M_star));
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("ratios ") + num(o1.M_star / o0.M_star) + ", " +
                num(o2.M_star / o0.M_star);
    return c;
  });

  criterion("12", 0, [&] {
    Check c;
    const fs::path a = scratch / "approx_a", b = scratch / "approx_b";
    fs::remove_all(a);
    fs::remove_all(b);
    for (const auto& dir : {a, b}) {
      const std::string cmd = "\"" + tool + "\" approx --builtin nongeneric --stages 6 --out \"" + dir.string() +
                              "\" 2>/dev/null";
      c.require(std::system(cmd.c_str()) == 0, "approx run failed");
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename();
      c.require(fs::exists(b / name) && slurp(entry.path()) == slurp(b / name), "differs: " + name.string());
    }
    const auto ng = builtin_spec("nongeneric");
    const std::regex circle(R"re(data-re="([^"]+)" data-im="([^"]+)" data-m="([^"]+)")re");
    for (int n = 1; n <= 6; ++n) {
      const std::string stem = "stage_" + std::to_string(n);
      const std::string svg = slurp(a / (stem + ".svg"));
      c.require(!svg.empty(), stem + ".svg missing");
      c.require(svg.find("<polyline") != std::string::npos, stem + " has no staircase panel");
      std::vector<std::array<double, 3>> pts;
      for (std::sregex_iterator it(svg.begin(), svg.end(), circle), end; it != end; ++it)
        pts.push_back({std::stod((*it)[1]), std::stod((*it)[2]), std::stod((*it)[3])});
      const auto csv = io::read_csv(a / (stem + ".csv"));
      c.require(csv.rows() == pts.size(), stem + " svg/csv point count");
      for (std::size_t i = 0; i < std::min(csv.rows(), pts.size()); ++i) {
        const auto& row = csv.data()[i];
        c.require(std::stod(row[0]) == pts[i][0] && std::stod(row[1]) == pts[i][1] && std::stod(row[2]) == pts[i][2],
                  stem + " svg/csv point " + std::to_string(i));
      }
      const auto s = lattice_approximation(ng, n);
      const auto lines = lattice_lines(classify_lattice(s.approximant), s.approximant);
      c.require(lines.lines.size() == pts.size(), stem + " point count vs lattice_lines");
      for (std::size_t i = 0; i < std::min(lines.lines.size(), pts.size()); ++i) {
        const auto& l = lines.lines[i];
        const double d = std::abs(Complex(pts[i][0], pts[i][1]) - l.omega);
        c.require(d < 1e-12 * (1 + std::abs(l.omega)) && pts[i][2] == l.multiplicity,
                  stem + " point " + std::to_string(i) + " vs lattice_lines");
      }
    }
    return c;
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
