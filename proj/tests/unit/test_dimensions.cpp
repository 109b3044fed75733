#include "oracles.hpp"

#include "cxdim/cli/builtins.hpp"
#include "cxdim/dimensions.hpp"
#include "cxdim/diophantine.hpp"
#include "cxdim/errors.hpp"
#include "cxdim/reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <complex>

using namespace cxdim;
using cli::builtin_spec;

namespace {

const double ln3 = std::log(3.0), ln2 = std::log(2.0);
const double cantor_D = ln2 / ln3;

// Durand-Kerner on z^{k_1} + ... + z^{k_n} = 1 (expanded exponents).
std::vector<std::complex<long double>> poly_roots(const std::vector<int>& exps) {
  using C = std::complex<long double>;
  const int deg = *std::max_element(exps.begin(), exps.end());
  std::vector<long double> c(static_cast<std::size_t>(deg) + 1, 0);  // coefficients of -1 + sum z^k
  c[0] = -1;
  for (int k : exps) c[static_cast<std::size_t>(k)] += 1;
  const long double lead = c.back();
  auto p = [&](C z) {
    C v = 0;
    for (int i = deg; i >= 0; --i) v = v * z + c[static_cast<std::size_t>(i)];
    return v / lead;
  };
  std::vector<C> z(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) z[static_cast<std::size_t>(i)] = std::pow(C(0.4L, 0.9L), i);
  for (int it = 0; it < 5000; ++it) {
    long double change = 0;
    for (int i = 0; i < deg; ++i) {
      C den = 1;
      for (int j = 0; j < deg; ++j)
        if (j != i) den *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      const C step = p(z[static_cast<std::size_t>(i)]) / den;
      z[static_cast<std::size_t>(i)] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-18L) break;
  }
  return z;
}

// omega = log z / log r with Im in [0, p).
std::vector<Complex> to_omegas(const std::vector<std::complex<long double>>& zs, double r) {
  const double p = two_pi / std::log(1 / r);
  std::vector<Complex> out;
  for (const auto& z : zs) {
    const auto l = std::log(z) / std::log(static_cast<long double>(r));
    Complex w(static_cast<double>(l.real()), static_cast<double>(l.imag()));
    double t = std::fmod(w.imag(), p);
    if (t < 0) t += p;
    if (t > p - 1e-9) t -= p;
    out.emplace_back(w.real(), t);
  }
  return out;
}

double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0;
  for (const auto& x : a) {
    double best = 1e300;
    for (const auto& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Complex> omegas(const std::vector<ComplexDimension>& roots) {
  std::vector<Complex> out;
  for (const auto& r : roots)
    for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.omega);
  return out;
}

int total_multiplicity(const DimensionWindow& w) {
  int n = 0;
  for (const auto& r : w.roots) n += r.multiplicity;
  return n;
}

}  // namespace

TEST_CASE("real dimension") {
  CHECK(real_dimension(builtin_spec("cantor")) == doctest::Approx(cantor_D).epsilon(1e-15));
  CHECK(std::abs(real_dimension(builtin_spec("fibonacci")) - std::log2(oracle::phi)) < 1e-13);
  for (const auto& [name, doc] : cli::builtin_specs()) {
    CAPTURE(name);
    const auto s = spec_from_json(doc);
    CHECK(std::abs(real_dimension(s) - oracle::moran(s.expanded_ratios())) < 1e-13);
  }
}

TEST_CASE("Cantor poles lie on one vertical line") {
  const auto w = find_roots(builtin_spec("cantor"), {0, 1, 0, 20});
  const double p = two_pi / ln3;
  REQUIRE(w.roots.size() == 4);  // k = 0..3; 4p = 22.9 is outside
  for (int k = 0; k < 4; ++k) {
    const auto& r = w.roots[static_cast<std::size_t>(k)];
    CHECK(std::abs(r.omega - Complex(cantor_D, k * p)) < 1e-12);
    CHECK(r.multiplicity == 1);
    REQUIRE(r.residue);
    CHECK(std::abs(*r.residue - 1 / ln3) < 1e-12);
  }
  CHECK(w.winding_total == 4);
}

TEST_CASE("Fibonacci poles lie on two lines") {
  const auto w = find_roots(builtin_spec("fibonacci"), {-1, 1, 0, 10});
  const double D = std::log2(oracle::phi), p = two_pi / ln2;
  const std::vector<Complex> expect{{-D, p / 2}, {D, 0}, {D, p}};
  REQUIRE(w.roots.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(std::abs(w.roots[i].omega - expect[i]) < 1e-12);
  CHECK(std::abs(residue_at(builtin_spec("fibonacci"), {D, 0}) - oracle::phi / (std::sqrt(5.0) * ln2)) < 1e-12);
}

TEST_CASE("double root of the modified Cantor denominator") {
  const auto w = find_roots(builtin_spec("multiple"), {-1, 1, 0, 6});
  const auto it = std::find_if(w.roots.begin(), w.roots.end(),
                               [](const ComplexDimension& r) { return std::abs(r.omega - Complex(0, pi / ln3)) < 1e-6; });
  REQUIRE(it != w.roots.end());
  CHECK(it->multiplicity == 2);
  CHECK_FALSE(it->residue.has_value());
  CHECK_THROWS_AS(residue_at(builtin_spec("multiple"), {0, pi / ln3}), Error);
}

TEST_CASE("argument principle closure under subdivision") {
  for (const char* name : {"nongeneric", "modified-cantor", "generic-pair"}) {
    CAPTURE(name);
    const auto s = builtin_spec(name);
    const Window w{-3, 1, 0.5, 120.5};
    const auto full = find_roots(s, w);
    CHECK(total_multiplicity(full) == full.winding_total);
    const double sm = -1.1, tm = 60.3;
    int parts = 0;
    for (const auto& q : {Window{-3, sm, 0.5, tm}, Window{sm, 1, 0.5, tm}, Window{-3, sm, tm, 120.5},
                          Window{sm, 1, tm, 120.5}}) {
      const auto r = find_roots(s, q);
      CHECK(total_multiplicity(r) == r.winding_total);
      parts += r.winding_total;
    }
    CHECK(parts == full.winding_total);
    // Independent winding count by trapezoid quadrature of f'/f.
    CHECK(std::lround(reference::winding_trapezoid(denominator(s), w, 20000)) == full.winding_total);
  }
}

TEST_CASE("conjugate windows mirror") {
  const auto s = builtin_spec("nongeneric");
  const auto up = find_roots(s, {-3, 1, 0.25, 200});
  const auto down = find_roots(s, {-3, 1, -200, -0.25});
  REQUIRE(up.roots.size() == down.roots.size());
  for (const auto& r : up.roots) {
    const bool found = std::any_of(down.roots.begin(), down.roots.end(), [&](const ComplexDimension& d) {
      return std::abs(d.omega - std::conj(r.omega)) < 1e-10 && d.multiplicity == r.multiplicity;
    });
    CHECK(found);
  }
}

TEST_CASE("D dominates and is the only real-axis root") {
  for (const char* name : {"nongeneric", "generic-pair", "generic-quarter"}) {
    CAPTURE(name);
    const auto s = builtin_spec(name);
    const double D = real_dimension(s);
    const auto w = find_roots(s, {-4, 1.5, -0.5, 500});
    int on_axis = 0;
    for (const auto& r : w.roots) {
      CHECK(r.omega.real() <= D + 1e-10);
      CHECK(std::abs(eval_denominator(s, r.omega)) <= 1e-10 * (1 + s.scaling_count()));
      if (std::abs(r.omega.imag()) < 1e-9) ++on_axis;
      if (std::abs(r.omega.imag()) > 1e-9) CHECK(r.omega.real() < D - 1e-8);
    }
    CHECK(on_axis == 1);
  }
}

TEST_CASE("lattice periodicity") {
  for (const char* name : {"fibonacci", "modified-cantor", "modified-fibonacci"}) {
    CAPTURE(name);
    const auto s = builtin_spec(name);
    const auto st = classify_lattice(s);
    REQUIRE(st.lattice);
    const double p = st.period;
    const auto a = find_roots(s, {-3, 1, 0.1, p + 0.1});
    const auto b = find_roots(s, {-3, 1, p + 0.1, 2 * p + 0.1});
    REQUIRE(a.roots.size() == b.roots.size());
    std::vector<Complex> shifted;
    for (const auto& r : a.roots) shifted.push_back(r.omega + Complex(0, p));
    CHECK(set_distance(shifted, omegas(b.roots)) < 1e-9);
  }
}

TEST_CASE("residue is constant along the Cantor line") {
  const auto s = builtin_spec("cantor");
  for (int k = -5; k <= 5; ++k) CHECK(std::abs(residue_at(s, {cantor_D, k * two_pi / ln3}) - 1 / ln3) < 1e-12);
}

TEST_CASE("cancellation removes the shared factor") {
  const Window w{-2, 1, -0.3, 40};
  const auto cantor = cancellation_reduce(builtin_spec("cantor"), w);
  const auto mc = cancellation_reduce(builtin_spec("modified-cantor"), w);
  REQUIRE(cantor.roots.size() == mc.roots.size());
  CHECK(set_distance(omegas(cantor.roots), omegas(mc.roots)) < 1e-9);
  CHECK(set_distance(omegas(mc.roots), omegas(cantor.roots)) < 1e-9);
  // Cantor has a constant numerator: nothing cancels.
  CHECK(cantor.roots.size() == find_roots(builtin_spec("cantor"), w).roots.size());

  const auto fib = cancellation_reduce(builtin_spec("fibonacci"), w);
  const auto mfib = cancellation_reduce(builtin_spec("modified-fibonacci"), w);
  REQUIRE(fib.roots.size() == mfib.roots.size());
  CHECK(set_distance(omegas(fib.roots), omegas(mfib.roots)) < 1e-9);

  // Output is a subset of the denominator zeros.
  const auto all = find_roots(builtin_spec("modified-fibonacci"), w);
  CHECK(set_distance(omegas(mfib.roots), omegas(all.roots)) < 1e-12);
  CHECK(all.roots.size() > mfib.roots.size());
}

TEST_CASE("lattice classification") {
  const auto mc = classify_lattice(builtin_spec("modified-cantor"));
  REQUIRE(mc.lattice);
  CHECK(mc.r() == doctest::Approx(1.0 / 3).epsilon(1e-14));
  REQUIRE(mc.exponents.size() == 2);
  CHECK(mc.exponents[0] == std::pair{2, 3});
  CHECK(mc.exponents[1] == std::pair{3, 2});
  CHECK(mc.period == doctest::Approx(two_pi / ln3));

  const auto ng = classify_lattice(builtin_spec("nongeneric"));
  CHECK_FALSE(ng.lattice);
  CHECK(ng.rank == 2);
  CHECK_FALSE(ng.generic);

  const auto gp = classify_lattice(builtin_spec("generic-pair"));
  CHECK_FALSE(gp.lattice);
  CHECK(gp.rank == 2);
  CHECK(gp.generic);

  const auto fib = classify_lattice(builtin_spec("fibonacci"));
  CHECK(fib.lattice);
  CHECK(fib.exponents == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}});
}

TEST_CASE("lattice lines") {
  const auto cantor = builtin_spec("cantor");
  const auto lc = lattice_lines(classify_lattice(cantor), cantor);
  REQUIRE(lc.lines.size() == 1);
  CHECK(std::abs(lc.lines[0].omega - Complex(cantor_D, 0)) < 1e-13);
  CHECK(lc.period == doctest::Approx(two_pi / ln3).epsilon(1e-15));

  const auto ng = builtin_spec("nongeneric");
  for (int stage : {1, 3}) {
    CAPTURE(stage);
    const auto a = lattice_approximation(ng, stage);
    const auto ll = lattice_lines(classify_lattice(a.approximant), a.approximant);
    CHECK_FALSE(ll.fallback);
    std::vector<int> exps;
    for (const auto& [k, m] : a.exponents)
      for (int i = 0; i < m; ++i) exps.push_back(k);
    const auto oracle_w = to_omegas(poly_roots(exps), static_cast<double>(a.base));
    std::vector<Complex> got;
    for (const auto& l : ll.lines)
      for (int m = 0; m < l.multiplicity; ++m) got.push_back(l.omega);
    REQUIRE(got.size() == oracle_w.size());
    CHECK(set_distance(got, oracle_w) < 1e-9);
    CHECK(set_distance(oracle_w, got) < 1e-9);
    CHECK(ll.lines[0].omega.real() == doctest::Approx(real_dimension(a.approximant)).epsilon(1e-12));
    CHECK(std::abs(ll.lines[0].omega.imag()) < 1e-12);
  }
  const auto s1 = lattice_approximation(ng, 1);
  CHECK(lattice_lines(classify_lattice(s1.approximant), s1.approximant).period ==
        doctest::Approx(4 * pi / ln2).epsilon(1e-14));
  const auto s4 = lattice_approximation(ng, 4);
  CHECK(lattice_lines(classify_lattice(s4.approximant), s4.approximant).period ==
        doctest::Approx(58 * pi / ln2).epsilon(1e-14));

  // Expanding the lines reproduces the direct root search over two periods.
  const auto fib = builtin_spec("fibonacci");
  const auto lf = lattice_lines(classify_lattice(fib), fib);
  const auto expanded = lattice_roots(lf, 0.5, 2 * lf.period);
  const auto direct = find_roots(fib, {-1, 1, 0.5, 2 * lf.period});
  REQUIRE(expanded.size() == direct.roots.size());
  CHECK(set_distance(omegas(expanded), omegas(direct.roots)) < 1e-10);
}

TEST_CASE("staircase of real parts") {
  const auto cantor = builtin_spec("cantor");
  const auto lc = lattice_lines(classify_lattice(cantor), cantor);
  auto st = real_parts_density(lattice_roots(lc, 0, lc.period * 0.999));
  REQUIRE(st.size() == 1);
  CHECK(st[0].x == doctest::Approx(cantor_D));
  CHECK(st[0].count == 1);

  const auto fib = builtin_spec("fibonacci");
  const auto lf = lattice_lines(classify_lattice(fib), fib);
  st = real_parts_density(lattice_roots(lf, 0, lf.period * 0.999));
  REQUIRE(st.size() == 2);
  CHECK(st[0].x == doctest::Approx(-std::log2(oracle::phi)));
  CHECK(st[1].x == doctest::Approx(std::log2(oracle::phi)));
  CHECK(st[0].count == 1);
  CHECK(st[1].count == 2);

  // 17/12 stage: exponents {12, 24, 29}, 29 roots per period.
  const auto a = lattice_approximation(builtin_spec("nongeneric"), 3);
  CHECK(a.exponents == std::vector<std::pair<int, int>>{{12, 1}, {24, 1}, {29, 1}});
  const auto ll = lattice_lines(classify_lattice(a.approximant), a.approximant);
  std::vector<ComplexDimension> roots;
  for (const auto& l : ll.lines) roots.push_back({l.omega, l.multiplicity, std::nullopt});
  st = real_parts_density(roots);
  REQUIRE(st.back().count == 29);
  auto oracle_re = to_omegas(poly_roots({12, 24, 29}), static_cast<double>(a.base));
  std::vector<double> re;
  for (const auto& w : oracle_re) re.push_back(w.real());
  std::sort(re.begin(), re.end());
  for (std::size_t i = 0; i < st.size(); ++i) {
    CHECK(st[i].x == doctest::Approx(re[static_cast<std::size_t>(st[i].count - 1)]).epsilon(1e-9));
    if (i) CHECK(st[i].x >= st[i - 1].x);
  }
}

TEST_CASE("left edge of the strip") {
  const auto gp = builtin_spec("generic-pair");
  const auto sl = sigma_l(gp);
  CHECK_FALSE(sl.empirical);
  const double r1 = 0.5, r2 = std::pow(2.0, -1 - std::sqrt(2.0));
  const double oracle_sl = oracle::bisect([&](double s) { return std::pow(r2, s) - 1 - std::pow(r1, s); }, -10, 0);
  CHECK(sl.value == doctest::Approx(oracle_sl).epsilon(1e-12));
  // Computed zeros respect it and come close to it.
  const auto w = find_roots(gp, {oracle_sl - 0.5, 1, 0, 2000});
  double lo = 1;
  for (const auto& r : w.roots) lo = std::min(lo, r.omega.real());
  CHECK(lo >= sl.value - 1e-9);
  CHECK(lo - sl.value < 0.05);

  const auto ng = sigma_l(builtin_spec("nongeneric"), 600);
  CHECK(ng.empirical);
  CHECK(ng.value < 0);
  CHECK_THROWS_AS(sigma_l(builtin_spec("cantor")), Error);
}

TEST_CASE("density of zeros for one-gap strings") {
  for (const char* name : {"fibonacci", "generic-pair", "generic-quarter", "nongeneric"}) {
    CAPTURE(name);
    const auto s = builtin_spec(name);
    const double wN = s.ratios().back().w();
    const auto strip = zero_strip(denominator(s));
    for (double T : {50.0, 200.0, 600.0}) {
      const auto w = find_roots(s, {strip.first - 0.1, strip.second + 0.1, -0.25, T});
      const double dev = total_multiplicity(w) - wN / two_pi * T;
      CAPTURE(T);
      CHECK(std::abs(dev) <= 10);
    }
  }
}

TEST_CASE("dimension-free region for two ratios") {
  const auto gp = builtin_spec("generic-pair");
  const auto reg = dimension_free_region_two(gp);
  const double D = real_dimension(gp);
  const double r1 = 0.5, r2 = std::pow(2.0, -1 - std::sqrt(2.0));
  const double fp = std::log(1 / r1) * std::pow(r1, D) + std::log(1 / r2) * std::pow(r2, D);
  const double cb = std::pow(pi, 4) * std::pow(r1 * r2, D) / (2 * fp * fp * fp);
  const double ccf = reference::badly_approximable_serial(1 + std::sqrt(2.0L), 10000);
  CHECK(reg.constant == doctest::Approx(cb * ccf * ccf).epsilon(1e-9));
  CHECK(dimension_free_region(gp, 100) == doctest::Approx(D - cb * ccf * ccf * 1e-4).epsilon(1e-12));
  for (double t : {1.0, 10.0, 1e3, 1e6}) CHECK(dimension_free_region(gp, t) < D);

  const auto w = find_roots(gp, {-2, 1, 10, 1000});
  for (const auto& r : w.roots) {
    CAPTURE(r.omega);
    CHECK(r.omega.real() <= dimension_free_region(gp, r.omega.imag()));
  }
  CHECK_THROWS_AS(dimension_free_region(builtin_spec("nongeneric"), 100), Error);
}

TEST_CASE("fitted dimension-free constant for N = 3") {
  const auto ng = builtin_spec("nongeneric");
  const auto w = find_roots(ng, {-4, 1.5, 0, 1000});
  const auto fit = fit_dimension_free_region(ng, w.roots);
  CHECK(fit.fitted);
  CHECK(fit.exponent == 1.0);
  CHECK(fit.constant > 0);
  int right = 0, counted = 0;
  for (const auto& r : w.roots) {
    if (r.omega.imag() < 10) continue;
    ++counted;
    if (r.omega.real() > fit.bound(r.omega.imag())) ++right;
  }
  // 1st percentile: at most 1% of the zeros lie right of the fitted bound.
  CHECK(right <= counted / 100 + 1);
}
