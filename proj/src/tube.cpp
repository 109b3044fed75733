#include "cxdim/tube.hpp"

#include "cxdim/dimensions.hpp"
#include "cxdim/dirichlet.hpp"
#include "cxdim/errors.hpp"
#include "cxdim/stats.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cxdim {
namespace {

constexpr double kBucket = 1e-12;
constexpr double kEdge = 1e-12;

using u128 = unsigned __int128;

std::uint64_t checked(u128 v) {
  if (v > u128(UINT64_MAX)) throw Error(Errc::budget_exceeded, "length multiplicity overflows 64 bits");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  u128 b = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    b = b * (n - k + i) / i;
    checked(b);
  }
  return static_cast<std::uint64_t>(b);
}

struct Raw {
  double length;
  std::uint64_t mult;
};

struct Enumerator {
  std::vector<Quad> w;       // ratio weights
  std::vector<int> rm;       // ratio multiplicities
  std::vector<Quad> log_lg;  // log(L g_k)
  std::vector<int> gm;
  Quad log_lmin;
  Quad log_thr;  // a word is kept while sum n_j w_j <= log_thr
  double total_length;

  // Walks count vectors with n_0 fixed.
  void walk(std::vector<int>& n, std::size_t j, Quad s, std::vector<Raw>& out, long double& tail,
            std::size_t max_entries) const {
    if (j == w.size()) {
      visit(n, s, out, tail, max_entries);
      return;
    }
    for (int c = 0;; ++c) {
      const Quad sc = s + Quad(c) * w[j];
      if (sc > log_thr) break;
      n[j] = c;
      walk(n, j + 1, sc, out, tail, max_entries);
    }
    n[j] = 0;
  }

  void visit(const std::vector<int>& n, Quad s, std::vector<Raw>& out, long double& tail,
             std::size_t max_entries) const {
    // Words with count vector n: multinomial times prod m_j^{n_j}.
    u128 count = 1;
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
      total += static_cast<std::uint64_t>(n[j]);
      count = count * binomial(total, static_cast<std::uint64_t>(n[j]));
      checked(count);
      for (int i = 0; i < n[j]; ++i) {
        count *= static_cast<u128>(rm[j]);
        checked(count);
      }
    }
    const auto c = static_cast<std::uint64_t>(count);
    for (std::size_t k = 0; k < log_lg.size(); ++k) {
      const Quad lg = log_lg[k] - s;
      const double len = static_cast<double>(boost::multiprecision::exp(lg));
      if (lg >= log_lmin) {
        out.push_back({len, checked(u128(c) * static_cast<u128>(gm[k]))});
        if (out.size() > max_entries) throw Error(Errc::budget_exceeded, "length table exceeds the entry budget");
      } else {
        tail += static_cast<long double>(c) * gm[k] * len;
      }
    }
    // Pruned children: the whole subtree below prefix n + e_j sums to
    // (prefix product) L, since the gaps and copies tile the initiator.
    for (std::size_t j = 0; j < w.size(); ++j) {
      const Quad sj = s + w[j];
      if (sj > log_thr)
        tail += static_cast<long double>(c) * rm[j] * static_cast<long double>(boost::multiprecision::exp(-sj)) *
                total_length;
    }
  }
};

double regression_dimension(const std::vector<double>& eps, const std::vector<double>& vals) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (vals[i] <= 0) continue;
    x.push_back(std::log(eps[i]));
    y.push_back(std::log(vals[i]));
  }
  if (x.size() < 2) return 0.0;
  return 1.0 - fit_line(x, y).slope;
}

// Lag with the smallest mean squared difference after the curve first
// decorrelates, refined by a parabola through its neighbours.
double period_by_lag(const std::vector<double>& h, double du) {
  const std::size_t n = h.size();
  const std::size_t max_lag = n / 2;
  std::vector<double> d(max_lag + 1, 0.0);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double acc = 0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += (h[i + lag] - h[i]) * (h[i + lag] - h[i]);
    d[lag] = acc / static_cast<double>(n - lag);
  }
  const double dmax = *std::max_element(d.begin(), d.end());
  for (std::size_t lag = 2; lag < max_lag; ++lag) {
    if (d[lag] < 0.2 * dmax && d[lag] <= d[lag - 1] && d[lag] <= d[lag + 1]) {
      const double a = d[lag - 1], b = d[lag], c = d[lag + 1];
      const double den = a - 2 * b + c;
      const double shift = den > 0 ? 0.5 * (a - c) / den : 0.0;
      return (static_cast<double>(lag) + shift) * du;
    }
  }
  return 0.0;
}

void merge_into(std::vector<Interval>& out, Interval v) {
  if (!out.empty() && v.a <= out.back().b) out.back().b = std::max(out.back().b, v.b);
  else out.push_back(v);
}

std::vector<Interval> inflate(const std::vector<Interval>& f, double eps) {
  std::vector<Interval> out;
  out.reserve(f.size());
  for (const auto& v : f) merge_into(out, {v.a - eps, v.b + eps});
  return out;
}

}  // namespace

double LengthTable::enumerated_total() const {
  long double s = 0;
  for (const auto& e : entries) s += static_cast<long double>(e.length) * e.multiplicity;
  return static_cast<double>(s);
}

LengthTable enumerate_lengths(const SelfSimilarStringSpec& spec, double l_min, std::size_t max_entries, Exec exec) {
  if (!(l_min > 0)) throw Error(Errc::precondition, "l_min must be positive");
  Enumerator en;
  for (const auto& r : spec.ratios()) {
    en.w.push_back(r.weight);
    en.rm.push_back(r.multiplicity);
  }
  Quad gmax = 0;
  for (const auto& g : spec.gaps()) {
    en.log_lg.push_back(boost::multiprecision::log(spec.total_length_q() * g.value));
    en.gm.push_back(g.multiplicity);
    gmax = std::max(gmax, g.value);
  }
  en.total_length = spec.total_length();
  en.log_lmin = boost::multiprecision::log(Quad(l_min)) + boost::multiprecision::log1p(Quad(-kEdge));
  en.log_thr = boost::multiprecision::log(spec.total_length_q() * gmax) - en.log_lmin;

  LengthTable table;
  table.l_min = l_min;
  if (en.log_thr < 0) {
    // Even the first gaps are below the cutoff: everything is tail.
    table.tail = spec.total_length();
    return table;
  }

  const int n0_max = static_cast<int>(boost::multiprecision::floor(en.log_thr / en.w[0]));
  std::vector<std::vector<Raw>> parts(static_cast<std::size_t>(n0_max) + 1);
  std::vector<long double> tails(parts.size(), 0.0L);
  std::vector<std::exception_ptr> errors(parts.size());
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int n0 = 0; n0 <= n0_max; ++n0) {
    try {
      std::vector<int> n(en.w.size(), 0);
      n[0] = n0;
      en.walk(n, 1, Quad(n0) * en.w[0], parts[n0], tails[n0], max_entries);
    } catch (...) {
      errors[n0] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  if (total > max_entries) throw Error(Errc::budget_exceeded, "length table exceeds the entry budget");
  std::vector<Raw> all;
  all.reserve(total);
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), [](const Raw& a, const Raw& b) { return a.length > b.length; });
  for (const auto& r : all) {
    if (!table.entries.empty() && table.entries.back().length - r.length <= kBucket * table.entries.back().length) {
      table.entries.back().multiplicity = checked(u128(table.entries.back().multiplicity) + r.mult);
      continue;
    }
    table.entries.push_back({r.length, r.mult});
  }
  long double tail = 0;
  for (auto t : tails) tail += t;
  table.tail = static_cast<double>(tail);
  return table;
}

std::string method_name(TubeMethod m) {
  switch (m) {
    case TubeMethod::direct: return "direct";
    case TubeMethod::explicit_formula: return "explicit";
    case TubeMethod::closed_form: return "closed_form";
    case TubeMethod::lattice_leading: return "lattice_leading";
  }
  return "unknown";
}

TubeVolume volume_direct(const LengthTable& table, double epsilon) {
  if (!(epsilon > 0)) throw Error(Errc::precondition, "epsilon must be positive");
  if (2 * epsilon < table.l_min * (1 - kEdge)) {
    std::ostringstream os;
    os << "2 eps = " << 2 * epsilon << " is below the table cutoff " << table.l_min;
    throw Error(Errc::cutoff_too_coarse, os.str());
  }
  const long double two_eps = 2.0L * epsilon;
  long double big = 0, small = table.tail;
  for (const auto& e : table.entries) {
    if (e.length >= two_eps) big += e.multiplicity;
    else small += static_cast<long double>(e.length) * e.multiplicity;
  }
  const long double v = two_eps * (1 + big) + small;
  TubeVolume out;
  out.epsilon = epsilon;
  out.volume = static_cast<double>(v);
  out.method = TubeMethod::direct;
  out.error_bound = 4 * DBL_EPSILON * out.volume;
  return out;
}

namespace {

struct Pole {
  Complex omega;
  int multiplicity;
  Complex residue;  // simple poles only
};

std::vector<Pole> poles_upper(const SelfSimilarStringSpec& spec, double t_max, const RootFinderOptions& opt) {
  std::vector<Pole> out;
  const auto structure = classify_lattice(spec);
  const bool single_gap_value = numerator_zeros_form(spec).terms().empty();
  if (structure.lattice && single_gap_value) {
    const auto lines = lattice_lines(structure, spec);
    for (const auto& r : lattice_roots(lines, 0.0, t_max)) {
      Complex res{};
      if (r.multiplicity == 1) res = residue_at(spec, r.omega);
      out.push_back({r.omega, r.multiplicity, res});
    }
    return out;
  }
  const auto [left, right] = zero_strip(denominator(spec));
  const Window w{left - 0.05, right + 0.05, 0.0, t_max};
  for (const auto& r : cancellation_reduce(spec, w, opt).roots) {
    if (r.omega.imag() < 0 || r.omega.imag() > t_max) continue;
    out.push_back({r.omega, r.multiplicity, r.residue.value_or(Complex{})});
  }
  return out;
}

// res(zeta(s) (2 eps)^{1-s} / (s (1-s)); omega) by the trapezoid rule on a
// small circle, exact to rounding for an isolated pole.
Complex contour_residue(const SelfSimilarStringSpec& spec, Complex omega, double rho, double two_eps) {
  constexpr int kPoints = 64;
  Complex acc = 0;
  for (int i = 0; i < kPoints; ++i) {
    const Complex e = std::polar(1.0, two_pi * (i + 0.5) / kPoints);
    const Complex s = omega + rho * e;
    const Complex h = eval_zeta(spec, s) * std::pow(Complex(two_eps), 1.0 - s) / (s * (1.0 - s));
    acc += h * e;
  }
  return acc * rho / static_cast<double>(kPoints);
}

}  // namespace

TubeVolume volume_explicit(const SelfSimilarStringSpec& spec, double epsilon, double t_max,
                           const ExplicitOptions& options) {
  if (!(epsilon > 0)) throw Error(Errc::precondition, "epsilon must be positive");
  if (!(t_max > 0)) throw Error(Errc::precondition, "t_max must be positive");
  const auto poles = poles_upper(spec, t_max, options.roots);
  const double two_eps = 2 * epsilon;

  std::vector<double> terms(poles.size(), 0.0);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const auto& p = poles[i];
    Complex t;
    if (p.multiplicity == 1) {
      t = p.residue * std::pow(Complex(two_eps), 1.0 - p.omega) / (p.omega * (1.0 - p.omega));
    } else {
      if (!options.general_multiple_term) {
        std::ostringstream os;
        os << "pole of order " << p.multiplicity << " at " << p.omega;
        throw Error(Errc::multiple_pole_unsupported, os.str());
      }
      double nearest = 1.0;
      for (const auto& q : poles)
        if (&q != &p) nearest = std::min(nearest, std::abs(q.omega - p.omega));
      nearest = std::min(nearest, 2 * std::abs(p.omega.imag()) > 0 ? 2 * std::abs(p.omega.imag()) : 1.0);
      t = contour_residue(spec, p.omega, std::min(1e-3, 0.4 * nearest), two_eps);
    }
    // Conjugate pole contributes the conjugate term.
    terms[i] = p.omega.imag() == 0.0 ? t.real() : 2 * t.real();
  }
  long double sum = 0, upper = 0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    sum += terms[i];
    if (poles[i].omega.imag() > 0.5 * t_max) upper += std::abs(terms[i]);
  }
  sum += two_eps * (1 + zeta_at_zero(spec).value());

  TubeVolume out;
  out.epsilon = epsilon;
  out.volume = static_cast<double>(sum);
  out.method = TubeMethod::explicit_formula;
  out.t_max = t_max;
  // Terms decay like 1/Im^2, so the tail beyond t_max is about the sum over
  // (t_max/2, t_max].
  out.error_bound = static_cast<double>(upper);
  return out;
}

TubeVolume fibonacci_closed_form(double epsilon) {
  if (!(epsilon > 0 && epsilon < 0.5)) throw Error(Errc::precondition, "fibonacci_closed_form needs 0 < eps < 1/2");
  const double phi = std::numbers::phi;
  const double D = std::log2(phi);
  const double x = -std::log2(2 * epsilon);
  const double ix = std::floor(x);
  const double fx = x - ix;
  const double s5 = std::sqrt(5.0);
  const double sign = std::fmod(ix, 2.0) == 0.0 ? 1.0 : -1.0;
  const double a = std::pow(2 * epsilon, 1 - D) / s5 *
                   (std::pow(phi, 3 - fx) + std::pow(phi, 4) * std::pow(phi / 2, -fx));
  const double b = std::pow(2 * epsilon, 1 + D) / s5 * sign *
                   (std::pow(phi, fx - 3) - std::pow(phi, -4) * std::pow(2 * phi, fx));
  TubeVolume out;
  out.epsilon = epsilon;
  out.volume = a + b;
  out.method = TubeMethod::closed_form;
  return out;
}

double lattice_g(double r, double D, double x) {
  const double fx = x - std::floor(x);
  return std::log(1 / r) * (std::pow(r, D * fx) / (1 - std::pow(r, D)) +
                            std::pow(r, (D - 1) * fx) / (std::pow(r, D - 1) - 1));
}

LatticeTube lattice_tube(const SelfSimilarStringSpec& spec, double epsilon, int profile_samples) {
  const auto structure = classify_lattice(spec);
  if (!structure.lattice) throw Error(Errc::not_lattice, "lattice_tube needs a lattice string");
  if (spec.gaps().size() != 1 || spec.gaps()[0].multiplicity != 1)
    throw Error(Errc::multi_gap, "lattice_tube needs a single gap");
  if (std::abs(spec.gaps()[0].g() * spec.total_length() - 1) > 1e-12)
    throw Error(Errc::precondition, "lattice_tube needs g L = 1");
  if (!(epsilon > 0 && epsilon < 0.5)) throw Error(Errc::precondition, "lattice_tube needs 0 < eps < 1/2");

  LatticeTube out;
  out.D = real_dimension(spec);
  out.r = structure.r();
  out.residue = residue_at(spec, {out.D, 0.0}).real();
  const double x = std::log(2 * epsilon) / std::log(out.r);
  out.leading.epsilon = epsilon;
  out.leading.method = TubeMethod::lattice_leading;
  out.leading.volume = out.residue * std::pow(2 * epsilon, 1 - out.D) * lattice_g(out.r, out.D, x);
  for (int i = 0; i < profile_samples; ++i) {
    const double xi = static_cast<double>(i) / profile_samples;
    out.profile.x.push_back(xi);
    out.profile.g.push_back(lattice_g(out.r, out.D, xi));
  }
  return out;
}

double minkowski_content_formula(const SelfSimilarStringSpec& spec) {
  if (classify_lattice(spec).lattice)
    throw Error(Errc::lattice_not_measurable, "lattice strings are not Minkowski measurable");
  const long double D = real_dimension(spec);
  long double num = 0, den = 0;
  for (const auto& g : spec.gaps()) num += g.multiplicity * std::pow(static_cast<long double>(g.g()), D);
  for (const auto& r : spec.ratios())
    den += r.multiplicity * std::pow(static_cast<long double>(r.r()), D) * static_cast<long double>(r.w());
  num *= std::pow(2.0L, 1 - D) * std::pow(static_cast<long double>(spec.total_length()), D);
  den *= D * (1 - D);
  return static_cast<double>(num / den);
}

double minkowski_content_residue(const SelfSimilarStringSpec& spec) {
  const double D = real_dimension(spec);
  return residue_at(spec, {D, 0.0}).real() * std::pow(2.0, 1 - D) / (D * (1 - D));
}

std::vector<double> geometric_ladder(double eps_max, double eps_min, int n) {
  if (!(eps_max > eps_min && eps_min > 0) || n < 2) throw Error(Errc::precondition, "bad ladder bounds");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double q = std::log(eps_min / eps_max) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = eps_max * std::exp(q * i);
  out.back() = eps_min;
  return out;
}

ContentEstimate minkowski_content_empirical(const SelfSimilarStringSpec& spec, const std::vector<double>& ladder,
                                            Exec exec) {
  if (ladder.size() < 8) throw Error(Errc::precondition, "the epsilon ladder needs at least 8 points");
  ContentEstimate out;
  out.epsilons = ladder;
  std::sort(out.epsilons.begin(), out.epsilons.end(), std::greater<>());
  const double eps_min = out.epsilons.back(), eps_max = out.epsilons.front();
  const auto table = enumerate_lengths(spec, 2 * eps_min, 10'000'000, exec);
  const double D = real_dimension(spec);

  auto run = [&](const std::vector<double>& eps, std::vector<double>& vol, std::vector<double>& norm) {
    vol.assign(eps.size(), 0.0);
    norm.assign(eps.size(), 0.0);
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < eps.size(); ++i) {
      vol[i] = volume_direct(table, eps[i]).volume;
      norm[i] = std::pow(eps[i], D - 1) * vol[i];
    }
  };
  run(out.epsilons, out.volumes, out.normalized);
  out.D_est = regression_dimension(out.epsilons, out.volumes);

  const auto last = std::vector<double>(out.normalized.end() - 4, out.normalized.end());
  const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
  const double mean = std::accumulate(last.begin(), last.end(), 0.0) / 4.0;
  if ((*hi - *lo) / mean < 0.01) {
    out.M_est = mean;
    return out;
  }
  constexpr int kDense = 400;
  const auto dense = geometric_ladder(eps_max, eps_min, kDense);
  std::vector<double> dv, dn;
  run(dense, dv, dn);
  Oscillation osc;
  osc.min = *std::min_element(dn.begin(), dn.end());
  osc.max = *std::max_element(dn.begin(), dn.end());
  osc.period = period_by_lag(dn, std::log(eps_max / eps_min) / (kDense - 1));
  out.oscillation = osc;
  return out;
}

std::vector<Interval> prefractal(const SelfSimilarStringSpec& spec, int depth) {
  if (depth < 0) throw Error(Errc::precondition, "depth must be >= 0");
  const auto ratios = spec.expanded_ratios();
  const auto gaps = spec.expanded_gaps();
  const double n = static_cast<double>(ratios.size());
  if (std::pow(n, depth) > 5e7) throw Error(Errc::budget_exceeded, "prefractal has too many intervals");

  // Offsets of each copy inside the unit initiator.
  std::vector<double> offset(ratios.size());
  double pos = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    offset[i] = pos;
    pos += ratios[i];
    if (i < gaps.size()) pos += gaps[i];
  }
  for (std::size_t i = ratios.size(); i < gaps.size(); ++i) pos += gaps[i];

  std::vector<Interval> cur{{0.0, spec.total_length()}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    next.reserve(cur.size() * ratios.size());
    for (const auto& v : cur) {
      const double len = v.b - v.a;
      for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double a = v.a + offset[i] * len;
        next.push_back({a, a + ratios[i] * len});
      }
    }
    cur = std::move(next);
  }
  return cur;
}

int default_depth(const SelfSimilarStringSpec& spec, double epsilon) {
  const double rmax = spec.ratios()[0].r();
  const double d = std::log(epsilon / (10 * spec.total_length())) / std::log(rmax);
  return std::max(0, static_cast<int>(std::floor(d)) + 1);
}

double union_measure(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.a < b.a; });
  std::vector<Interval> merged;
  for (const auto& v : intervals) merge_into(merged, v);
  long double s = 0;
  for (const auto& v : merged) s += v.b - v.a;
  return static_cast<double>(s);
}

double overlap_measure(const SelfSimilarStringSpec& spec, int depth, double epsilon, double x) {
  if (!(epsilon >= 0)) throw Error(Errc::precondition, "epsilon must be >= 0");
  if (depth < 0) depth = default_depth(spec, std::max(epsilon, 1e-300));
  auto f = prefractal(spec, depth);
  std::sort(f.begin(), f.end(), [](const Interval& a, const Interval& b) { return a.a < b.a; });
  const auto a = inflate(f, epsilon);
  // Two pointers over the sorted, disjoint lists A and A + x.
  long double s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < a.size()) {
    const double lo = std::max(a[i].a, a[j].a + x);
    const double hi = std::min(a[i].b, a[j].b + x);
    if (hi > lo) s += hi - lo;
    if (a[i].b < a[j].b + x) ++i;
    else ++j;
  }
  return static_cast<double>(s);
}

OverlapResult overlap_dimension_and_content(const SelfSimilarStringSpec& spec, double x,
                                            const std::vector<double>& ladder, int depth, Exec exec) {
  if (ladder.size() < 2) throw Error(Errc::precondition, "the epsilon ladder needs at least 2 points");
  OverlapResult out;
  out.epsilons = ladder;
  std::sort(out.epsilons.begin(), out.epsilons.end(), std::greater<>());
  out.values.assign(out.epsilons.size(), 0.0);
  std::vector<std::exception_ptr> errors(out.epsilons.size());
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (std::size_t i = 0; i < out.epsilons.size(); ++i) {
    try {
      out.values[i] = overlap_measure(spec, depth, out.epsilons[i], x);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (std::all_of(out.values.begin(), out.values.end(), [](double v) { return v <= 0; })) {
    out.degenerate = true;
    return out;
  }
  out.D = regression_dimension(out.epsilons, out.values);
  const std::size_t half = out.epsilons.size() / 2;
  for (std::size_t i = half; i < out.epsilons.size(); ++i)
    out.M_star = std::max(out.M_star, out.values[i] * std::pow(out.epsilons[i], out.D - 1));
  return out;
}

}  // namespace cxdim
