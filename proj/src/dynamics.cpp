#include "cxdim/dynamics.hpp"

#include "cxdim/dimensions.hpp"
#include "cxdim/dirichlet.hpp"
#include "cxdim/errors.hpp"
#include "cxdim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cxdim {
namespace {

constexpr double kHit = 1e-12;

// Recursive FKM generation of Lyndon words with a fixed first letter. A node
// a[1..t-1] is a prenecklace whose longest Lyndon prefix has length p; it is
// itself a Lyndon word when p = t - 1. Letters are sorted by weight, so the
// letter loop stops at the first extension that breaks the weight bound.
template <class Visit>
class LyndonWalk {
 public:
  LyndonWalk(const std::vector<double>& w, int n, double bound, Visit& visit)
      : w_(w), n_(n), bound_(bound), visit_(visit), a_(static_cast<std::size_t>(n) + 1, 0) {}

  void run(int first) {
    const double w0 = w_[static_cast<std::size_t>(first)];
    if (w0 > bound_ || n_ < 1) return;
    a_[1] = static_cast<std::uint8_t>(first);
    gen(2, 1, w0);
  }

 private:
  void gen(int t, int p, double weight) {
    if (p == t - 1) visit_(a_.data() + 1, t - 1, weight);
    if (t > n_) return;
    const int j0 = a_[static_cast<std::size_t>(t - p)];
    const int k = static_cast<int>(w_.size());
    for (int j = j0; j < k; ++j) {
      const double wj = weight + w_[static_cast<std::size_t>(j)];
      if (wj > bound_) break;
      a_[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(j);
      gen(t + 1, j == j0 ? p : t, wj);
    }
  }

  const std::vector<double>& w_;
  int n_;
  double bound_;
  Visit& visit_;
  std::vector<std::uint8_t> a_;
};

template <class Visit>
void walk_lyndon(const std::vector<double>& w, int n, double bound, int first, Visit& visit) {
  LyndonWalk<Visit> walker(w, n, bound, visit);
  walker.run(first);
}

std::vector<double> double_weights(const FlowSpec& flow) {
  std::vector<double> w;
  for (const auto& q : flow.weights()) w.push_back(static_cast<double>(q));
  return w;
}

// Weights of all primitive orbits with weight <= bound, sorted.
std::vector<double> orbit_weights(const FlowSpec& flow, double bound, int max_len, Exec exec) {
  const auto w = double_weights(flow);
  const int k = flow.letters();
  std::vector<std::vector<double>> parts(static_cast<std::size_t>(k));
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int c = 0; c < k; ++c) {
    auto& out = parts[static_cast<std::size_t>(c)];
    auto visit = [&](const std::uint8_t*, int, double weight) { out.push_back(weight); };
    walk_lyndon(w, max_len, bound, c, visit);
  }
  std::vector<double> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end());
  return all;
}

double psi_from_weights(const std::vector<double>& weights, double log_x) {
  long double s = 0;
  for (double wp : weights) {
    if (wp > log_x * (1 + kHit)) break;
    s += wp * std::floor(log_x / wp * (1 + kHit));
  }
  return static_cast<double>(s);
}

int mobius(int n) {
  int m = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  return n > 1 ? -m : m;
}

}  // namespace

FlowSpec::FlowSpec(std::vector<Quad> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw Error(Errc::invalid_spec, "a flow needs at least two letters");
  if (weights_.size() > 255) throw Error(Errc::invalid_spec, "a flow has at most 255 letters");
  Quad s = 0;
  for (const auto& w : weights_) {
    if (!(w > 0)) throw Error(Errc::invalid_spec, "flow weights must be positive");
    s += boost::multiprecision::exp(-w);
  }
  if (!(s < 1)) throw Error(Errc::invalid_spec, "flow needs sum e^{-w_j} < 1");
  std::sort(weights_.begin(), weights_.end());
}

FlowSpec FlowSpec::from_string(const SelfSimilarStringSpec& spec) {
  if (spec.gap_count() != 1) throw Error(Errc::multi_gap, "flows correspond to one-gap strings");
  std::vector<Quad> w;
  for (const auto& r : spec.ratios())
    for (int i = 0; i < r.multiplicity; ++i) w.push_back(r.weight);
  return FlowSpec(std::move(w));
}

SelfSimilarStringSpec FlowSpec::derived_string() const {
  std::vector<ScalingRatio> ratios;
  Quad s = 0;
  for (const auto& w : weights_) {
    ratios.push_back(ScalingRatio::from_weight(w, 1));
    s += ratios.back().value;
  }
  const Quad g = 1 - s;
  return SelfSimilarStringSpec(1 / g, std::move(ratios), {Gap{g, 1, {}}});
}

double FlowSpec::dimension() const { return real_dimension(derived_string()); }

std::string Orbit::word_string(int letters) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (letters > 9 && i > 0) os << '.';
    os << static_cast<int>(word[i]) + 1;
  }
  return os.str();
}

std::uint64_t necklace_count(int letters, int length) {
  if (length < 1) return 0;
  long double s = 0;
  for (int d = 1; d <= length; ++d) {
    if (length % d) continue;
    s += mobius(d) * std::pow(static_cast<long double>(letters), length / d);
  }
  return static_cast<std::uint64_t>(std::llround(s / length));
}

OrbitTable primitive_orbits(const FlowSpec& flow, int max_len, double max_words, Exec exec) {
  if (max_len < 1) throw Error(Errc::precondition, "max_len must be >= 1");
  double words = 0;
  for (int l = 1; l <= max_len; ++l) words += std::pow(static_cast<double>(flow.letters()), l);
  if (words > max_words) throw Error(Errc::budget_exceeded, "orbit enumeration exceeds the word budget");

  const auto w = double_weights(flow);
  const int k = flow.letters();
  std::vector<std::vector<Orbit>> parts(static_cast<std::size_t>(k));
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int c = 0; c < k; ++c) {
    auto& out = parts[static_cast<std::size_t>(c)];
    auto visit = [&](const std::uint8_t* a, int len, double weight) {
      out.push_back({std::vector<std::uint8_t>(a, a + len), weight});
    };
    walk_lyndon(w, max_len, std::numeric_limits<double>::infinity(), c, visit);
  }
  OrbitTable table;
  table.max_word_length = max_len;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(table.orbits));
  // Recompute weights in long double, letter by letter.
  for (auto& o : table.orbits) {
    long double s = 0;
    for (auto letter : o.word) s += static_cast<long double>(flow.weights()[letter]);
    o.total_weight = static_cast<double>(s);
  }
  return table;
}

double psi_w(const FlowSpec& flow, double x, int max_len, Exec exec) {
  if (x < 1) return 0.0;
  const double log_x = std::log(x);
  if (max_len * flow.min_weight() < log_x * (1 - kHit)) {
    std::ostringstream os;
    os << "max_len " << max_len << " misses orbits of weight up to log x = " << log_x;
    throw Error(Errc::truncation_unsound, os.str());
  }
  return psi_from_weights(orbit_weights(flow, log_x * (1 + kHit), max_len, exec), log_x);
}

Complex log_derivative_closed_form(const FlowSpec& flow, Complex s) {
  Complex r = 0, rp = 0;
  for (const auto& q : flow.weights()) {
    const double w = static_cast<double>(q);
    const Complex e = std::exp(-w * s);
    r += e;
    rp -= w * e;
  }
  return -rp / (1.0 - r);
}

EulerSum euler_log_derivative(const FlowSpec& flow, Complex s, int max_len, Exec exec) {
  if (max_len < 2) throw Error(Errc::precondition, "max_len must be >= 2");
  const double D = flow.dimension();
  if (!(s.real() > D)) throw Error(Errc::divergent_region, "the Euler product converges only for Re s > D");

  const auto w = double_weights(flow);
  const int k = flow.letters();
  std::vector<Complex> parts(static_cast<std::size_t>(k));
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic) if (par)
  for (int c = 0; c < k; ++c) {
    // Millions of small terms: accumulate in long double.
    std::complex<long double> acc = 0;
    auto visit = [&](const std::uint8_t*, int, double wp) {
      const Complex e = std::exp(-wp * s);
      acc += std::complex<long double>(wp * e / (1.0 - e));
    };
    walk_lyndon(w, max_len, std::numeric_limits<double>::infinity(), c, visit);
    parts[static_cast<std::size_t>(c)] = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  }
  EulerSum out;
  for (const auto& p : parts) out.value += p;

  double r = 0, rp = 0;
  for (double wj : w) {
    r += std::exp(-wj * s.real());
    rp += wj * std::exp(-wj * s.real());
  }
  out.tail_bound = rp * std::pow(r, max_len) / (1 - r);
  return out;
}

PrimeOrbitReport prime_orbit_check(const FlowSpec& flow, const std::vector<double>& x_grid, Exec exec) {
  PrimeOrbitReport out;
  if (x_grid.empty()) return out;
  const double x_max = *std::max_element(x_grid.begin(), x_grid.end());
  const double log_max = std::log(std::max(x_max, 1.0));
  const int max_len = static_cast<int>(std::ceil(log_max / flow.min_weight() * (1 + kHit))) + 1;
  const auto weights = orbit_weights(flow, log_max * (1 + kHit), max_len, exec);
  const double D = flow.dimension();
  out.oscillatory = classify_lattice(flow.derived_string()).lattice;

  std::vector<double> lx, err, llx, lerr;
  for (double x : x_grid) {
    PrimeOrbitRow row;
    row.x = x;
    row.psi = x < 1 ? 0.0 : psi_from_weights(weights, std::log(x));
    row.ratio = row.psi * D / std::pow(x, D);
    out.rows.push_back(row);
    if (x > 1) {
      const double e = std::abs(row.ratio - 1);
      lx.push_back(std::log(x));
      err.push_back(e);
      if (e > 0) {
        llx.push_back(std::log(std::log(x)));
        lerr.push_back(std::log(e));
      }
    }
  }
  if (lx.size() >= 2) out.trend_slope = fit_line(lx, err).slope;
  if (llx.size() >= 2) out.error_exponent = -fit_line(llx, lerr).slope;
  return out;
}

std::vector<Complex> dynamical_dimensions(const FlowSpec& flow, const Window& window) {
  std::vector<Complex> out;
  for (const auto& r : find_polynomial_roots(denominator(flow.derived_string()), window).roots)
    out.push_back(r.omega);
  return out;
}

}  // namespace cxdim
