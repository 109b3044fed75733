#include "cxdim/reference.hpp"

#include "cxdim/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <deque>
#include <limits>

namespace cxdim::reference {

std::map<double, std::uint64_t, std::greater<>> word_lengths(const SelfSimilarStringSpec& spec, double l_min) {
  const auto ratios = spec.expanded_ratios();
  const auto gaps = spec.expanded_gaps();
  const double L = spec.total_length();
  const double gmax = *std::max_element(gaps.begin(), gaps.end());
  std::map<double, std::uint64_t, std::greater<>> out;
  std::deque<double> queue{1.0};
  while (!queue.empty()) {
    const double p = queue.front();
    queue.pop_front();
    for (double g : gaps) {
      const double len = L * g * p;
      if (len < l_min * (1 - 1e-12)) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", len);
      ++out[std::strtod(buf, nullptr)];
    }
    for (double r : ratios)
      if (L * gmax * p * r >= l_min * (1 - 1e-12)) queue.push_back(p * r);
  }
  return out;
}

double winding_trapezoid(const DirichletPolynomial& f, const Window& w, int n) {
  const Complex corners[5] = {{w.sigma_min, w.t_min}, {w.sigma_max, w.t_min}, {w.sigma_max, w.t_max},
                              {w.sigma_min, w.t_max}, {w.sigma_min, w.t_min}};
  Complex total = 0;
  for (int side = 0; side < 4; ++side) {
    const Complex a = corners[side], b = corners[side + 1];
    const Complex h = (b - a) / static_cast<double>(n);
    for (int i = 0; i <= n; ++i) {
      const Complex z = a + h * static_cast<double>(i);
      const Complex v = f.derivative(z, 1) / f.eval(z);
      total += (i == 0 || i == n ? 0.5 : 1.0) * v * h;
    }
  }
  return (total / Complex(0.0, two_pi)).real();
}

double tube_volume_union(const SelfSimilarStringSpec& spec, double epsilon) {
  const double rmax = spec.ratios()[0].r();
  int depth = 0;
  while (spec.total_length() * std::pow(rmax, depth) > 2 * epsilon) ++depth;
  std::vector<Interval> iv;
  for (const auto& v : prefractal(spec, depth)) iv.push_back({v.a - epsilon, v.b + epsilon});
  return union_measure(std::move(iv));
}

double overlap_by_union(const SelfSimilarStringSpec& spec, int depth, double epsilon, double x) {
  std::vector<Interval> a, b, both;
  for (const auto& v : prefractal(spec, depth)) {
    a.push_back({v.a - epsilon, v.b + epsilon});
    b.push_back({v.a - epsilon + x, v.b + epsilon + x});
  }
  both = a;
  both.insert(both.end(), b.begin(), b.end());
  return union_measure(a) + union_measure(b) - union_measure(both);
}

std::vector<std::vector<std::uint8_t>> lyndon_brute(int letters, int length) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<std::uint8_t> w(static_cast<std::size_t>(length), 0);
  const double total = std::pow(letters, length);
  for (double idx = 0; idx < total; ++idx) {
    double rest = idx;
    for (int i = length - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(std::fmod(rest, letters));
      rest = std::floor(rest / letters);
    }
    bool lyndon = true;
    for (int s = 1; s < length && lyndon; ++s) {
      std::vector<std::uint8_t> rot(w.begin() + s, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + s);
      if (!(w < rot)) lyndon = false;
    }
    if (lyndon) out.push_back(w);
  }
  return out;
}

double psi_words(const FlowSpec& flow, double x) {
  if (x < 1) return 0.0;
  const double log_x = std::log(x) * (1 + 1e-12);
  long double s = 0;
  // Depth-first over all words whose weight stays <= log x.
  struct Frame {
    double weight;
    int length;
  };
  std::vector<Frame> stack{{0.0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.length > 0) s += f.weight / f.length;
    for (int j = 0; j < flow.letters(); ++j) {
      const double w = f.weight + flow.weight(j);
      if (w <= log_x) stack.push_back({w, f.length + 1});
    }
  }
  return static_cast<double>(s);
}

double badly_approximable_serial(long double alpha, long q_max) {
  long double best = std::numeric_limits<long double>::infinity();
  for (long q = 1; q <= q_max; ++q) {
    const long double v = q * alpha;
    best = std::min(best, q * std::fabs(v - std::round(v)));
  }
  return static_cast<double>(best);
}

}  // namespace cxdim::reference
