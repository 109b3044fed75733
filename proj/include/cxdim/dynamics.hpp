#pragma once

#include "cxdim/numeric.hpp"
#include "cxdim/roots.hpp"
#include "cxdim/string_spec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cxdim {

/// Suspended flow over the full N-shift whose return time depends on the
/// first letter only. Letters are numbered 1..N by increasing weight.
class FlowSpec {
 public:
  /// Throws InvalidSpec unless N >= 2, every weight is positive and
  /// sum e^{-w_j} < 1.
  explicit FlowSpec(std::vector<Quad> weights);

  /// Weights log(1/r_j) of a one-gap self-similar string.
  static FlowSpec from_string(const SelfSimilarStringSpec& spec);

  int letters() const { return static_cast<int>(weights_.size()); }
  const std::vector<Quad>& weights() const { return weights_; }
  double weight(int letter) const { return static_cast<double>(weights_[static_cast<std::size_t>(letter)]); }
  double min_weight() const { return weight(0); }

  /// One-gap string with ratios e^{-w_j}, g = 1 - sum r_j and L = 1/g.
  SelfSimilarStringSpec derived_string() const;
  /// Root of sum e^{-w_j D} = 1.
  double dimension() const;

 private:
  std::vector<Quad> weights_;
};

struct Orbit {
  std::vector<std::uint8_t> word;  // letters 0..N-1, Lyndon representative
  double total_weight = 0;

  int length() const { return static_cast<int>(word.size()); }
  /// Letters printed 1-based; separated by '.' once N > 9.
  std::string word_string(int letters) const;
};

struct OrbitTable {
  std::vector<Orbit> orbits;  // lexicographic
  int max_word_length = 0;
};

/// Every primitive orbit of word length <= max_len. Throws BudgetExceeded
/// when sum_{l <= max_len} N^l exceeds max_words.
OrbitTable primitive_orbits(const FlowSpec& flow, int max_len, double max_words = 1e8, Exec exec = Exec::parallel);

/// (1/l) sum_{d | l} mu(d) N^{l/d}.
std::uint64_t necklace_count(int letters, int length);

/// sum over primitive p and k >= 1 with k w(p) <= log x of w(p). Throws
/// TruncationUnsound if max_len * min weight < log x.
double psi_w(const FlowSpec& flow, double x, int max_len, Exec exec = Exec::parallel);

struct EulerSum {
  Complex value;
  double tail_bound = 0;  // |omitted orbits| <= (-R'(sigma)) R(sigma)^L / (1 - R(sigma))
};

/// sum over primitive p of length <= max_len of sum_k w(p) e^{-k w(p) s}.
/// Throws DivergentRegion if Re s <= D.
EulerSum euler_log_derivative(const FlowSpec& flow, Complex s, int max_len, Exec exec = Exec::parallel);

/// -R'(s)/(1 - R(s)) with R = sum e^{-w_j s}: -zeta'/zeta of the derived
/// string in closed form.
Complex log_derivative_closed_form(const FlowSpec& flow, Complex s);

struct PrimeOrbitRow {
  double x = 0;
  double psi = 0;
  double ratio = 0;  // psi D / x^D
};

struct PrimeOrbitReport {
  std::vector<PrimeOrbitRow> rows;
  bool oscillatory = false;      // lattice flow
  double trend_slope = 0;        // slope of |ratio - 1| against log x
  double error_exponent = 0;     // gamma in |ratio - 1| ~ C (log x)^{-gamma}
};

PrimeOrbitReport prime_orbit_check(const FlowSpec& flow, const std::vector<double>& x_grid,
                                   Exec exec = Exec::parallel);

/// Poles of -zeta_w'/zeta_w in the window: the zeros of 1 - sum e^{-w_j s},
/// each listed once.
std::vector<Complex> dynamical_dimensions(const FlowSpec& flow, const Window& window);

}  // namespace cxdim
