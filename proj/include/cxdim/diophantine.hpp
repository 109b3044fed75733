#pragma once

#include "cxdim/numeric.hpp"
#include "cxdim/string_spec.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace cxdim {

/// Continued fraction [a0; a1, a2, ...] of alpha and its convergents
/// p_n/q_n for n = 1, 2, ... (the trivial a0/1 is left out unless the
/// expansion stops there). Approximation stage n is convergents[n - 1], so
/// for sqrt 2 stage 1 is 3/2.
struct ContinuedFraction {
  Quad alpha{0};
  std::vector<std::int64_t> partial_quotients;
  std::vector<std::pair<std::int64_t, std::int64_t>> convergents;  // (p_n, q_n)
  bool terminated = false;  // alpha was rational and the expansion ended
};

/// Partial quotients a_0..a_n and convergents 1..n, computed in float128.
/// Throws PrecisionExhausted once q_n^2 exceeds 1e30 (the quotients past that
/// point are no longer determined by 34 significant digits).
ContinuedFraction continued_fraction(const Quad& alpha, int n_terms);

/// min over 1 <= q <= q_max of q |q alpha - round(q alpha)|.
double badly_approximable_constant(const Quad& alpha, std::int64_t q_max, Exec exec = Exec::parallel);

/// Record denominators q (record 0 is q = 1) of the simultaneous
/// approximation max_j dist(q * ratio_j, Z) over q <= q_max.
std::vector<std::int64_t> simultaneous_records(const std::vector<Quad>& ratios, std::int64_t q_max,
                                               Exec exec = Exec::parallel);

struct LatticeApproximation {
  int stage = 0;
  std::int64_t q = 0;                           // k_1 before gcd normalisation
  Quad base{0};                                 // r
  Quad base_weight{0};                          // log(1/r)
  std::vector<std::pair<int, int>> exponents;   // (k_j, multiplicity) per distinct ratio
  double period = 0;                            // 2 pi / log(1/r)
  double max_ratio_error = 0;                   // max_j |r^{k_j} - r_j| / r_j
  SelfSimilarStringSpec approximant;            // lattice string, gaps rescaled
};

/// Stage n lattice approximation of a nonlattice string. Two distinct ratios
/// use convergent n of alpha = w_2/w_1; more use record n of the simultaneous
/// scan (q_max bounds the scan).
LatticeApproximation lattice_approximation(const SelfSimilarStringSpec& spec, int stage,
                                           std::int64_t q_max = 10000, Exec exec = Exec::parallel);

struct PerturbationResult {
  Complex approx;    // three-term expansion around D + i k p
  Complex refined;   // Newton from approx on the denominator
  Complex x;         // 2 pi i (k alpha - l)
  double error = 0;  // |approx - refined|
};

/// Expansion of the zero near D + i k p for N = 2 nonlattice strings.
/// Throws NewtonDiverged when Newton leaves the disk of radius p/4.
PerturbationResult perturbation_root(const SelfSimilarStringSpec& spec, int k);

}  // namespace cxdim
