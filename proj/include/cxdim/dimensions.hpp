#pragma once

#include "cxdim/dirichlet.hpp"
#include "cxdim/roots.hpp"
#include "cxdim/string_spec.hpp"

#include <optional>
#include <vector>

namespace cxdim {

/// Unique real sigma with sum m_j r_j^sigma = 1.
double real_dimension(const SelfSimilarStringSpec& spec);

/// Zeros of the denominator in the window, with residues of zeta at the
/// simple ones.
DimensionWindow find_roots(const SelfSimilarStringSpec& spec, const Window& window,
                           const RootFinderOptions& options = {});

/// numerator(omega) / f'(omega). Throws MultiplePole if |f'(omega)| < 1e-10.
Complex residue_at(const SelfSimilarStringSpec& spec, Complex omega);

/// Poles of zeta itself: denominator zeros net of numerator zeros at the same
/// point (within 1e-9). Each surviving pole is confirmed by the winding of
/// zeta around a small square, which must equal minus its net multiplicity.
DimensionWindow cancellation_reduce(const SelfSimilarStringSpec& spec, const Window& window,
                                    const RootFinderOptions& options = {});

struct LatticeStructure {
  bool lattice = false;
  // lattice
  Quad base{0};
  Quad base_weight{0};
  std::vector<std::pair<int, int>> exponents;  // (k_j, multiplicity), increasing k
  double period = 0;
  // nonlattice
  int rank = 0;
  bool generic = false;
  // search parameters the answer is relative to
  int q_max = 0;
  double tol = 0;
  int relation_bound = 0;  // coefficient bound reached by the rank search

  double r() const { return static_cast<double>(base); }
};

LatticeStructure classify_lattice(const SelfSimilarStringSpec& spec, int q_max = 512, double tol = 1e-9,
                                  Exec exec = Exec::parallel);

struct LatticeLine {
  Complex omega;  // representative with Im in [0, period)
  int multiplicity = 1;
};

struct LatticeLines {
  double period = 0;
  std::vector<LatticeLine> lines;  // line through D first, rest by (Re, Im)
  bool fallback = false;           // eigen-solve failed, roots came from subdivision
};

/// Solves sum m_j z^{k_j} = 1 by companion-matrix eigenvalues and maps
/// z = r^omega back. Falls back to the subdivision root finder over one
/// period if the polished residual stays above 1e-9.
LatticeLines lattice_lines(const LatticeStructure& structure, const SelfSimilarStringSpec& spec);

/// Expands line representatives to every zero with t_min <= Im <= t_max.
std::vector<ComplexDimension> lattice_roots(const LatticeLines& lines, double t_min, double t_max);

struct StairStep {
  double x = 0;
  int count = 0;
};

/// Sorted real parts with running count (multiplicities expanded).
std::vector<StairStep> real_parts_density(const std::vector<ComplexDimension>& roots);

struct SigmaL {
  double value = 0;
  bool empirical = false;
};

/// Left edge of the strip of complex dimensions. Generic nonlattice strings
/// solve m_N r_N^sigma = 1 + sum_{r_j != r_N} m_j r_j^sigma; other nonlattice
/// strings report min Re over zeros with 0 <= Im <= t_max.
SigmaL sigma_l(const SelfSimilarStringSpec& spec, double t_max = 2000.0);

struct DimensionFreeRegion {
  double D = 0;
  int N = 0;
  double exponent = 0;  // 2 / (N - 1)
  double constant = 0;  // C_b C_cf^2 for N = 2, fitted C otherwise
  bool fitted = false;

  double bound(double t) const { return D - constant * std::pow(std::abs(t), -exponent); }
};

/// N = 2: D - C_b C_cf^2 t^-2 with C_b = pi^4 (r1 r2)^D / (2 f'(D)^3).
/// If c_cf is absent it is the badly-approximable constant of
/// alpha = w_2/w_1 over q <= 10^4.
DimensionFreeRegion dimension_free_region_two(const SelfSimilarStringSpec& spec,
                                              std::optional<double> c_cf = std::nullopt);

/// N > 2: C is the 1st percentile of max(0, D - Re w) (Im w)^{2/(N-1)} over
/// zeros with Im in [10, 1000].
DimensionFreeRegion fit_dimension_free_region(const SelfSimilarStringSpec& spec,
                                              const std::vector<ComplexDimension>& roots);

/// sigma bound at height t. N > 2 needs a fitted region (UnknownConstant
/// otherwise).
double dimension_free_region(const SelfSimilarStringSpec& spec, double t,
                             const std::optional<DimensionFreeRegion>& fit = std::nullopt);

}  // namespace cxdim
