#pragma once

#include "cxdim/numeric.hpp"
#include "cxdim/roots.hpp"
#include "cxdim/string_spec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cxdim {

struct LengthEntry {
  double length = 0;
  std::uint64_t multiplicity = 0;
};

/// Lengths >= l_min, strictly decreasing. tail is the sum of every omitted
/// length (computed in closed form from the pruned frontier, so the
/// enumerated total plus tail is the whole string length L).
struct LengthTable {
  std::vector<LengthEntry> entries;
  double l_min = 0;
  double tail = 0;

  double enumerated_total() const;
};

/// Count-vector expansion: a word with n_j copies of ratio j contributes
/// multinomial(n) prod m_j^{n_j} lengths L g_k prod r_j^{n_j}. Lengths equal
/// within 1e-12 relative are merged. Throws BudgetExceeded past max_entries.
LengthTable enumerate_lengths(const SelfSimilarStringSpec& spec, double l_min,
                              std::size_t max_entries = 10'000'000, Exec exec = Exec::parallel);

enum class TubeMethod { direct, explicit_formula, closed_form, lattice_leading };

struct TubeVolume {
  double epsilon = 0;
  double volume = 0;
  TubeMethod method = TubeMethod::direct;
  double t_max = 0;        // explicit only
  double error_bound = 0;  // rounding (direct) or truncation estimate (explicit)
};

std::string method_name(TubeMethod m);

/// V(eps) = 2 eps + sum_{l >= 2 eps} 2 eps + sum_{l < 2 eps} l, the last sum
/// including the table's tail. Throws CutoffTooCoarse when 2 eps < l_min.
TubeVolume volume_direct(const LengthTable& table, double epsilon);

struct ExplicitOptions {
  bool general_multiple_term = true;  // residues at multiple poles by contour integral
  RootFinderOptions roots{};
};

/// Poles of zeta with |Im| <= t_max summed as
/// res(zeta(s)(2 eps)^{1-s}/(s(1-s)); omega), conjugates paired so the
/// result is real, plus 2 eps (1 + zeta(0)).
TubeVolume volume_explicit(const SelfSimilarStringSpec& spec, double epsilon, double t_max,
                           const ExplicitOptions& options = {});

/// Closed form for the Fibonacci string (L = 4, ratios 1/2 and 1/4).
TubeVolume fibonacci_closed_form(double epsilon);

struct GProfile {
  std::vector<double> x;  // samples of [0, 1)
  std::vector<double> g;
};

struct LatticeTube {
  TubeVolume leading;  // res(zeta; D) (2 eps)^{1-D} G(log_r(2 eps))
  double residue = 0;
  double D = 0;
  double r = 0;
  GProfile profile;
};

/// G(x) = log(1/r) (r^{D{x}}/(1 - r^D) + r^{(D-1){x}}/(r^{D-1} - 1)).
double lattice_g(double r, double D, double x);

/// Leading lattice term for a one-gap lattice string with g L = 1.
/// Throws NotLattice, MultiGap, or PreconditionViolated (g L != 1 or eps out
/// of range).
LatticeTube lattice_tube(const SelfSimilarStringSpec& spec, double epsilon, int profile_samples = 256);

/// 2^{1-D} L^D sum m_k g_k^D / (D (1-D) sum m_j r_j^D log(1/r_j)).
/// Throws LatticeNotMeasurable for lattice strings.
double minkowski_content_formula(const SelfSimilarStringSpec& spec);

/// res(zeta; D) 2^{1-D} / (D (1-D)); defined for every string.
double minkowski_content_residue(const SelfSimilarStringSpec& spec);

struct Oscillation {
  double min = 0;
  double max = 0;
  double period = 0;  // in log eps
};

struct ContentEstimate {
  double D_est = 0;
  std::vector<double> epsilons;
  std::vector<double> volumes;
  std::vector<double> normalized;  // eps^{D-1} V(eps) with the exact D
  std::optional<double> M_est;
  std::optional<Oscillation> oscillation;
};

/// D from the log-log slope of V over the ladder; M as the mean of
/// eps^{D-1} V over the last four points when they spread by < 1%, else an
/// oscillation report measured on a dense ladder over the same range.
ContentEstimate minkowski_content_empirical(const SelfSimilarStringSpec& spec, const std::vector<double>& ladder,
                                            Exec exec = Exec::parallel);

/// eps_max, eps_max q, ..., n points.
std::vector<double> geometric_ladder(double eps_max, double eps_min, int n);

struct Interval {
  double a = 0;
  double b = 0;
};

/// Depth-d prefractal: closed intervals left after d replacement steps.
/// Copies and gaps alternate left to right; leftover copies go at the end.
std::vector<Interval> prefractal(const SelfSimilarStringSpec& spec, int depth);

/// Smallest d with r_max^d L < eps / 10.
int default_depth(const SelfSimilarStringSpec& spec, double epsilon);

/// Lebesgue measure of a finite union of intervals.
double union_measure(std::vector<Interval> intervals);

/// |(F_d + [-eps, eps]) cap (F_d + [-eps, eps] + x)|, by a sweep over sorted
/// endpoints. depth < 0 picks default_depth.
double overlap_measure(const SelfSimilarStringSpec& spec, int depth, double epsilon, double x);

struct OverlapResult {
  double D = 0;
  double M_star = 0;
  bool degenerate = false;  // f vanished at every ladder point
  std::vector<double> epsilons;
  std::vector<double> values;
};

/// D(x) = 1 - log-log slope of f(eps, x); M*(x) = max over the last half of
/// the ladder of f eps^{D(x)-1}. depth < 0 picks default_depth per point.
OverlapResult overlap_dimension_and_content(const SelfSimilarStringSpec& spec, double x,
                                            const std::vector<double>& ladder, int depth = -1,
                                            Exec exec = Exec::parallel);

}  // namespace cxdim
