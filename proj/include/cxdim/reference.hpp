#pragma once

// Deliberately naive single-threaded routes used as oracles by the tests and
// as baselines by the benchmark. None of them shares code with the kernels
// they check.

#include "cxdim/dirichlet.hpp"
#include "cxdim/dynamics.hpp"
#include "cxdim/roots.hpp"
#include "cxdim/string_spec.hpp"
#include "cxdim/tube.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace cxdim::reference {

/// Breadth-first expansion over individual words (one queue entry per word),
/// lengths keyed after rounding to 12 significant digits.
std::map<double, std::uint64_t, std::greater<>> word_lengths(const SelfSimilarStringSpec& spec, double l_min);

/// Winding number as (1/2 pi i) of the contour integral of f'/f, trapezoid
/// rule with n points per side.
double winding_trapezoid(const DirichletPolynomial& f, const Window& w, int n);

/// |F + [-eps, eps]| for the limit set F, from the prefractal deep enough
/// that every interval is shorter than 2 eps (at that depth the
/// neighbourhoods of F and of the prefractal coincide).
double tube_volume_union(const SelfSimilarStringSpec& spec, double epsilon);

/// |A| + |A + x| - |A u (A + x)| with A = F_d + [-eps, eps].
double overlap_by_union(const SelfSimilarStringSpec& spec, int depth, double epsilon, double x);

/// Primitive words of length exactly l over k letters, by testing every word
/// against all of its rotations.
std::vector<std::vector<std::uint8_t>> lyndon_brute(int letters, int length);

/// sum over all words v with w(v) <= log x of w(v)/|v|, which counts each
/// primitive orbit p and power k once with weight w(p).
double psi_words(const FlowSpec& flow, double x);

/// min over q <= q_max of q ||q alpha||, in long double, one q at a time.
double badly_approximable_serial(long double alpha, long q_max);

}  // namespace cxdim::reference
