#include "cxdim/diophantine.hpp"

#include "cxdim/dimensions.hpp"
#include "cxdim/dirichlet.hpp"
#include "cxdim/errors.hpp"
#include "cxdim/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cxdim {
namespace {

Quad frac_dist(const Quad& v) {
  const Quad r = boost::multiprecision::round(v);
  return abs(v - r);
}

std::vector<Quad> distinct_weights(const SelfSimilarStringSpec& spec) {
  std::vector<Quad> w;
  for (const auto& r : spec.ratios()) w.push_back(r.weight);
  return w;
}

}  // namespace

ContinuedFraction continued_fraction(const Quad& alpha, int n_terms) {
  if (!(alpha > 1)) throw Error(Errc::precondition, "continued_fraction expects alpha > 1");
  if (n_terms < 1) throw Error(Errc::precondition, "continued_fraction needs n_terms >= 1");
  ContinuedFraction cf;
  cf.alpha = alpha;
  // p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1.
  std::int64_t p1 = 1, q1 = 0, p2 = 0, q2 = 1;
  Quad x = alpha;
  for (int n = 0; n <= n_terms; ++n) {
    const Quad a = boost::multiprecision::floor(x);
    if (a > Quad(1e15)) throw Error(Errc::precision_exhausted, "partial quotient out of range");
    const auto an = static_cast<std::int64_t>(a);
    const std::int64_t p = an * p1 + p2;
    const std::int64_t q = an * q1 + q2;
    if (static_cast<double>(q) * static_cast<double>(q) > 1e30)
      throw Error(Errc::precision_exhausted,
                  "convergent " + std::to_string(n) + " needs more than float128 precision");
    cf.partial_quotients.push_back(an);
    cf.convergents.emplace_back(p, q);
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    const Quad rest = x - a;
    if (rest == 0 || abs(alpha - Quad(p) / Quad(q)) < Quad(1e-32) * alpha) {
      cf.terminated = true;
      break;
    }
    x = 1 / rest;
  }
  if (cf.convergents.size() > 1) cf.convergents.erase(cf.convergents.begin());
  return cf;
}

double badly_approximable_constant(const Quad& alpha, std::int64_t q_max, Exec exec) {
  if (q_max < 1) throw Error(Errc::precondition, "q_max must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  const bool par = exec == Exec::parallel;
#pragma omp parallel for reduction(min : best) schedule(static) if (par)
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const Quad v = Quad(q) * alpha;
    const double c = static_cast<double>(Quad(q) * frac_dist(v));
    best = std::min(best, c);
  }
  return best;
}

std::vector<std::int64_t> simultaneous_records(const std::vector<Quad>& ratios, std::int64_t q_max, Exec exec) {
  if (q_max < 1) throw Error(Errc::precondition, "q_max must be >= 1");
  std::vector<double> err(static_cast<std::size_t>(q_max) + 1, 0.0);
  const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t q = 1; q <= q_max; ++q) {
    Quad worst = 0;
    for (const auto& a : ratios) worst = std::max(worst, frac_dist(Quad(q) * a));
    err[static_cast<std::size_t>(q)] = static_cast<double>(worst);
  }
  std::vector<std::int64_t> records;
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t q = 1; q <= q_max; ++q) {
    if (err[static_cast<std::size_t>(q)] < best) {
      best = err[static_cast<std::size_t>(q)];
      records.push_back(q);
    }
  }
  return records;
}

LatticeApproximation lattice_approximation(const SelfSimilarStringSpec& spec, int stage, std::int64_t q_max,
                                           Exec exec) {
  if (stage < 0) throw Error(Errc::precondition, "stage must be >= 0");
  if (classify_lattice(spec).lattice) throw Error(Errc::precondition, "string is already lattice");
  const auto w = distinct_weights(spec);
  const std::size_t m = w.size();

  std::int64_t q = 0;
  std::vector<std::int64_t> k(m);
  if (m == 2) {
    if (stage < 1) throw Error(Errc::precondition, "two-ratio stages start at 1");
    const auto cf = continued_fraction(w[1] / w[0], stage);
    if (static_cast<std::size_t>(stage) > cf.convergents.size())
      throw Error(Errc::precondition, "continued fraction terminated before the requested stage");
    q = cf.convergents[static_cast<std::size_t>(stage - 1)].second;
    k[0] = q;
    k[1] = static_cast<std::int64_t>(boost::multiprecision::round(Quad(q) * w[1] / w[0]));
  } else {
    std::vector<Quad> ratios;
    for (std::size_t j = 1; j < m; ++j) ratios.push_back(w[j] / w[0]);
    const auto records = simultaneous_records(ratios, q_max, exec);
    if (static_cast<std::size_t>(stage) >= records.size())
      throw Error(Errc::precondition, "no simultaneous-approximation record at this stage below q_max");
    q = records[static_cast<std::size_t>(stage)];
    k[0] = q;
    for (std::size_t j = 1; j < m; ++j)
      k[j] = static_cast<std::int64_t>(boost::multiprecision::round(Quad(q) * ratios[j - 1]));
  }

  std::int64_t g = 0;
  for (auto kj : k) g = std::gcd(g, kj);
  for (auto& kj : k) kj /= g;

  LatticeForm form;
  form.base_weight = w[0] / Quad(k[0]);
  form.base = boost::multiprecision::exp(-form.base_weight);
  std::vector<ScalingRatio> ratios;
  Quad ratio_sum = 0;
  double max_err = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const int mult = spec.ratios()[j].multiplicity;
    form.exponents.emplace_back(static_cast<int>(k[j]), mult);
    auto r = ScalingRatio::from_weight(form.base_weight * Quad(k[j]), mult);
    ratio_sum += r.value * mult;
    max_err = std::max(max_err, static_cast<double>(abs(r.value - spec.ratios()[j].value) / spec.ratios()[j].value));
    ratios.push_back(std::move(r));
  }
  Quad gap_total = 0;
  for (const auto& gp : spec.gaps()) gap_total += gp.value * gp.multiplicity;
  const Quad new_total = 1 - ratio_sum;
  if (!(new_total > 0)) throw Error(Errc::invalid_spec, "approximated ratios leave no room for the gaps");
  std::vector<Gap> gaps;
  for (const auto& gp : spec.gaps()) gaps.push_back({gp.value * new_total / gap_total, gp.multiplicity, {}});

  const double period = static_cast<double>(2 * quad_pi() / form.base_weight);
  const Quad base = form.base, bw = form.base_weight;
  auto exps = form.exponents;
  SelfSimilarStringSpec approximant(spec.total_length_q(), std::move(ratios), std::move(gaps), std::move(form),
                                    spec.length_literal());
  return LatticeApproximation{stage, q, base, bw, std::move(exps), period, max_err, std::move(approximant)};
}

PerturbationResult perturbation_root(const SelfSimilarStringSpec& spec, int k) {
  if (spec.distinct_ratio_count() != 2 || spec.scaling_count() != 2)
    throw Error(Errc::precondition, "perturbation_root needs exactly two scaling ratios");
  if (classify_lattice(spec).lattice) throw Error(Errc::precondition, "perturbation_root needs a nonlattice string");
  const double D = real_dimension(spec);
  const Quad w1 = spec.ratios()[0].weight, w2 = spec.ratios()[1].weight;
  const Quad alpha = w2 / w1;
  const double p = static_cast<double>(2 * quad_pi() / w1);
  const Quad ka = Quad(k) * alpha;
  const double frac = static_cast<double>(ka - boost::multiprecision::round(ka));
  const Complex x(0.0, two_pi * frac);

  const double r1D = std::exp(-static_cast<double>(w1) * D);
  const double r2D = std::exp(-static_cast<double>(w2) * D);
  const double fp = static_cast<double>(w1) * r1D + static_cast<double>(w2) * r2D;
  const double logr1 = -static_cast<double>(w1);
  const Complex center(D, k * p);
  const Complex approx =
      center - (r2D / fp) * x + (logr1 * logr1 * r1D * r2D / (2.0 * fp * fp * fp)) * x * x;

  const auto f = denominator(spec);
  Complex z = approx;
  for (int it = 0; it < 100; ++it) {
    const Complex step = f.eval_guarded(z) / f.derivative(z);
    z -= step;
    if (!is_finite(z) || std::abs(z - center) > p / 4)
      throw Error(Errc::newton_diverged, "Newton left the disk of radius p/4 around D + ikp");
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
  }
  z = polish_root(f, z);
  if (k == 0) z = {z.real(), 0.0};
  return {approx, z, x, std::abs(approx - z)};
}

}  // namespace cxdim
