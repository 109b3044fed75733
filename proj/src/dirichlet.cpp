#include "cxdim/dirichlet.hpp"

#include "cxdim/errors.hpp"

#include <algorithm>
#include <numeric>

namespace cxdim {
namespace {

constexpr double kMergeTolerance = 1e-14;
constexpr double kGuardThreshold = 1e-9;

// e^{-w s} for s in the closed upper half plane.
inline Complex exp_neg_upper(double w, double sigma, double t) {
  const double mag = std::exp(-w * sigma);
  const double ph = w * t;
  return {mag * std::cos(ph), -mag * std::sin(ph)};
}

}  // namespace

DirichletPolynomial::DirichletPolynomial(double constant, std::vector<ExpTerm> terms)
    : constant_(constant), terms_(std::move(terms)) {}

DirichletPolynomial DirichletPolynomial::from_terms(double constant,
                                                    std::vector<std::pair<Quad, double>> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ExpTerm> merged;
  for (const auto& [w, c] : terms) {
    if (!(w > 0)) throw Error(Errc::precondition, "exponential weights must be positive");
    if (!merged.empty() && abs(w - merged.back().weight) <= kMergeTolerance * w) {
      merged.back().coeff += c;
      continue;
    }
    merged.push_back({w, static_cast<double>(w), c});
  }
  std::erase_if(merged, [](const ExpTerm& t) { return t.coeff == 0.0; });
  return DirichletPolynomial(constant, std::move(merged));
}

Complex DirichletPolynomial::eval(Complex s) const { return derivative(s, 0); }

Complex DirichletPolynomial::derivative(Complex s, int order) const {
  const bool lower = s.imag() < 0;
  const double t = std::abs(s.imag());
  Complex acc = order == 0 ? Complex(constant_) : Complex(0.0);
  for (const auto& term : terms_) {
    // d^k/ds^k of -c e^{-ws} is -c (-w)^k e^{-ws}.
    double factor = -term.coeff;
    for (int k = 0; k < order; ++k) factor *= -term.w;
    acc += factor * exp_neg_upper(term.w, s.real(), t);
  }
  return lower ? std::conj(acc) : acc;
}

QuadComplex DirichletPolynomial::eval_quad(Complex s, int order) const {
  const bool lower = s.imag() < 0;
  const QuadComplex sq{Quad(s.real()), Quad(std::abs(s.imag()))};
  QuadComplex acc{order == 0 ? Quad(constant_) : Quad(0), Quad(0)};
  for (const auto& term : terms_) {
    Quad factor = -Quad(term.coeff);
    for (int k = 0; k < order; ++k) factor *= -term.weight;
    acc = acc + exp_neg(term.weight, sq) * factor;
  }
  if (lower) acc.im = -acc.im;
  return acc;
}

std::pair<Complex, Complex> DirichletPolynomial::eval_with_derivative(Complex s) const {
  const bool lower = s.imag() < 0;
  const double t = std::abs(s.imag());
  Complex v(constant_), d(0.0);
  for (const auto& term : terms_) {
    const Complex e = term.coeff * exp_neg_upper(term.w, s.real(), t);
    v -= e;
    d += term.w * e;
  }
  if (lower) return {std::conj(v), std::conj(d)};
  return {v, d};
}

std::pair<QuadComplex, QuadComplex> DirichletPolynomial::eval_with_derivative_quad(Complex s) const {
  const bool lower = s.imag() < 0;
  const QuadComplex sq{Quad(s.real()), Quad(std::abs(s.imag()))};
  QuadComplex v{Quad(constant_), Quad(0)}, d{Quad(0), Quad(0)};
  for (const auto& term : terms_) {
    const QuadComplex e = exp_neg(term.weight, sq) * Quad(term.coeff);
    v = v - e;
    d = d + e * term.weight;
  }
  if (lower) {
    v.im = -v.im;
    d.im = -d.im;
  }
  return {v, d};
}

double DirichletPolynomial::magnitude_scale(Complex s) const {
  double scale = std::abs(constant_);
  for (const auto& term : terms_) scale += std::abs(term.coeff) * std::exp(-term.w * s.real());
  return scale;
}

Complex DirichletPolynomial::eval_guarded(Complex s) const {
  const Complex v = eval(s);
  if (std::abs(v) < kGuardThreshold * magnitude_scale(s)) return eval_quad(s).to_double();
  return v;
}

DirichletPolynomial denominator(const SelfSimilarStringSpec& spec) {
  std::vector<std::pair<Quad, double>> terms;
  for (const auto& r : spec.ratios()) terms.emplace_back(r.weight, static_cast<double>(r.multiplicity));
  return DirichletPolynomial::from_terms(1.0, std::move(terms));
}

DirichletPolynomial numerator_zeros_form(const SelfSimilarStringSpec& spec) {
  Quad gmax = 0;
  for (const auto& g : spec.gaps()) gmax = std::max(gmax, g.value);
  double lead = 0;
  std::vector<std::pair<Quad, double>> terms;
  for (const auto& g : spec.gaps()) {
    const Quad u = boost::multiprecision::log(gmax / g.value);
    if (u <= kMergeTolerance) lead += g.multiplicity;
    else terms.emplace_back(u, -static_cast<double>(g.multiplicity));
  }
  return DirichletPolynomial::from_terms(lead, std::move(terms));
}

Complex eval_denominator(const SelfSimilarStringSpec& spec, Complex s) { return denominator(spec).eval(s); }

namespace {

Complex numerator_impl(const SelfSimilarStringSpec& spec, Complex s, int order) {
  const bool lower = s.imag() < 0;
  const double t = std::abs(s.imag());
  Complex acc = 0;
  for (const auto& g : spec.gaps()) {
    const double a = static_cast<double>(boost::multiprecision::log(spec.total_length_q() * g.value));
    const double mag = std::exp(a * s.real());
    Complex term = static_cast<double>(g.multiplicity) * Complex(mag * std::cos(a * t), mag * std::sin(a * t));
    for (int k = 0; k < order; ++k) term *= a;
    acc += term;
  }
  return lower ? std::conj(acc) : acc;
}

}  // namespace

Complex eval_numerator(const SelfSimilarStringSpec& spec, Complex s) { return numerator_impl(spec, s, 0); }

Complex eval_numerator_derivative(const SelfSimilarStringSpec& spec, Complex s, int order) {
  return numerator_impl(spec, s, order);
}

Complex eval_zeta(const SelfSimilarStringSpec& spec, Complex s) {
  const Complex num = eval_numerator(spec, s);
  const Complex den = denominator(spec).eval_guarded(s);
  if (std::abs(den) < 1e-13 * (1.0 + std::abs(num)))
    throw Error(Errc::pole, "zeta evaluated at a complex dimension");
  return num / den;
}

Complex zeta_log_derivative(const SelfSimilarStringSpec& spec, Complex s) {
  const auto f = denominator(spec);
  const Complex den = f.eval_guarded(s);
  if (std::abs(den) < 1e-13) throw Error(Errc::pole, "zeta evaluated at a complex dimension");
  const Complex num = eval_numerator(spec, s);
  // zeta = N/f, so zeta'/zeta = N'/N - f'/f.
  return -(eval_numerator_derivative(spec, s) / num - f.derivative(s) / den);
}

Rational zeta_at_zero(const SelfSimilarStringSpec& spec) {
  std::int64_t num = spec.gap_count();
  std::int64_t den = 1 - static_cast<std::int64_t>(spec.scaling_count());
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace cxdim
