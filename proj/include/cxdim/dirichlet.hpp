#pragma once

#include "cxdim/numeric.hpp"
#include "cxdim/string_spec.hpp"

#include <cstdint>
#include <vector>

namespace cxdim {

struct ExpTerm {
  Quad weight{0};
  double w = 0;  // weight rounded to double, for the fast path
  double coeff = 0;
};

/// P(s) = constant - sum_j c_j e^{-w_j s} with real data, weights strictly
/// increasing. Evaluation uses |Im s| and conjugates, so
/// P(conj s) == conj(P(s)) holds bit for bit.
class DirichletPolynomial {
 public:
  DirichletPolynomial() = default;
  DirichletPolynomial(double constant, std::vector<ExpTerm> terms);

  /// Builds from (weight, coeff) pairs; weights equal within 1e-14 relative
  /// are merged, zero coefficients dropped.
  static DirichletPolynomial from_terms(double constant, std::vector<std::pair<Quad, double>> terms);

  double constant() const { return constant_; }
  const std::vector<ExpTerm>& terms() const { return terms_; }
  double max_weight() const { return terms_.empty() ? 0.0 : terms_.back().w; }

  Complex operator()(Complex s) const { return eval(s); }
  Complex eval(Complex s) const;
  /// k-th derivative (k = 0 is the value).
  Complex derivative(Complex s, int order = 1) const;
  /// Same in float128; used where double cancellation would lose the value.
  QuadComplex eval_quad(Complex s, int order = 0) const;

  /// (P(s), P'(s)) sharing the exponentials.
  std::pair<Complex, Complex> eval_with_derivative(Complex s) const;
  std::pair<QuadComplex, QuadComplex> eval_with_derivative_quad(Complex s) const;

  /// |constant| + sum |c_j| e^{-w_j Re s}: the natural size of the terms at s.
  double magnitude_scale(Complex s) const;

  /// Value at s, promoted to float128 when |P(s)| < 1e-9 * scale.
  Complex eval_guarded(Complex s) const;

 private:
  double constant_ = 0;
  std::vector<ExpTerm> terms_;
};

/// Exact rational with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// f(s) = 1 - sum m_j r_j^s.
DirichletPolynomial denominator(const SelfSimilarStringSpec& spec);

/// A polynomial whose zeros are those of the numerator sum_k m_k (L g_k)^s,
/// normalized by the largest gap: m_max - sum (-m_k) (g_k/g_max)^s. When all
/// gaps are equal it has no terms and no zeros.
DirichletPolynomial numerator_zeros_form(const SelfSimilarStringSpec& spec);

Complex eval_denominator(const SelfSimilarStringSpec& spec, Complex s);
/// sum_k m_k (L g_k)^s.
Complex eval_numerator(const SelfSimilarStringSpec& spec, Complex s);
/// order-th derivative of the numerator.
Complex eval_numerator_derivative(const SelfSimilarStringSpec& spec, Complex s, int order = 1);
/// zeta_L(s) = numerator / denominator. Throws Error(pole) when
/// |denominator| < 1e-13 (1 + |numerator|).
Complex eval_zeta(const SelfSimilarStringSpec& spec, Complex s);
/// -zeta'/zeta at s.
Complex zeta_log_derivative(const SelfSimilarStringSpec& spec, Complex s);

/// K / (1 - N), reduced.
Rational zeta_at_zero(const SelfSimilarStringSpec& spec);

}  // namespace cxdim
