#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <complex>
#include <numbers>

namespace cxdim {

using Complex = std::complex<double>;
using Quad = boost::multiprecision::float128;

/// Selects between the OpenMP kernel and a single-threaded run of the same
/// kernel. Results never depend on the choice.
enum class Exec { serial, parallel };

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline Quad quad_pi() { return boost::math::constants::pi<Quad>(); }

/// Complex number held in float128, used by the extended evaluation path.
struct QuadComplex {
  Quad re{0};
  Quad im{0};

  QuadComplex operator+(const QuadComplex& o) const { return {re + o.re, im + o.im}; }
  QuadComplex operator-(const QuadComplex& o) const { return {re - o.re, im - o.im}; }
  QuadComplex operator*(const QuadComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  QuadComplex operator*(const Quad& k) const { return {re * k, im * k}; }
  Complex to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

/// e^{-w s} in float128 for real w and complex s.
inline QuadComplex exp_neg(const Quad& w, const QuadComplex& s) {
  const Quad mag = boost::multiprecision::exp(-w * s.re);
  const Quad phase = w * s.im;
  return {mag * boost::multiprecision::cos(phase), -mag * boost::multiprecision::sin(phase)};
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace cxdim
