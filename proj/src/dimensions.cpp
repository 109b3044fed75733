#include "cxdim/dimensions.hpp"

#include "cxdim/diophantine.hpp"
#include "cxdim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cxdim {
namespace {

constexpr double kCoincidence = 1e-9;

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

bool lex_less(const ComplexDimension& a, const ComplexDimension& b) {
  if (a.omega.real() != b.omega.real()) return a.omega.real() < b.omega.real();
  return a.omega.imag() < b.omega.imag();
}

using LComplex = std::complex<long double>;

// k-th derivative of sum_i c_i z^i (coefficients indexed by degree).
LComplex poly_derivative(const std::vector<long double>& c, LComplex z, int order) {
  LComplex acc = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= order; --i) {
    long double f = c[static_cast<std::size_t>(i)];
    for (int k = 0; k < order; ++k) f *= static_cast<long double>(i - k);
    acc = acc * z + f;
  }
  return acc;
}

}  // namespace

double real_dimension(const SelfSimilarStringSpec& spec) {
  const auto f = denominator(spec);
  auto g = [&](double s) { return f.eval({s, 0.0}).real(); };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  Quad s = 0.5 * (lo + hi);
  // Newton in float128: f(s) = 1 - sum m e^{-w s}, f' = sum m w e^{-w s}.
  for (int it = 0; it < 4; ++it) {
    Quad v = 1, d = 0;
    for (const auto& r : spec.ratios()) {
      const Quad e = boost::multiprecision::exp(-r.weight * s) * r.multiplicity;
      v -= e;
      d += r.weight * e;
    }
    s -= v / d;
  }
  return static_cast<double>(s);
}

Complex residue_at(const SelfSimilarStringSpec& spec, Complex omega) {
  const Complex d = denominator(spec).derivative(omega);
  if (std::abs(d) < 1e-10) throw Error(Errc::multiple_pole, "f'(omega) vanishes: pole is not simple");
  return eval_numerator(spec, omega) / d;
}

DimensionWindow find_roots(const SelfSimilarStringSpec& spec, const Window& window, const RootFinderOptions& options) {
  auto result = find_polynomial_roots(denominator(spec), window, options);
  for (auto& r : result.roots)
    if (r.multiplicity == 1) r.residue = residue_at(spec, r.omega);
  return result;
}

DimensionWindow cancellation_reduce(const SelfSimilarStringSpec& spec, const Window& window,
                                    const RootFinderOptions& options) {
  const auto f = denominator(spec);
  auto den = find_roots(spec, window, options);
  const auto nf = numerator_zeros_form(spec);
  if (nf.terms().empty()) return den;

  Window nw = den.window;
  const double pad = 1e-6 * (1.0 + std::max(std::abs(nw.t_min), std::abs(nw.t_max)));
  nw.sigma_min -= pad;
  nw.sigma_max += pad;
  nw.t_min -= pad;
  nw.t_max += pad;
  const auto num = find_polynomial_roots(nf, nw, options);

  DimensionWindow out;
  out.window = den.window;
  out.perturbations = den.perturbations;
  for (const auto& root : den.roots) {
    int m_num = 0;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& z : num.roots) {
      const double d = std::abs(z.omega - root.omega);
      if (d <= kCoincidence) m_num += z.multiplicity;
      else nearest = std::min(nearest, d);
    }
    const int net = root.multiplicity - m_num;
    if (net <= 0) continue;
    for (const auto& other : den.roots) {
      const double d = std::abs(other.omega - root.omega);
      if (d > kCoincidence) nearest = std::min(nearest, d);
    }

    // Independent check: winding of zeta = N/f around the pole is -net.
    const double rho = std::min(1e-4, 0.4 * nearest);
    const Window sq{root.omega.real() - rho, root.omega.real() + rho, root.omega.imag() - rho,
                    root.omega.imag() + rho};
    const int w_zeta = winding_number(nf, sq) - winding_number(f, sq);
    if (w_zeta != -net) {
      std::ostringstream os;
      os << "pole at " << root.omega << " has zeta winding " << w_zeta << ", expected " << -net;
      throw Error(Errc::non_convergence, os.str());
    }

    ComplexDimension pole{root.omega, net, std::nullopt};
    if (net == 1) {
      // zeta ~ [N^{(k)}/k!] (s-w)^k / ([f^{(k+1)}/(k+1)!] (s-w)^{k+1}), k = m_num.
      const Complex a = eval_numerator_derivative(spec, root.omega, m_num) / factorial(m_num);
      const Complex b = f.derivative(root.omega, m_num + 1) / factorial(m_num + 1);
      pole.residue = a / b;
    }
    out.roots.push_back(pole);
    out.winding_total += net;
  }
  std::sort(out.roots.begin(), out.roots.end(), lex_less);
  return out;
}

LatticeStructure classify_lattice(const SelfSimilarStringSpec& spec, int q_max, double tol, Exec exec) {
  if (q_max < 1) throw Error(Errc::precondition, "q_max must be >= 1");
  LatticeStructure out;
  out.q_max = q_max;
  out.tol = tol;
  const auto& ratios = spec.ratios();

  if (const auto& form = spec.lattice_form()) {
    out.lattice = true;
    out.base = form->base;
    out.base_weight = form->base_weight;
    out.exponents = form->exponents;
    std::int64_t g = 0;
    for (const auto& e : out.exponents) g = std::gcd(g, static_cast<std::int64_t>(e.first));
    if (g > 1) {
      for (auto& e : out.exponents) e.first /= static_cast<int>(g);
      out.base_weight *= Quad(g);
      out.base = boost::multiprecision::exp(-out.base_weight);
    }
    out.period = static_cast<double>(2 * quad_pi() / out.base_weight);
    out.rank = 1;
    return out;
  }

  const Quad w1 = ratios[0].weight;
  for (int k1 = 1; k1 <= q_max; ++k1) {
    std::vector<std::int64_t> k;
    bool ok = true;
    for (const auto& r : ratios) {
      const Quad ratio = r.weight / w1;
      const Quad kj = boost::multiprecision::round(ratio * k1);
      if (kj < 1 || abs(ratio - kj / k1) > tol) {
        ok = false;
        break;
      }
      k.push_back(static_cast<std::int64_t>(kj));
    }
    if (!ok) continue;
    std::int64_t g = 0;
    for (auto kj : k) g = std::gcd(g, kj);
    out.lattice = true;
    out.base_weight = w1 / Quad(k[0] / g);
    out.base = boost::multiprecision::exp(-out.base_weight);
    for (std::size_t j = 0; j < k.size(); ++j)
      out.exponents.emplace_back(static_cast<int>(k[j] / g), ratios[j].multiplicity);
    out.period = static_cast<double>(2 * quad_pi() / out.base_weight);
    out.rank = 1;
    return out;
  }

  // Rank over Q: grow a basis, testing each weight for a small integer
  // relation n0 w = sum n_i b_i with n0 <= q_max and a work budget on the
  // remaining coefficients.
  constexpr double kBudget = 5e7;
  std::vector<Quad> basis{w1};
  int bound_used = q_max;
  for (std::size_t j = 1; j < ratios.size(); ++j) {
    const Quad w = ratios[j].weight;
    const int free_coeffs = static_cast<int>(basis.size()) - 1;
    int B = q_max;
    if (free_coeffs > 0) {
      const double per = std::pow(kBudget / q_max, 1.0 / free_coeffs);
      B = std::max(1, std::min(q_max, static_cast<int>(per / 2)));
    }
    bound_used = std::min(bound_used, B);
    long long combos = 1;
    for (int i = 0; i < free_coeffs; ++i) combos *= (2LL * B + 1);
    const Quad thresh = Quad(tol) * w;
    bool dependent = false;
    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(dynamic, 8) reduction(|| : dependent) if (par)
    for (int n0 = 1; n0 <= q_max; ++n0) {
      if (dependent) continue;
      for (long long c = 0; c < combos && !dependent; ++c) {
        Quad v = Quad(n0) * w;
        long long rest = c;
        for (int i = 1; i <= free_coeffs; ++i) {
          const long long ni = rest % (2LL * B + 1) - B;
          rest /= (2LL * B + 1);
          v -= Quad(ni) * basis[static_cast<std::size_t>(i)];
        }
        const Quad n1 = boost::multiprecision::round(v / basis[0]);
        if (abs(v - n1 * basis[0]) <= thresh) dependent = true;
      }
    }
    if (!dependent) basis.push_back(w);
  }
  out.lattice = false;
  out.rank = static_cast<int>(basis.size());
  out.generic = out.rank == spec.distinct_ratio_count();
  out.relation_bound = bound_used;
  return out;
}

namespace {

LatticeLines lattice_lines_by_subdivision(const LatticeStructure& s, const SelfSimilarStringSpec& spec) {
  const auto f = denominator(spec);
  const auto [left, right] = zero_strip(f);
  const double p = s.period;
  const auto found =
      find_polynomial_roots(f, Window{left - 0.05, right + 0.05, -1e-7 * p, p * (1 - 1e-7)}, {});
  LatticeLines out;
  out.period = p;
  out.fallback = true;
  for (const auto& r : found.roots) {
    double im = std::fmod(r.omega.imag(), p);
    if (im < 0) im += p;
    if (im >= p) im -= p;
    out.lines.push_back({{r.omega.real(), im}, r.multiplicity});
  }
  return out;
}

}  // namespace

LatticeLines lattice_lines(const LatticeStructure& s, const SelfSimilarStringSpec& spec) {
  if (!s.lattice) throw Error(Errc::not_lattice, "lattice_lines needs a lattice structure");
  int degree = 0;
  for (const auto& e : s.exponents) degree = std::max(degree, e.first);
  std::vector<long double> c(static_cast<std::size_t>(degree) + 1, 0.0L);
  c[0] = -1.0L;
  for (const auto& [k, m] : s.exponents) c[static_cast<std::size_t>(k)] += m;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) comp(i, degree - 1) = -static_cast<double>(c[static_cast<std::size_t>(i)] / c.back());
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) return lattice_lines_by_subdivision(s, spec);
  std::vector<Complex> eig(es.eigenvalues().data(), es.eigenvalues().data() + degree);
  std::sort(eig.begin(), eig.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // Cluster eigenvalues within 1e-6 (multiple zeros split under rounding).
  std::vector<int> cluster(eig.size(), -1);
  int clusters = 0;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = clusters;
    for (std::size_t j = i + 1; j < eig.size(); ++j)
      if (cluster[j] < 0 && std::abs(eig[j] - eig[i]) < 1e-6) cluster[j] = clusters;
    ++clusters;
  }

  const double bw = static_cast<double>(s.base_weight);
  const double p = s.period;
  LatticeLines out;
  out.period = p;
  for (int cl = 0; cl < clusters; ++cl) {
    LComplex z = 0;
    int mult = 0;
    for (std::size_t i = 0; i < eig.size(); ++i)
      if (cluster[i] == cl) {
        z += LComplex(eig[i].real(), eig[i].imag());
        ++mult;
      }
    z /= static_cast<long double>(mult);
    for (int it = 0; it < 8; ++it) {
      const LComplex d = poly_derivative(c, z, mult);
      if (d == LComplex(0)) break;
      z -= poly_derivative(c, z, mult - 1) / d;
    }
    long double scale = 0;
    for (std::size_t i = 0; i < c.size(); ++i) scale += std::abs(c[i]) * std::pow(std::abs(z), static_cast<long double>(i));
    if (std::abs(poly_derivative(c, z, 0)) > 1e-9L * scale) return lattice_lines_by_subdivision(s, spec);

    // z = r^omega = e^{-bw omega}.
    const double re = -static_cast<double>(std::log(std::abs(z))) / bw;
    double im = -static_cast<double>(std::arg(z)) / bw;
    im = std::fmod(im, p);
    if (im < 0) im += p;
    if (im >= p || p - im < 1e-12 * p) im = 0.0;
    out.lines.push_back({{re, im}, mult});
  }

  const double D = real_dimension(spec);
  auto first = std::min_element(out.lines.begin(), out.lines.end(), [&](const LatticeLine& a, const LatticeLine& b) {
    return std::abs(a.omega - Complex(D, 0)) < std::abs(b.omega - Complex(D, 0));
  });
  std::iter_swap(out.lines.begin(), first);
  std::sort(out.lines.begin() + 1, out.lines.end(), [](const LatticeLine& a, const LatticeLine& b) {
    return a.omega.real() != b.omega.real() ? a.omega.real() < b.omega.real() : a.omega.imag() < b.omega.imag();
  });
  return out;
}

std::vector<ComplexDimension> lattice_roots(const LatticeLines& lines, double t_min, double t_max) {
  std::vector<ComplexDimension> out;
  const double p = lines.period;
  for (const auto& l : lines.lines) {
    const auto k0 = static_cast<long long>(std::ceil((t_min - l.omega.imag()) / p));
    for (long long k = k0;; ++k) {
      const double im = l.omega.imag() + static_cast<double>(k) * p;
      if (im > t_max) break;
      if (im >= t_min) out.push_back({{l.omega.real(), im}, l.multiplicity, std::nullopt});
    }
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<StairStep> real_parts_density(const std::vector<ComplexDimension>& roots) {
  std::vector<double> xs;
  for (const auto& r : roots)
    for (int i = 0; i < r.multiplicity; ++i) xs.push_back(r.omega.real());
  std::sort(xs.begin(), xs.end());
  std::vector<StairStep> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({xs[i], static_cast<int>(i) + 1});
  return out;
}

SigmaL sigma_l(const SelfSimilarStringSpec& spec, double t_max) {
  const auto structure = classify_lattice(spec);
  if (structure.lattice) throw Error(Errc::precondition, "sigma_l is defined here for nonlattice strings only");
  const auto& ratios = spec.ratios();
  if (structure.generic) {
    // m_N - e^{w_N s} - sum_{j<N} m_j e^{(w_N - w_j) s}, strictly decreasing.
    const auto& last = ratios.back();
    auto h = [&](double s) {
      double v = last.multiplicity - std::exp(last.w() * s);
      for (std::size_t j = 0; j + 1 < ratios.size(); ++j)
        v -= ratios[j].multiplicity * std::exp((last.w() - ratios[j].w()) * s);
      return v;
    };
    double lo = -1.0, hi = 1.0;
    while (h(lo) < 0) lo *= 2;
    while (h(hi) > 0) hi *= 2;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) > 0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
  }
  const auto f = denominator(spec);
  const auto strip = zero_strip(f);
  const double D = real_dimension(spec);
  const auto roots = find_polynomial_roots(f, Window{strip.first - 0.05, D + 0.05, 0.0, t_max});
  double best = D;
  for (const auto& r : roots.roots) best = std::min(best, r.omega.real());
  return {best, true};
}

DimensionFreeRegion dimension_free_region_two(const SelfSimilarStringSpec& spec, std::optional<double> c_cf) {
  if (spec.scaling_count() != 2 || spec.distinct_ratio_count() != 2)
    throw Error(Errc::precondition, "the two-ratio dimension-free region needs N = 2 distinct ratios");
  if (classify_lattice(spec).lattice) throw Error(Errc::precondition, "dimension-free regions need a nonlattice string");
  const double D = real_dimension(spec);
  const auto& r = spec.ratios();
  const double fp = denominator(spec).derivative({D, 0.0}).real();
  const double cb = std::pow(pi, 4) * std::pow(r[0].r() * r[1].r(), D) / (2.0 * fp * fp * fp);
  const double ccf = c_cf ? *c_cf : badly_approximable_constant(r[1].weight / r[0].weight, 10000);
  return {D, 2, 2.0, cb * ccf * ccf, false};
}

DimensionFreeRegion fit_dimension_free_region(const SelfSimilarStringSpec& spec,
                                              const std::vector<ComplexDimension>& roots) {
  const int N = spec.scaling_count();
  const double D = real_dimension(spec);
  const double e = 2.0 / (N - 1);
  std::vector<double> vals;
  for (const auto& r : roots) {
    const double t = r.omega.imag();
    if (t < 10.0 || t > 1000.0) continue;
    vals.push_back(std::max(0.0, D - r.omega.real()) * std::pow(t, e));
  }
  if (vals.empty()) throw Error(Errc::unknown_constant, "no zeros with Im in [10, 1000] to fit the constant");
  std::sort(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(std::max(0.0, std::ceil(0.01 * static_cast<double>(vals.size())) - 1));
  return {D, N, e, vals[idx], true};
}

double dimension_free_region(const SelfSimilarStringSpec& spec, double t,
                             const std::optional<DimensionFreeRegion>& fit) {
  if (spec.scaling_count() == 2) return dimension_free_region_two(spec).bound(t);
  if (!fit) throw Error(Errc::unknown_constant, "N > 2 needs a fitted dimension-free constant");
  return fit->bound(t);
}

}  // namespace cxdim
