#include "cxdim/roots.hpp"

#include "cxdim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

namespace cxdim {
namespace {

constexpr double kMaxIncrement = pi / 4;
constexpr double kGuard = 1e-9;
constexpr double kQuadZero = 1e-28;
// Tile height as a fraction of pi / w_max; irrational-ish so tile lines
// rarely land on a lattice line of zeros.
constexpr double kTileFraction = 0.7548776662466927;
constexpr std::array<double, 5> kSplits = {0.4927, 0.5361, 0.4512, 0.5713, 0.4181};

struct ThroughRoot {
  Complex where;
};

// f at a contour node together with |f'/f|, the local rate of change of
// log f. Promoted to float128 when f is small against its terms.
struct Node {
  Complex z;
  Complex v;
  double rate;
};

Node node(const DirichletPolynomial& f, Complex z) {
  auto [v, d] = f.eval_with_derivative(z);
  const double scale = f.magnitude_scale(z);
  if (std::abs(v) < kGuard * scale) {
    const auto [vq, dq] = f.eval_with_derivative_quad(z);
    v = vq.to_double();
    d = dq.to_double();
    if (std::abs(v) < kQuadZero * scale) throw ThroughRoot{z};
  }
  return {z, v, std::abs(d) / std::abs(v)};
}

// An increment is trusted when it is below pi/4 and the segment is short
// against |f/f'| at both ends. The second test catches a nearby zero of
// multiplicity >= 2, whose sweep can alias to a small increment.
double increment(const DirichletPolynomial& f, const Node& a, const Node& b) {
  const double d = std::arg(b.v * std::conj(a.v));
  const double h = std::abs(b.z - a.z);
  if (std::abs(d) <= kMaxIncrement && h * std::max(a.rate, b.rate) <= 1.0) return d;
  if (h < 1e-13 * (1.0 + std::abs(a.z))) throw ThroughRoot{a.z};
  const Node m = node(f, 0.5 * (a.z + b.z));
  return increment(f, a, m) + increment(f, m, b);
}

double arg_change_fixed(const DirichletPolynomial& f, Complex a, Complex b, int nodes) {
  double total = 0;
  Node na = node(f, a);
  for (int i = 1; i <= nodes; ++i) {
    const Complex zb = i == nodes ? b : a + (b - a) * (static_cast<double>(i) / nodes);
    const Node nb = node(f, zb);
    total += increment(f, na, nb);
    na = nb;
  }
  return total;
}

int to_winding(double total_arg) {
  const double n = total_arg / two_pi;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-6) {
    std::ostringstream os;
    os << "winding estimate " << n << " is not an integer";
    throw Error(Errc::non_convergence, os.str());
  }
  return static_cast<int>(r);
}

// Node doubling until two successive estimates agree; an increment that
// hides a full turn between nodes shows up as a 2 pi disagreement.
double stable_arg(const DirichletPolynomial& f, Complex a, Complex b, int nodes) {
  double prev = arg_change_fixed(f, a, b, nodes);
  for (int round = 0; round < 8; ++round) {
    nodes *= 2;
    const double next = arg_change_fixed(f, a, b, nodes);
    if (std::abs(next - prev) < 1.0) return next;
    prev = next;
  }
  throw Error(Errc::non_convergence, "argument increment did not stabilise under node doubling");
}

double rect_arg(const DirichletPolynomial& f, const Window& r, int nodes) {
  const Complex a(r.sigma_min, r.t_min), b(r.sigma_max, r.t_min), c(r.sigma_max, r.t_max),
      d(r.sigma_min, r.t_max);
  return stable_arg(f, a, b, nodes) + stable_arg(f, b, c, nodes) + stable_arg(f, c, d, nodes) +
         stable_arg(f, d, a, nodes);
}

Complex newton(const DirichletPolynomial& f, Complex z, int order, int max_iter = 60) {
  for (int it = 0; it < max_iter; ++it) {
    const Complex fz = f.derivative(z, order);
    const Complex dz = f.derivative(z, order + 1);
    if (dz == Complex(0) || !is_finite(fz)) break;
    const Complex step = fz / dz;
    if (!is_finite(step)) break;
    z -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) break;
  }
  return z;
}

struct Found {
  Complex z;
  int multiplicity;
};

class Subdivider {
 public:
  Subdivider(const DirichletPolynomial& f, const RootFinderOptions& opt) : f_(f), opt_(opt) {}

  void run(const Window& r, int n, std::vector<Found>& out) const { process(r, n, out, 0); }

 private:
  const DirichletPolynomial& f_;
  const RootFinderOptions& opt_;

  double size(const Window& r) const { return std::max(r.sigma_max - r.sigma_min, r.t_max - r.t_min); }

  // |f(z)| small against the terms, allowing for z itself being rounded to
  // double (which matters high up the critical strip).
  bool residual_ok(Complex z) const {
    const double tol = opt_.newton_tolerance * f_.magnitude_scale(z) +
                       4e-16 * (1.0 + std::abs(z)) * std::abs(f_.derivative(z));
    return std::abs(f_.eval_quad(z).to_double()) <= tol;
  }

  bool accept_simple(const Window& r, Complex z) const {
    const double margin = 1e-12 * (1.0 + std::abs(z));
    if (!is_finite(z) || !r.contains(z, margin)) return false;
    return residual_ok(z);
  }

  Complex snap_real(Complex z, int order) const {
    if (z.imag() == 0.0 || std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z.real()))) return z;
    const Complex zr = polish_root(f_, Complex(z.real(), 0.0), order);
    if (residual_ok(zr)) return {zr.real(), 0.0};
    return z;
  }

  void process(const Window& r, int n, std::vector<Found>& out, int depth) const {
    if (n <= 0) return;
    const Complex center(0.5 * (r.sigma_min + r.sigma_max), 0.5 * (r.t_min + r.t_max));
    if (n == 1) {
      Complex z = polish_root(f_, newton(f_, center, 0), 0);
      if (accept_simple(r, z)) {
        out.push_back({snap_real(z, 0), 1});
        return;
      }
    }
    if (size(r) < opt_.min_size) {
      // Isolated to below min_size: the winding is the multiplicity.
      Complex z = polish_root(f_, newton(f_, center, n - 1), n - 1);
      if (!is_finite(z) || std::abs(z - center) > 2 * size(r)) z = center;
      if (!residual_ok(z)) {
        std::ostringstream os;
        os << "cannot refine zero of multiplicity " << n << " near " << center;
        throw Error(Errc::non_convergence, os.str());
      }
      out.push_back({snap_real(z, n - 1), n});
      return;
    }
    if (depth > 80) throw Error(Errc::non_convergence, "subdivision depth exceeded");

    for (double fx : kSplits) {
      const double sm = r.sigma_min + fx * (r.sigma_max - r.sigma_min);
      const double tm = r.t_min + (1.0 - fx) * (r.t_max - r.t_min);
      const std::array<Window, 4> kids = {Window{r.sigma_min, sm, r.t_min, tm}, Window{sm, r.sigma_max, r.t_min, tm},
                                          Window{r.sigma_min, sm, tm, r.t_max}, Window{sm, r.sigma_max, tm, r.t_max}};
      std::array<int, 4> counts{};
      try {
        int sum = 0;
        for (int k = 0; k < 4; ++k) {
          counts[k] = to_winding(rect_arg(f_, kids[k], 16));
          sum += counts[k];
        }
        if (sum != n) continue;
      } catch (const ThroughRoot&) {
        continue;
      } catch (const Error&) {
        continue;
      }
      for (int k = 0; k < 4; ++k) process(kids[k], counts[k], out, depth + 1);
      return;
    }
    std::ostringstream os;
    os << "cannot isolate " << n << " zero(s) in [" << r.sigma_min << ", " << r.sigma_max << "] x [" << r.t_min
       << ", " << r.t_max << "]";
    throw Error(Errc::non_convergence, os.str());
  }
};

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

enum Side { kBottom = 0, kTop = 1, kLeft = 2, kRight = 3, kNone = -1 };

}  // namespace

double arg_change(const DirichletPolynomial& f, Complex a, Complex b, int nodes) {
  try {
    return stable_arg(f, a, b, nodes);
  } catch (const ThroughRoot& e) {
    std::ostringstream os;
    os << "segment passes through a zero near " << e.where;
    throw Error(Errc::contour_through_root, os.str());
  }
}

int winding_number(const DirichletPolynomial& f, const Window& w, int nodes) {
  try {
    return to_winding(rect_arg(f, w, nodes));
  } catch (const ThroughRoot& e) {
    std::ostringstream os;
    os << "contour passes through a zero near " << e.where;
    throw Error(Errc::contour_through_root, os.str());
  }
}

Complex polish_root(const DirichletPolynomial& f, Complex z, int order) {
  QuadComplex q{Quad(z.real()), Quad(z.imag())};
  for (int it = 0; it < 4; ++it) {
    const Complex zz = q.to_double();
    const QuadComplex fz = f.eval_quad(zz, order);
    const QuadComplex dz = f.eval_quad(zz, order + 1);
    const Quad den = dz.re * dz.re + dz.im * dz.im;
    if (den == 0) break;
    const QuadComplex step{(fz.re * dz.re + fz.im * dz.im) / den, (fz.im * dz.re - fz.re * dz.im) / den};
    q = q - step;
    if (abs(step.re) + abs(step.im) < Quad(1e-17) * (1 + abs(q.re) + abs(q.im))) break;
  }
  return q.to_double();
}

std::pair<double, double> zero_strip(const DirichletPolynomial& f) {
  const auto& terms = f.terms();
  if (terms.empty()) return {0.0, 0.0};
  const double c0 = std::abs(f.constant());
  auto bisect = [](const std::function<double(double)>& g) {
    // g increasing with a sign change somewhere in the real line.
    double lo = -1.0, hi = 1.0;
    while (g(lo) > 0) lo *= 2;
    while (g(hi) < 0) hi *= 2;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  // Right edge: sum |c_j| e^{-w_j sigma} = |c0| (left side decreasing).
  const double right = c0 == 0.0 ? std::numeric_limits<double>::infinity() : bisect([&](double s) {
    double acc = 0;
    for (const auto& t : terms) acc += std::abs(t.coeff) * std::exp(-t.w * s);
    return c0 - acc;
  });
  // Left edge: the heaviest term must be matched by all the others.
  const auto& last = terms.back();
  const double left = terms.size() == 1 && c0 == 0.0 ? -std::numeric_limits<double>::infinity() : bisect([&](double s) {
    double acc = c0 * std::exp(last.w * s);
    for (std::size_t j = 0; j + 1 < terms.size(); ++j) acc += std::abs(terms[j].coeff) * std::exp((last.w - terms[j].w) * s);
    return acc - std::abs(last.coeff);
  });
  return {left, right};
}

DimensionWindow find_polynomial_roots(const DirichletPolynomial& f, const Window& requested,
                                      const RootFinderOptions& opt) {
  if (!(requested.sigma_max > requested.sigma_min) || !(requested.t_max > requested.t_min))
    throw Error(Errc::precondition, "window must have positive width and height");

  DimensionWindow result;
  result.window = requested;
  if (f.terms().empty()) return result;

  Window w = requested;
  const double h_target = kTileFraction * pi / f.max_weight();

  for (int attempt = 0;; ++attempt) {
    const int tiles = std::max(1, static_cast<int>(std::ceil((w.t_max - w.t_min) / h_target)));
    const double h = (w.t_max - w.t_min) / tiles;
    std::vector<double> lines(tiles + 1);
    for (int i = 0; i <= tiles; ++i) lines[i] = w.t_min + h * i;
    lines[tiles] = w.t_max;

    std::vector<double> harg(tiles + 1, 0.0), larg(tiles, 0.0), rarg(tiles, 0.0);
    std::vector<int> fail_side(tiles + 1, kNone);
    std::vector<std::exception_ptr> errors(tiles + 1);
    const bool par = opt.exec == Exec::parallel;

    // Horizontal lines; interior ones slide up locally when they hit a zero.
#pragma omp parallel for schedule(dynamic) if (par)
    for (int i = 0; i <= tiles; ++i) {
      const bool outer = i == 0 || i == tiles;
      for (int shift = 0;; ++shift) {
        try {
          harg[i] = stable_arg(f, {w.sigma_min, lines[i]}, {w.sigma_max, lines[i]}, opt.initial_nodes);
          break;
        } catch (const ThroughRoot&) {
          if (outer || shift >= 8) {
            fail_side[i] = i == 0 ? kBottom : kTop;
            if (!outer)
              errors[i] = std::make_exception_ptr(Error(Errc::non_convergence, "interior tile line keeps hitting zeros"));
            break;
          }
          lines[i] += 0.013 * h;
        } catch (const Error&) {
          errors[i] = std::current_exception();
          break;
        }
      }
    }
    rethrow_first(errors);

    int perturb = kNone;
    for (int i = 0; i <= tiles && perturb == kNone; ++i) perturb = fail_side[i];

    if (perturb == kNone) {
      std::vector<int> vfail(tiles, kNone);
#pragma omp parallel for schedule(dynamic) if (par)
      for (int i = 0; i < tiles; ++i) {
        try {
          larg[i] = stable_arg(f, {w.sigma_min, lines[i]}, {w.sigma_min, lines[i + 1]}, opt.initial_nodes);
        } catch (const ThroughRoot&) {
          vfail[i] = kLeft;
          continue;
        } catch (const Error&) {
          errors[i] = std::current_exception();
          continue;
        }
        try {
          rarg[i] = stable_arg(f, {w.sigma_max, lines[i]}, {w.sigma_max, lines[i + 1]}, opt.initial_nodes);
        } catch (const ThroughRoot&) {
          vfail[i] = kRight;
        } catch (const Error&) {
          errors[i] = std::current_exception();
        }
      }
      rethrow_first(errors);
      for (int i = 0; i < tiles && perturb == kNone; ++i) perturb = vfail[i];
    }

    if (perturb != kNone) {
      if (attempt >= opt.max_perturbations)
        throw Error(Errc::contour_through_root, "window boundary still meets a zero after perturbation");
      switch (perturb) {
        case kBottom: w.t_min -= opt.perturbation * (1.0 + std::abs(w.t_min)); break;
        case kTop: w.t_max += opt.perturbation * (1.0 + std::abs(w.t_max)); break;
        case kLeft: w.sigma_min -= opt.perturbation * (1.0 + std::abs(w.sigma_min)); break;
        default: w.sigma_max += opt.perturbation * (1.0 + std::abs(w.sigma_max)); break;
      }
      ++result.perturbations;
      continue;
    }

    std::vector<int> counts(tiles);
    int total = 0;
    for (int i = 0; i < tiles; ++i) {
      counts[i] = to_winding(harg[i] + rarg[i] - harg[i + 1] - larg[i]);
      if (counts[i] < 0) throw Error(Errc::non_convergence, "negative winding for a zero counter");
      total += counts[i];
    }

    std::vector<std::vector<Found>> found(tiles);
    const Subdivider sub(f, opt);
#pragma omp parallel for schedule(dynamic) if (par)
    for (int i = 0; i < tiles; ++i) {
      if (counts[i] == 0) continue;
      try {
        sub.run(Window{w.sigma_min, w.sigma_max, lines[i], lines[i + 1]}, counts[i], found[i]);
      } catch (const Error&) {
        errors[i] = std::current_exception();
      }
    }
    rethrow_first(errors);

    for (const auto& tile : found)
      for (const auto& r : tile) result.roots.push_back({r.z, r.multiplicity, std::nullopt});
    std::sort(result.roots.begin(), result.roots.end(), [](const auto& a, const auto& b) {
      if (a.omega.real() != b.omega.real()) return a.omega.real() < b.omega.real();
      return a.omega.imag() < b.omega.imag();
    });
    result.window = w;
    result.winding_total = total;
    return result;
  }
}

}  // namespace cxdim
