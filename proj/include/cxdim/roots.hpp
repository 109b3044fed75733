#pragma once

#include "cxdim/dirichlet.hpp"

#include <optional>
#include <vector>

namespace cxdim {

struct Window {
  double sigma_min = 0;
  double sigma_max = 0;
  double t_min = 0;
  double t_max = 0;

  bool contains(Complex z, double margin = 0) const {
    return z.real() >= sigma_min - margin && z.real() <= sigma_max + margin && z.imag() >= t_min - margin &&
           z.imag() <= t_max + margin;
  }
};

struct ComplexDimension {
  Complex omega;
  int multiplicity = 1;
  std::optional<Complex> residue;
};

/// Roots found inside a window. `window` holds the bounds actually used,
/// which differ from the request when a side had to be pushed off a root.
struct DimensionWindow {
  Window window;
  std::vector<ComplexDimension> roots;
  int winding_total = 0;
  int perturbations = 0;
};

struct RootFinderOptions {
  int initial_nodes = 64;          // per side, before adaptive refinement
  double min_size = 1e-8;          // isolating size for clustered/multiple roots
  double newton_tolerance = 1e-12; // required |f| after refinement
  int max_perturbations = 5;
  double perturbation = 1e-6;      // outward shift, scaled by (1 + |coordinate|)
  Exec exec = Exec::parallel;
};

/// Change of arg f along the straight segment a -> b, computed from
/// log-increments with bisection wherever one increment exceeds pi/4.
/// Throws ContourThroughRoot (internally tagged) if the segment passes
/// through a zero.
double arg_change(const DirichletPolynomial& f, Complex a, Complex b, int nodes = 64);

/// Winding number of f around the rectangle's boundary (counter-clockwise).
int winding_number(const DirichletPolynomial& f, const Window& w, int nodes = 64);

/// All zeros of f in the window with multiplicities (sorted by (Re, Im)).
DimensionWindow find_polynomial_roots(const DirichletPolynomial& f, const Window& window,
                                      const RootFinderOptions& options = {});

/// Bounds [sigma_left, sigma_right] that contain Re of every zero of f.
std::pair<double, double> zero_strip(const DirichletPolynomial& f);

/// Newton refinement of a simple zero in float128 arithmetic, a few steps.
Complex polish_root(const DirichletPolynomial& f, Complex z, int order = 0);

}  // namespace cxdim
