#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cxdim {

/// Machine-readable failure codes. The CLI reports them verbatim on the
/// diagnostic stream, so the names are part of the external interface.
enum class Errc {
  invalid_spec,
  parse_error,
  io_error,
  precondition,
  pole,
  contour_through_root,
  non_convergence,
  multiple_pole,
  polynomial_solve_failure,
  unknown_constant,
  precision_exhausted,
  newton_diverged,
  budget_exceeded,
  cutoff_too_coarse,
  multiple_pole_unsupported,
  not_lattice,
  multi_gap,
  lattice_not_measurable,
  truncation_unsound,
  divergent_region,
};

constexpr std::string_view code_name(Errc code) {
  switch (code) {
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::precondition: return "PreconditionViolated";
    case Errc::pole: return "PoleError";
    case Errc::contour_through_root: return "ContourThroughRoot";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::multiple_pole: return "MultiplePole";
    case Errc::polynomial_solve_failure: return "PolynomialSolveFailure";
    case Errc::unknown_constant: return "UnknownConstant";
    case Errc::precision_exhausted: return "PrecisionExhausted";
    case Errc::newton_diverged: return "NewtonDiverged";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::cutoff_too_coarse: return "CutoffTooCoarse";
    case Errc::multiple_pole_unsupported: return "MultiplePoleUnsupported";
    case Errc::not_lattice: return "NotLattice";
    case Errc::multi_gap: return "MultiGap";
    case Errc::lattice_not_measurable: return "LatticeNotMeasurable";
    case Errc::truncation_unsound: return "TruncationUnsound";
    case Errc::divergent_region: return "DivergentRegion";
  }
  return "Unknown";
}

/// Input and I/O failures map to exit status 1; everything else is a
/// domain failure (exit status 2).
constexpr bool is_input_error(Errc code) {
  return code == Errc::invalid_spec || code == Errc::parse_error || code == Errc::io_error;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(code_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cxdim
