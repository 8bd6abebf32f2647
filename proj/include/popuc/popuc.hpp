#pragma once

#include <optional>
#include <vector>

#include "popuc/poly.hpp"

namespace popuc {

/// P(z) = z Q_n(z) - conj(b) Q_n*(z), |b| = 1.
struct PopucInstance {
  MonicPoly p;
  Complex b;
  int source_degree = 0;
  std::optional<Complex> xi;  ///< prescribed zero, when b was chosen to fix one
};

/// Unit-circle zeros of a POPUC as sorted phases in [theta_ref, theta_ref + 2pi).
struct ZeroSet {
  std::vector<double> phases;
  std::vector<double> residuals;  ///< |P(e^{i phi_k})|
  double theta_ref = 0.0;
  double max_modulus_deviation = 0.0;  ///< before projection onto the circle
  double min_gap = 0.0;
  std::optional<std::size_t> fixed_index;
  std::optional<std::size_t> tracked_index;

  std::size_t size() const { return phases.size(); }
  Complex zero(std::size_t k) const { return std::polar(1.0, phases[k]); }
  /// Index of the zero closest (circularly) to the given phase.
  std::size_t nearest(double phase) const;
};

constexpr double kUnitTolerance = 1e-12;

/// Throws ValidationError if |b| is off the circle by more than 1e-12.
PopucInstance build_popuc(const MonicPoly& q, Complex b);

/// b such that build_popuc(q, b) vanishes at xi:
/// b = conj(xi) conj(Q(xi)) / conj(Q*(xi)).
Complex fix_zero_param(const MonicPoly& q, Complex xi);

struct RootOptions {
  int max_sweeps = 200;
  double modulus_tolerance = 1e-6;  ///< reject as non-POPUC beyond this
  double residual_tolerance = 1e-9;  ///< relative to max |coeff|
};

/// All zeros of a self-inversive polynomial via Aberth-Ehrlich iteration,
/// Newton-polished and projected onto the circle.
/// Throws ConvergenceError on non-convergence or oversized residuals and
/// NumericalError when a root is visibly off the circle.
ZeroSet zeros_on_circle(const PopucInstance& p, double theta_ref, const RootOptions& opts = {});

/// Raw Aberth-Ehrlich roots of any polynomial with nonzero leading coefficient.
std::vector<Complex> aberth_roots(const Coeffs& coeffs, int max_sweeps = 200);

}  // namespace popuc

namespace popuc {

/// build_popuc with b from fix_zero_param; records xi on the instance.
PopucInstance popuc_with_zero_at(const MonicPoly& q, Complex xi);

}  // namespace popuc
