#include "popuc/popuc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "popuc/error.hpp"
#include "popuc/measure.hpp"

namespace popuc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::size_t ZeroSet::nearest(double phase) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const double d = circular_distance(phases[k], phase);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

PopucInstance build_popuc(const MonicPoly& q, Complex b) {
  if (std::fabs(std::abs(b) - 1.0) > kUnitTolerance) {
    std::ostringstream os;
    os << "paraorthogonality parameter must be unimodular, |b| = " << std::abs(b);
    throw ValidationError(os.str());
  }
  const Coeffs star = reversed(q);
  Coeffs p = shift_up(q.coeffs());
  p.head(star.size()) -= std::conj(b) * star;
  p(p.size() - 1) = 1.0;
  return PopucInstance{MonicPoly(std::move(p)), b, q.degree(), std::nullopt};
}

Complex fix_zero_param(const MonicPoly& q, Complex xi) {
  if (std::fabs(std::abs(xi) - 1.0) > kUnitTolerance) throw ValidationError("prescribed zero must lie on the unit circle");
  const Complex qs = horner(reversed(q), xi);
  if (std::abs(qs) < 1e-14) throw NumericalError("Q_n* vanishes at the prescribed zero");
  const Complex b = std::conj(xi) * std::conj(q(xi)) / std::conj(qs);
  if (std::fabs(std::abs(b) - 1.0) > 1e-10) throw NumericalError("computed parameter is not unimodular");
  return b / std::abs(b);
}

std::vector<Complex> aberth_roots(const Coeffs& coeffs, int max_sweeps) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  if (m < 1) return {};
  if (coeffs(m) == Complex(0.0)) throw std::invalid_argument("aberth_roots: zero leading coefficient");
  const Coeffs a = coeffs / coeffs(m);

  // Half-slot offset plus a fixed twist so that no start set is symmetric
  // under conjugation (real-coefficient inputs would otherwise stall).
  constexpr double kTwist = 0.2718281828;
  std::vector<Complex> z(m);
  for (int k = 0; k < m; ++k) z[k] = std::polar(1.0, kTwoPi * (k + 0.5) / m + kTwist / m);

  const double scale = max_abs_coeff(a);
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double max_step = 0.0;
    for (int k = 0; k < m; ++k) {
      const auto [p, dp] = horner_with_derivative(a, z[k]);
      if (std::abs(p) <= 1e-300) continue;
      const Complex ratio = p / dp;
      Complex repulsion = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (max_step < 1e-15) converged = true;
  }
  if (!converged) {
    // Accept if every residual is already at the rounding floor.
    double worst = 0.0;
    for (const auto& r : z) worst = std::max(worst, std::abs(horner(a, r)));
    if (worst > 1e-13 * scale * m) throw ConvergenceError("Aberth-Ehrlich did not converge in " + std::to_string(max_sweeps) + " sweeps");
  }
  for (auto& r : z) {
    for (int it = 0; it < 2; ++it) {
      const auto [p, dp] = horner_with_derivative(a, r);
      if (std::abs(dp) == 0.0) break;
      const Complex step = p / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  return z;
}

ZeroSet zeros_on_circle(const PopucInstance& p, double theta_ref, const RootOptions& opts) {
  const Coeffs& c = p.p.coeffs();
  const std::vector<Complex> roots = aberth_roots(c, opts.max_sweeps);
  const double coeff_scale = max_abs_coeff(c);

  ZeroSet zs;
  zs.theta_ref = theta_ref;
  for (const auto& r : roots) {
    const double dev = std::fabs(std::abs(r) - 1.0);
    zs.max_modulus_deviation = std::max(zs.max_modulus_deviation, dev);
    if (dev > opts.modulus_tolerance) {
      std::ostringstream os;
      os << "root " << r << " is off the unit circle by " << dev << " (input is not a POPUC)";
      throw NumericalError(os.str());
    }
    double phase = reduce_angle(std::arg(r), theta_ref);
    // A zero sitting on the reference angle must not wrap to the far end.
    if (phase - theta_ref > kTwoPi - 1e-12) phase -= kTwoPi;
    zs.phases.push_back(phase);
  }
  std::sort(zs.phases.begin(), zs.phases.end());
  for (double phi : zs.phases) {
    const double res = std::abs(horner(c, std::polar(1.0, phi)));
    if (res > opts.residual_tolerance * coeff_scale) {
      std::ostringstream os;
      os << "zero at phase " << phi << " has residual " << res;
      throw ConvergenceError(os.str());
    }
    zs.residuals.push_back(res);
  }
  const std::size_t m = zs.phases.size();
  zs.min_gap = m > 1 ? kTwoPi : 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) zs.min_gap = std::min(zs.min_gap, zs.phases[k + 1] - zs.phases[k]);
  if (m > 1) zs.min_gap = std::min(zs.min_gap, zs.phases[0] + kTwoPi - zs.phases[m - 1]);
  if (p.xi) zs.fixed_index = zs.nearest(std::arg(*p.xi));
  return zs;
}

}  // namespace popuc

namespace popuc {

PopucInstance popuc_with_zero_at(const MonicPoly& q, Complex xi) {
  PopucInstance inst = build_popuc(q, fix_zero_param(q, xi));
  inst.xi = xi;
  return inst;
}

}  // namespace popuc
