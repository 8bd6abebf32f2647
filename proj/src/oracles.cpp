#include "popuc/oracles.hpp"

#include <cmath>
#include <vector>

#include "popuc/error.hpp"

namespace popuc::oracles {

namespace {

MonicPoly from_vector(const std::vector<Complex>& c) {
  Coeffs out(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) out(static_cast<Eigen::Index>(k)) = c[k];
  out(out.size() - 1) = 1.0;
  return MonicPoly(std::move(out));
}

}  // namespace

MonicPoly bs_mass_opuc(int n, Complex lambda, double gamma, double omega) {
  if (n < 1) throw ValidationError("bs_mass_opuc: n must be >= 1");
  if (!(std::abs(lambda) < 1.0)) throw ValidationError("bs_mass_opuc: |lambda| must be < 1");
  if (gamma < 0.0) throw ValidationError("bs_mass_opuc: gamma must be >= 0");

  const Complex lb = std::conj(lambda);
  const Complex e = std::polar(1.0, omega);
  const Complex em = std::polar(1.0, -omega);
  const double one_minus = 1.0 - std::norm(lambda);

  std::vector<Complex> q(n + 1, 0.0);
  q[n] = 1.0;
  q[n - 1] -= lb;

  const Complex coef = gamma * std::polar(1.0, (n - 1) * omega) * (e - lb) /
                       (1.0 + gamma * (1.0 + (n - 1) * std::norm(e - lb) / one_minus));

  // 1 + (z - conj l)(e^{-i w} - l)/(1 - |l|^2) * sum_{m=0}^{n-2} (e^{-i w} z)^m
  std::vector<Complex> bracket(n + 1, 0.0);
  bracket[0] = 1.0;
  const Complex front = (em - lambda) / one_minus;
  Complex g = 1.0;  // e^{-i m w}
  for (int m = 0; m <= n - 2; ++m) {
    bracket[m + 1] += front * g;
    bracket[m] -= front * lb * g;
    g *= em;
  }
  for (int k = 0; k <= n; ++k) q[k] -= coef * bracket[k];
  return from_vector(q);
}

MonicPoly lebesgue_mass_popuc(int n, Complex b, double gamma) {
  if (n < 1) throw ValidationError("lebesgue_mass_popuc: n must be >= 1");
  if (std::fabs(std::abs(b) - 1.0) > 1e-12) throw ValidationError("lebesgue_mass_popuc: |b| must be 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("lebesgue_mass_popuc: gamma must lie in (0, 1)");
  const Complex bb = std::conj(b);
  std::vector<Complex> p(n + 2, 0.0);
  p[n + 1] = 1.0;
  p[0] = -bb;
  const Complex c = (1.0 - bb) * gamma / (1.0 + (n - 1) * gamma);
  for (int j = 1; j <= n; ++j) p[j] -= c;
  return from_vector(p);
}

double w0_bs(double phi, double theta0, double omega) {
  const double den = 2.0 * std::sin((phi - omega) / 2) * std::sin((theta0 - omega) / 2);
  if (std::fabs(den) < 1e-14) throw PoleError("w0_bs: pole");
  return std::sin((phi - theta0) / 2) / den;
}

double w0_lebesgue(double phi, double theta0, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("w0_lebesgue: gamma must lie in (0, 1)");
  const double den = std::sin(phi / 2) * std::sin(theta0 / 2);
  if (std::fabs(den) < 1e-14) throw PoleError("w0_lebesgue: pole");
  return std::sin((phi - theta0) / 2) / (2.0 * (1.0 - gamma) * den);
}

}  // namespace popuc::oracles
