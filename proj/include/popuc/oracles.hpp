#pragma once

// Closed-form ground truth for the two worked measures. Nothing here calls
// into the moment/OPUC/POPUC pipeline; the only shared pieces are the
// complex type and the MonicPoly container.

#include <complex>
#include <string>
#include <vector>

#include "popuc/dynamics.hpp"
#include "popuc/poly.hpp"

namespace popuc::oracles {

/// Monic OPUC of (1-|l|^2)/|1 - l e^{i theta}|^2 dtheta/2pi + gamma delta(theta - omega).
MonicPoly bs_mass_opuc(int n, Complex lambda, double gamma, double omega);

/// POPUC of (1-gamma) dtheta/2pi + gamma delta_0 with parameter b:
/// z^{n+1} - conj(b) - (1 - conj(b)) gamma / (1 + (n-1) gamma) (z + ... + z^n).
MonicPoly lebesgue_mass_popuc(int n, Complex b, double gamma);

/// W_0 for the Bernstein-Szego + mass family with gamma as parameter.
double w0_bs(double phi, double theta0, double omega);

/// W_0 for (1-gamma) Lebesgue + gamma delta_0 with gamma as parameter.
double w0_lebesgue(double phi, double theta0, double gamma);

}  // namespace popuc::oracles

namespace popuc {

/// Built-in sweeps over the closed-form measures.
enum class ScenarioId { bs_mass_gamma, bs_mass_omega, lebesgue_mass_b };

const std::vector<std::string>& scenario_names();
ScenarioId parse_scenario(const std::string& name);
const char* to_string(ScenarioId id);

/// lambda = -i/3 throughout; fixed zero at i for the Bernstein-Szego
/// families; b = -1 for lebesgue_mass_b.
SweepConfig scenario_config(ScenarioId id);

}  // namespace popuc
