#include <numbers>

#include "popuc/error.hpp"
#include "popuc/oracles.hpp"

namespace popuc {

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"bs_mass_gamma", "bs_mass_omega", "lebesgue_mass_b"};
  return names;
}

const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::bs_mass_gamma: return "bs_mass_gamma";
    case ScenarioId::bs_mass_omega: return "bs_mass_omega";
    case ScenarioId::lebesgue_mass_b: return "lebesgue_mass_b";
  }
  return "?";
}

ScenarioId parse_scenario(const std::string& name) {
  if (name == "bs_mass_gamma") return ScenarioId::bs_mass_gamma;
  if (name == "bs_mass_omega") return ScenarioId::bs_mass_omega;
  if (name == "lebesgue_mass_b") return ScenarioId::lebesgue_mass_b;
  throw ValidationError("unknown scenario '" + name + "'");
}

SweepConfig scenario_config(ScenarioId id) {
  const Complex lambda(0.0, -1.0 / 3.0);
  SweepConfig cfg;
  cfg.degree = 5;
  cfg.theorem = Theorem::t23;
  switch (id) {
    case ScenarioId::bs_mass_gamma:
      cfg.measure.ac = ACWeight::bernstein_szego(lambda, parse("1"));
      cfg.measure.masses.emplace_back(parse("t"), parse("2*pi/3"));
      cfg.t_start = 0.01;
      cfg.t_stop = 5.0;
      cfg.steps = 50;
      cfg.policy = ZeroPolicy::fix_zero(Complex(0.0, 1.0));
      break;
    case ScenarioId::bs_mass_omega:
      cfg.measure.ac = ACWeight::bernstein_szego(lambda, parse("1"));
      cfg.measure.masses.emplace_back(parse("1"), parse("t"));
      cfg.t_start = 2.0 * std::numbers::pi / 3.0;
      cfg.t_stop = cfg.t_start + 0.5;
      cfg.steps = 50;
      cfg.policy = ZeroPolicy::fix_zero(Complex(0.0, 1.0));
      break;
    case ScenarioId::lebesgue_mass_b:
      cfg.measure.ac = ACWeight::lebesgue(parse("1 - t"));
      cfg.measure.masses.emplace_back(parse("t"), parse("0"));
      cfg.t_start = 0.05;
      cfg.t_stop = 0.95;
      cfg.steps = 19;
      cfg.policy = ZeroPolicy::fix_b(Complex(-1.0, 0.0));
      // window starts at the fixed zero -1
      cfg.theta_ref = std::numbers::pi;
      break;
  }
  return cfg;
}

}  // namespace popuc
