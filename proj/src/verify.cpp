#include "popuc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "popuc/dynamics.hpp"
#include "popuc/error.hpp"
#include "popuc/oracles.hpp"

namespace popuc::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Complex random_unit(Rng& rng) { return std::polar(1.0, uniform(rng, 0.0, kTwoPi)); }

Complex random_complex(Rng& rng) { return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}; }

Coeffs random_poly(Rng& rng, int degree) {
  Coeffs c(degree + 1);
  for (int k = 0; k <= degree; ++k) c(k) = random_complex(rng);
  return c;
}

/// `count` phases with pairwise circular distance at least `sep`.
std::vector<double> separated_phases(Rng& rng, int count, double sep) {
  for (;;) {
    std::vector<double> out;
    for (int tries = 0; tries < 1000 && static_cast<int>(out.size()) < count; ++tries) {
      const double p = uniform(rng, 0.0, kTwoPi);
      bool ok = true;
      for (double q : out) ok = ok && circular_distance(p, q) >= sep;
      if (ok) out.push_back(p);
    }
    if (static_cast<int>(out.size()) == count) return out;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Expr affine(double a, double b) { return Expr::constant(a) + Expr::constant(b) * Expr::variable(Variable::t); }

/// Random absolutely continuous part; never `none`.
ACWeight random_ac(Rng& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0: return ACWeight::lebesgue(Expr::constant(uniform(rng, 0.2, 2.0)));
    case 1: {
      const Complex lambda = std::polar(uniform(rng, 0.0, 0.8), uniform(rng, 0.0, kTwoPi));
      return ACWeight::bernstein_szego(lambda, Expr::constant(uniform(rng, 0.2, 2.0)));
    }
    default: {
      const Expr theta = Expr::variable(Variable::theta);
      const Expr w = Expr::constant(1.0) +
                     Expr::constant(uniform(rng, 0.0, 0.8)) *
                         Expr::call(Expr::Function::cos, theta - Expr::constant(uniform(rng, 0.0, kTwoPi)));
      return ACWeight::custom(w);
    }
  }
}

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome(Rng&, const std::function<double(double)>&)> run;
};

// Each criterion takes a tolerance mapper: tol(x) returns x unless overridden.
using Tol = std::function<double(double)>;

Outcome zeros_on_circle(Rng& rng, const Tol& tol) {
  const double mod_tol = tol(1e-9), res_tol = tol(1e-9), gap_tol = 1e-6;
  double worst_mod = 0.0, worst_res = 0.0, min_gap = kTwoPi;
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = uniform_int(rng, 2, 12);
    const int n = degree - 1;
    Measure m;
    int mass_count = uniform_int(rng, 0, 8);
    if (mass_count < n + 1 || uniform_int(rng, 0, 1) == 1) m.ac = random_ac(rng);
    if (!m.ac.present()) mass_count = std::max(mass_count, n + 1);
    for (double p : separated_phases(rng, mass_count, 0.2))
      m.masses.emplace_back(Expr::constant(uniform(rng, 0.2, 2.0)), Expr::constant(p));
    const MomentSequence ms = moments(m, 0.0, n);
    const OpucFamily fam = gram_opuc(ms, n);
    const PopucInstance p = build_popuc(fam.top(), random_unit(rng));
    const ZeroSet zs = zeros_on_circle(p, -kPi);
    worst_mod = std::max(worst_mod, zs.max_modulus_deviation);
    for (double r : zs.residuals) worst_res = std::max(worst_res, r);
    min_gap = std::min(min_gap, zs.min_gap);
  }
  Outcome o;
  o.passed = worst_mod <= mod_tol && worst_res <= res_tol && min_gap > gap_tol;
  o.detail = "200 measures: max |1-|z|| " + fmt(worst_mod) + " (tol " + fmt(mod_tol) + "), max residual " +
             fmt(worst_res) + " (tol " + fmt(res_tol) + "), min gap " + fmt(min_gap) + " (> " + fmt(gap_tol) + ")";
  return o;
}

Outcome oracle_bs_mass(Rng& rng, const Tol& tol) {
  const double limit = tol(1e-8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = uniform_int(rng, 1, 6);
    const Complex lambda = std::polar(0.8 * std::sqrt(uniform(rng, 0.0, 1.0)), uniform(rng, 0.0, kTwoPi));
    const double gamma = uniform(rng, 1e-3, 5.0);
    const double omega = uniform(rng, 0.0, kTwoPi);
    Measure m;
    m.ac = ACWeight::bernstein_szego(lambda, Expr::constant(1.0));
    m.masses.emplace_back(Expr::constant(gamma), Expr::constant(omega));
    const MonicPoly got = gram_opuc(moments(m, 0.0, n), n).top();
    const MonicPoly want = oracles::bs_mass_opuc(n, lambda, gamma, omega);
    worst = std::max(worst, (got.coeffs() - want.coeffs()).cwiseAbs().maxCoeff());
  }
  return {worst <= limit, "50 (lambda, gamma, omega): max coefficient error " + fmt(worst) + " (tol " + fmt(limit) + ")"};
}

Outcome oracle_lebesgue_mass(Rng&, const Tol& tol) {
  const double limit = tol(1e-10);
  double worst = 0.0;
  for (double gamma : {0.1, 0.5, 0.9}) {
    Measure m;
    m.ac = ACWeight::lebesgue(Expr::constant(1.0 - gamma));
    m.masses.emplace_back(Expr::constant(gamma), Expr::constant(0.0));
    const OpucFamily fam = gram_opuc(moments(m, 0.0, 4), 4);
    for (Complex b : {Complex(1, 0), Complex(0, 1), Complex(-1, 0)}) {
      const PopucInstance p = build_popuc(fam.top(), b);
      const MonicPoly want = oracles::lebesgue_mass_popuc(4, b, gamma);
      worst = std::max(worst, (p.p.coeffs() - want.coeffs()).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= limit, "9 (gamma, b) pairs: max coefficient error " + fmt(worst) + " (tol " + fmt(limit) + ")"};
}

Outcome fixed_zero(Rng&, const Tol& tol) {
  const double limit = tol(1e-9);
  double worst = 0.0;
  int points = 0;
  for (ScenarioId id : {ScenarioId::bs_mass_gamma, ScenarioId::bs_mass_omega}) {
    const SweepConfig cfg = scenario_config(id);
    for (double t : cfg.grid()) {
      const PipelinePoint pt = solve_point(cfg, t);
      worst = std::max(worst, std::abs(pt.popuc.p(Complex(0.0, 1.0))));
      ++points;
    }
  }
  return {worst <= limit, std::to_string(points) + " grid points: max |P(i)| " + fmt(worst) + " (tol " + fmt(limit) + ")"};
}

Outcome balance_discrete(Rng& rng, const Tol& tol) {
  const double limit = tol(1e-4);
  double worst = 0.0;
  int checks = 0;
  for (int inst = 0; inst < 20; ++inst) {
    SweepConfig cfg;
    cfg.degree = uniform_int(rng, 4, 5);
    // finite support with N masses carries OPUC only up to degree N - 1
    const int count = uniform_int(rng, std::max(3, cfg.degree), 6);
    // stratified: neighbours stay >= 0.3 apart after drifting
    std::vector<double> base(count + 1);
    const double offset = uniform(rng, 0.0, kTwoPi);
    for (int j = 0; j <= count; ++j) base[j] = offset + kTwoPi * j / (count + 1) + uniform(rng, -0.1, 0.1);
    for (int j = 0; j < count; ++j)
      cfg.measure.masses.emplace_back(affine(uniform(rng, 0.3, 1.5), uniform(rng, -0.25, 0.25)),
                                      affine(base[j], uniform(rng, -0.2, 0.2)));
    cfg.policy = ZeroPolicy::fix_zero(std::polar(1.0, base[count]));
    cfg.theorem = Theorem::t21;
    cfg.t_start = 0.0;
    cfg.t_stop = 1.0;
    cfg.steps = 12;
    cfg.check();
    const std::vector<double> grid = cfg.grid();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const PipelinePoint pt = solve_point(cfg, grid[i]);
      const auto fixed = fixed_zero_index(cfg, pt);
      if (!fixed) throw NumericalError("fixed zero not found");
      const std::vector<double> v = local_velocities(cfg, pt.t, pt.zeros);
      for (std::size_t k = 0; k < pt.zeros.size(); ++k) {
        if (k == *fixed) continue;
        worst = std::max(worst, balance_check(cfg, pt, *fixed, k, v[k]).mismatch);
        ++checks;
      }
    }
  }
  return {worst <= limit,
          "20 instances, " + std::to_string(checks) + " zero checks: max mismatch " + fmt(worst) + " (tol " + fmt(limit) + ")"};
}

SweepConfig lebesgue_fixed_i() {
  SweepConfig cfg = scenario_config(ScenarioId::lebesgue_mass_b);
  cfg.policy = ZeroPolicy::fix_zero(Complex(0.0, 1.0));
  cfg.theta_ref.reset();
  return cfg;
}

Outcome balance_mixed(Rng&, const Tol& tol) {
  const double limit = tol(1e-4);
  const SweepConfig cfg = lebesgue_fixed_i();
  double worst = 0.0;
  int checks = 0;
  for (double t : cfg.grid()) {
    const PointAnalysis a = analyze_point(cfg, solve_point(cfg, t));
    for (const auto& ta : a.tracked) {
      if (!ta.balance) throw NumericalError("balance unavailable");
      worst = std::max(worst, ta.balance->mismatch);
      ++checks;
    }
  }
  return {worst <= limit && checks > 0,
          std::to_string(checks) + " zero checks over gamma in [0.05, 0.95]: max mismatch " + fmt(worst) + " (tol " +
              fmt(limit) + ")"};
}

Outcome sign_predictions(Rng&, const Tol&) {
  constexpr double vel_tol = 1e-8;
  int checks = 0, failures = 0, ccw_side = 0;
  std::string first_failure;
  auto record = [&](const std::string& what, double t, double phi, bool ccw, bool ok) {
    ++checks;
    ccw_side += ccw;
    if (ok) return;
    if (failures++ == 0) first_failure = "; first failure " + what + " t=" + fmt(t) + " phi=" + fmt(phi);
  };

  // gamma sweeps only: the closed-form W_0 describes increasing gamma at a fixed omega
  SweepConfig far_mass = scenario_config(ScenarioId::bs_mass_gamma);
  far_mass.measure.masses[0] = MassPoint(parse("t"), parse("4.5"));
  for (const SweepConfig& cfg : {scenario_config(ScenarioId::bs_mass_gamma), far_mass}) {
    for (double t : cfg.grid()) {
      const PipelinePoint pt = solve_point(cfg, t);
      const PointAnalysis a = analyze_point(cfg, pt);
      const double theta0 = cfg.window_start();
      const double omega = reduce_angle(cfg.measure.masses[0].omega().eval_t(t), theta0);
      for (const auto& ta : a.tracked) {
        const double w0 = oracles::w0_bs(ta.phase, theta0, omega);
        const bool ccw = ta.phase < omega;
        const bool ok = ccw ? (ta.velocity > vel_tol && w0 > 0 && ta.report.verdict == Verdict::ccw)
                            : (ta.velocity < -vel_tol && w0 < 0 && ta.report.verdict == Verdict::cw);
        record("omega=" + fmt(omega), t, ta.phase, ccw, ok);
      }
    }
  }

  SweepConfig fixed_b = scenario_config(ScenarioId::lebesgue_mass_b);
  for (const SweepConfig& cfg : {fixed_b, lebesgue_fixed_i()}) {
    for (double t : cfg.grid()) {
      const PipelinePoint pt = solve_point(cfg, t);
      const PointAnalysis a = analyze_point(cfg, pt);
      if (!a.fixed) throw NumericalError("fixed zero not found");
      const double theta0 = pt.zeros.phases[*a.fixed];
      for (const auto& ta : a.tracked) {
        const double phi = reduce_angle(ta.phase, theta0);
        const double w0 = oracles::w0_lebesgue(phi, theta0, t);
        const bool ccw = phi < kTwoPi;
        const bool ok = ccw ? (ta.velocity > vel_tol && w0 > 0 && ta.report.verdict == Verdict::ccw)
                            : (ta.velocity < -vel_tol && w0 < 0 && ta.report.verdict == Verdict::cw);
        record("lebesgue theta0=" + fmt(theta0), t, phi, ccw, ok);
      }
    }
  }
  return {failures == 0 && ccw_side > 0 && ccw_side < checks,
          std::to_string(checks) + " tracked zeros (" + std::to_string(ccw_side) + " on the counterclockwise arc), " + std::to_string(failures) + " sign disagreements" + first_failure};
}

Outcome stationary(Rng&, const Tol& tol) {
  const double limit = tol(1e-8);
  SweepConfig cfg = scenario_config(ScenarioId::lebesgue_mass_b);
  cfg.policy = ZeroPolicy::fix_zero(Complex(1.0, 0.0));
  cfg.theta_ref.reset();
  const Trajectory traj = sweep(cfg);
  double worst = 0.0;
  for (const auto& chain : traj.chains)
    for (double phi : chain) worst = std::max(worst, std::fabs(phi - chain.front()));
  return {worst <= limit, std::to_string(traj.zero_count()) + " zeros over " + std::to_string(traj.t.size()) +
                              " gamma values: max drift " + fmt(worst) + " (tol " + fmt(limit) + ")"};
}

SweepConfig conjugate_scenario() {
  SweepConfig cfg;
  cfg.degree = 5;
  cfg.theorem = Theorem::t22;
  cfg.policy = ZeroPolicy::fix_b(Complex(1.0, 0.0));
  cfg.t_start = 0.0;
  cfg.t_stop = 1.0;
  cfg.steps = 20;
  const auto pair = [&](double omega, Expr gamma) {
    cfg.measure.masses.emplace_back(gamma, Expr::constant(omega));
    cfg.measure.masses.emplace_back(gamma, Expr::constant(-omega));
  };
  pair(0.6, affine(1.0, 0.0));
  pair(1.5, affine(0.7, 0.0));
  pair(2.4, affine(0.5, 0.3));
  return cfg;
}

Outcome conjugate_pair(Rng&, const Tol& tol) {
  const double pair_tol = tol(1e-8), balance_tol = tol(1e-5);
  constexpr double vel_tol = 1e-8;
  const SweepConfig cfg = conjugate_scenario();
  double worst_pair = 0.0, worst_balance = 0.0;
  int decided = 0, disagreements = 0, tracked = 0;
  for (double t : cfg.grid()) {
    const PipelinePoint pt = solve_point(cfg, t);
    const PointAnalysis a = analyze_point(cfg, pt);
    if (a.tracked.size() != 2) throw NumericalError("expected two conjugate pairs");
    for (const auto& ta : a.tracked) {
      ++tracked;
      const std::size_t partner = pt.zeros.nearest(-ta.phase);
      worst_pair = std::max(worst_pair, std::fabs(ta.phase + pt.zeros.phases[partner]));
      if (ta.balance) worst_balance = std::max(worst_balance, ta.balance->mismatch);
      if (ta.report.verdict == Verdict::inconclusive) continue;
      ++decided;
      const bool ok = ta.report.verdict == Verdict::ccw   ? ta.velocity > vel_tol
                      : ta.report.verdict == Verdict::cw ? ta.velocity < -vel_tol
                                                          : std::fabs(ta.velocity) <= vel_tol;
      if (!ok) ++disagreements;
    }
  }
  Outcome o;
  o.passed = worst_pair <= pair_tol && worst_balance <= balance_tol && disagreements == 0 && decided > 0;
  o.detail = std::to_string(tracked) + " tracked zeros: max |phi + conj phi| " + fmt(worst_pair) + " (tol " +
             fmt(pair_tol) + "), " + std::to_string(decided) + " decided verdicts, " + std::to_string(disagreements) +
             " disagreements, max balance mismatch " + fmt(worst_balance) + " (tol " + fmt(balance_tol) + ")";
  return o;
}

MotionContext random_context(Rng& rng, int n) {
  MotionContext ctx;
  ctx.phases = separated_phases(rng, n + 1, 1e-2);
  std::sort(ctx.phases.begin(), ctx.phases.end());
  ctx.fixed = static_cast<std::size_t>(uniform_int(rng, 0, n));
  do ctx.tracked = static_cast<std::size_t>(uniform_int(rng, 0, n));
  while (ctx.tracked == ctx.fixed);
  return ctx;
}

double random_theta_away(Rng& rng, const std::vector<double>& phases) {
  for (;;) {
    const double th = uniform(rng, 0.0, kTwoPi);
    bool ok = true;
    for (double p : phases) ok = ok && circular_distance(th, p) > 1e-2;
    if (ok) return th;
  }
}

struct PopucSample {
  Measure measure;
  MomentSequence ms;
  PopucInstance p;
  ZeroSet zs;
};

PopucSample random_popuc(Rng& rng, bool discrete, bool continuous) {
  const int degree = uniform_int(rng, 2, discrete && !continuous ? 6 : 9);
  const int n = degree - 1;
  Measure m;
  if (continuous) m.ac = random_ac(rng);
  int count = discrete ? uniform_int(rng, 1, 7) : 0;
  if (!continuous) count = std::max(count, n + 1);
  for (double p : separated_phases(rng, count, 0.2))
    m.masses.emplace_back(Expr::constant(uniform(rng, 0.2, 2.0)), Expr::constant(p));
  MomentSequence ms = moments(m, 0.0, degree + 1);
  PopucInstance p = build_popuc(gram_opuc(ms, n).top(), random_unit(rng));
  ZeroSet zs = zeros_on_circle(p, -kPi);
  return {std::move(m), std::move(ms), std::move(p), std::move(zs)};
}

Outcome identities(Rng& rng, const Tol& tol) {
  double worst_s = 0.0, worst_S = 0.0, worst_po = 0.0, worst_ccd2 = 0.0, worst_self = 0.0, worst_para = 0.0,
         worst_quot = 0.0;
  const Complex I(0.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const double phi = uniform(rng, 0.0, kTwoPi), theta0 = uniform(rng, 0.0, kTwoPi);
    if (circular_distance(phi, theta0) < 1e-2) continue;
    const double th = random_theta_away(rng, {phi, theta0});
    const Complex xi = std::polar(1.0, theta0), zeta = std::polar(1.0, phi), e = std::polar(1.0, th);
    const Complex cform = I * (zeta - xi) * e / ((e - xi) * (e - zeta));
    const double real = s_factor(th, phi, theta0);
    worst_s = std::max(worst_s, std::abs(cform - real) / std::max(1.0, std::fabs(real)));
  }

  for (int trial = 0; trial < 200; ++trial) {
    const int n = uniform_int(rng, 1, 10);
    const MotionContext ctx = random_context(rng, n);
    const double th = random_theta_away(rng, ctx.phases);
    const Complex e = std::polar(1.0, th), em = std::conj(e);
    Complex sum = 1.0;
    for (std::size_t k = 0; k < ctx.phases.size(); ++k) {
      const Complex z = std::polar(1.0, ctx.phases[k]);
      sum -= em / (em - std::conj(z));
      if (k != ctx.fixed && k != ctx.tracked) sum += e / (e - z);
    }
    const Complex cform = -I * sum;
    const double real = S_sum(th, ctx);
    worst_S = std::max(worst_S, std::abs(cform - real) / std::max(1.0, std::fabs(real)));
  }

  for (int trial = 0; trial < 100; ++trial) {
    const PopucSample s = random_popuc(rng, true, false);
    const std::size_t fixed = uniform_int(rng, 0, static_cast<int>(s.zs.size()) - 1);
    const std::size_t tracked = (fixed + 1) % s.zs.size();
    const Complex xi = s.zs.zero(fixed), zeta = s.zs.zero(tracked);
    const Coeffs R2 = deflate(deflate(s.p.p.coeffs(), xi), zeta);
    Complex acc = 0.0;
    double scale = 0.0;
    for (const MassState& m : mass_states(s.measure, 0.0)) {
      const Complex e = std::polar(1.0, m.omega);
      const Complex term = m.gamma * e * horner(R2, e) * std::conj(horner(s.p.p.coeffs(), e));
      acc += term;
      scale += std::abs(term);
    }
    worst_po = std::max(worst_po, std::abs(acc) / scale);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const PopucSample s = random_popuc(rng, true, true);
    const std::size_t fixed = uniform_int(rng, 0, static_cast<int>(s.zs.size()) - 1);
    const std::size_t tracked = (fixed + 1) % s.zs.size();
    const Complex xi = s.zs.zero(fixed), zeta = s.zs.zero(tracked);
    const Coeffs& P = s.p.p.coeffs();
    const Coeffs R2 = deflate(deflate(P, xi), zeta);
    // s |P|^2 via its pole-free form
    const auto integrand = [&](Complex e) { return (I * (zeta - xi) * e * horner(R2, e) * std::conj(horner(P, e))); };
    Complex acc = 0.0;
    double scale = 0.0;
    const int nodes = 2048;
    for (int k = 0; k < nodes; ++k) {
      const double th = kTwoPi * k / nodes;
      const Complex term = integrand(std::polar(1.0, th)) * s.measure.ac.density(th, 0.0) / double(nodes);
      acc += term;
      scale += std::abs(term);
    }
    for (const MassState& m : mass_states(s.measure, 0.0)) {
      const Complex term = m.gamma * integrand(std::polar(1.0, m.omega));
      acc += term;
      scale += std::abs(term);
    }
    worst_ccd2 = std::max(worst_ccd2, std::abs(acc) / scale);
  }

  for (int trial = 0; trial < 100; ++trial) {
    const PopucSample s = random_popuc(rng, uniform_int(rng, 0, 1) == 1, true);
    const Coeffs diff = reversed(s.p.p) + s.p.b * s.p.p.coeffs();
    worst_self = std::max(worst_self, diff.cwiseAbs().maxCoeff());
  }

  for (int trial = 0; trial < 150; ++trial) {
    const PopucSample s = random_popuc(rng, uniform_int(rng, 0, 1) == 1, uniform_int(rng, 0, 2) > 0 ? true : false);
    const int n = s.p.source_degree;
    const Coeffs g = shift_up(random_poly(rng, n - 1));
    worst_para = std::max(worst_para, std::abs(inner_product(s.p.p.coeffs(), g, s.ms)));
  }

  for (int trial = 0; trial < 150; ++trial) {
    const PopucSample s = random_popuc(rng, uniform_int(rng, 0, 1) == 1, uniform_int(rng, 0, 2) > 0 ? true : false);
    const int n = s.p.source_degree;
    const Complex zeta = s.zs.zero(uniform_int(rng, 0, static_cast<int>(s.zs.size()) - 1));
    const Coeffs R = deflate(s.p.p.coeffs(), zeta);
    const Coeffs h = random_poly(rng, n);
    const Coeffs one = Coeffs::Ones(1);
    const Complex lhs = inner_product(R, h, s.ms);
    const Complex rhs = std::conj(horner(h, zeta)) * inner_product(R, one, s.ms);
    worst_quot = std::max(worst_quot, std::abs(lhs - rhs));
  }

  const double t_s = tol(1e-12), t_po = tol(1e-9), t_ccd2 = tol(1e-8), t_self = tol(1e-10), t_para = tol(1e-9),
               t_quot = tol(1e-8);
  Outcome o;
  o.passed = worst_s <= t_s && worst_S <= t_s && worst_po <= t_po && worst_ccd2 <= t_ccd2 && worst_self <= t_self &&
             worst_para <= t_para && worst_quot <= t_quot;
  o.detail = "1000 trials: s " + fmt(worst_s) + ", S " + fmt(worst_S) + " (tol " + fmt(t_s) + "); vanishing " +
             fmt(worst_po) + " (tol " + fmt(t_po) + "); mixed vanishing " + fmt(worst_ccd2) + " (tol " + fmt(t_ccd2) +
             "); self-inversive " + fmt(worst_self) + " (tol " + fmt(t_self) + "); paraorthogonality " +
             fmt(worst_para) + " (tol " + fmt(t_para) + "); quotient " + fmt(worst_quot) + " (tol " + fmt(t_quot) + ")";
  return o;
}

Expr random_ast(Rng& rng, int depth) {
  if (depth == 0 || uniform_int(rng, 0, 3) == 0) {
    if (uniform_int(rng, 0, 1) == 0) return Expr::variable(Variable::t);
    return Expr::constant(std::round(uniform(rng, -2.0, 2.0) * 100.0) / 100.0);
  }
  switch (uniform_int(rng, 0, 5)) {
    case 0: return random_ast(rng, depth - 1) + random_ast(rng, depth - 1);
    case 1: return random_ast(rng, depth - 1) - random_ast(rng, depth - 1);
    case 2: return random_ast(rng, depth - 1) * random_ast(rng, depth - 1);
    case 3: return Expr::call(Expr::Function::sin, random_ast(rng, depth - 1));
    case 4: return Expr::call(Expr::Function::cos, random_ast(rng, depth - 1));
    default: return Expr::call(Expr::Function::exp, random_ast(rng, depth - 1));
  }
}

Outcome expr_derivative(Rng& rng, const Tol& tol) {
  const double limit = tol(1e-6);
  constexpr double h = 1e-6;
  double worst = 0.0;
  int accepted = 0, rejected = 0;
  while (accepted < 100) {
    const Expr e = random_ast(rng, 5);
    const double t = uniform(rng, -1.0, 1.0);
    double d, fd;
    try {
      fd = (e.eval_t(t + h) - e.eval_t(t - h)) / (2 * h);
      d = differentiate(e, Variable::t).eval_t(t);
    } catch (const NumericalError&) {
      ++rejected;  // overflow to a non-finite value
      continue;
    }
    worst = std::max(worst, std::fabs(d - fd) / (1.0 + std::fabs(d)));
    ++accepted;
  }
  return {worst <= limit, "100 random expressions (" + std::to_string(rejected) +
                              " overflowing draws skipped): max error " + fmt(worst) + " relative to 1+|d| (tol " +
                              fmt(limit) + ")"};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "zeros_on_circle", 30.0, zeros_on_circle},
      {2, "oracle_bs_mass", 10.0, oracle_bs_mass},
      {3, "oracle_lebesgue_mass", 2.0, oracle_lebesgue_mass},
      {4, "fixed_zero", 10.0, fixed_zero},
      {5, "balance_discrete", 60.0, balance_discrete},
      {6, "balance_mixed", 30.0, balance_mixed},
      {7, "sign_predictions", 30.0, sign_predictions},
      {8, "stationary", 5.0, stationary},
      {9, "conjugate_pair", 30.0, conjugate_pair},
      {10, "identities", 30.0, identities},
      {11, "expr_derivative", 2.0, expr_derivative},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& c : criteria()) out.emplace_back(c.name);
    return out;
  }();
  return names;
}

std::string format(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " (" << std::fixed;
  os.precision(2);
  os << r.seconds << " s / " << r.budget_seconds << " s): " << r.detail;
  return os.str();
}

std::vector<CriterionResult> run(const Options& opts, std::ostream* log) {
  const Tol tol = [&](double x) { return opts.tolerance.value_or(x); };
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (opts.only && *opts.only != std::to_string(c.id) &&
        std::string_view(c.name).substr(0, opts.only->size()) != *opts.only)
      continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    Rng rng(opts.seed + static_cast<unsigned>(c.id));
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run(rng, tol);
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget_seconds) {
      r.passed = false;
      r.detail += "; exceeded runtime limit";
    }
    if (log) *log << format(r) << "\n" << std::flush;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace popuc::verify
