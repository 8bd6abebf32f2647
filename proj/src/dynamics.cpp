#include "popuc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "popuc/error.hpp"

namespace popuc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBalanceFloor = 1e-14;
constexpr double kCollisionTol = 1e-9;

/// Signed circular increment b - a in (-pi, pi].
double circular_increment(double a, double b) { return reduce_angle(b - a, -std::numbers::pi); }

std::string at_t(double t) {
  std::ostringstream os;
  os << " at t=" << t;
  return os.str();
}
}  // namespace

std::vector<double> SweepConfig::grid() const {
  std::vector<double> g(steps);
  for (int i = 0; i < steps; ++i) g[i] = steps == 1 ? t_start : t_start + (t_stop - t_start) * i / (steps - 1);
  return g;
}

double SweepConfig::window_start() const {
  if (theta_ref) return *theta_ref;
  if (policy.kind == ZeroPolicy::Kind::fixed_xi) return std::arg(policy.value);
  return -std::numbers::pi;
}

void SweepConfig::check() const {
  if (steps < 3) throw ValidationError("sweep grid needs at least 3 steps");
  if (degree < 2) throw ValidationError("POPUC degree must be at least 2");
  if (!(t_stop > t_start)) throw ValidationError("sweep grid must be increasing");
  const double spacing = (t_stop - t_start) / (steps - 1);
  if (!(h > 0.0) || h > spacing / 2) throw ValidationError("finite-difference step must lie in (0, spacing/2]");
}

PipelinePoint solve_point(const SweepConfig& cfg, double t) {
  const int n = cfg.degree - 1;
  try {
    MomentSequence ms = moments(cfg.measure, t, 2 * n + 2, cfg.nodes);
    OpucFamily fam = gram_opuc(ms, n);
    PopucInstance inst = cfg.policy.kind == ZeroPolicy::Kind::fixed_xi ? popuc_with_zero_at(fam.top(), cfg.policy.value)
                                                                        : build_popuc(fam.top(), cfg.policy.value);
    ZeroSet zs = zeros_on_circle(inst, cfg.window_start());
    return PipelinePoint{t, std::move(ms), std::move(fam), std::move(inst), std::move(zs)};
  } catch (const DegenerateMeasureError& e) {
    throw DegenerateMeasureError(e.what() + at_t(t), e.degree());
  } catch (const ValidationError& e) {
    throw ValidationError(e.what() + at_t(t));
  } catch (const NumericalError& e) {
    throw NumericalError(e.what() + at_t(t));
  }
}

Trajectory sweep(const SweepConfig& cfg) {
  cfg.check();
  Trajectory traj;
  traj.t = cfg.grid();
  for (double t : traj.t) traj.sets.push_back(solve_point(cfg, t).zeros);

  const std::size_t m = traj.sets.front().size();
  traj.chains.assign(m, std::vector<double>(traj.t.size()));
  traj.slot.assign(traj.t.size(), std::vector<std::size_t>(m));
  for (std::size_t k = 0; k < m; ++k) {
    traj.slot[0][k] = k;
    traj.chains[k][0] = traj.sets[0].phases[k];
  }

  for (std::size_t i = 1; i < traj.t.size(); ++i) {
    const ZeroSet& prev = traj.sets[i - 1];
    const ZeroSet& cur = traj.sets[i];
    std::vector<bool> taken(m, false);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t from = traj.slot[i - 1][k];
      const std::size_t to = cur.nearest(prev.phases[from]);
      const double jump = circular_distance(prev.phases[from], cur.phases[to]);
      if (taken[to]) throw MatchingError("zero matching is not a bijection" + at_t(traj.t[i]), traj.t[i]);
      if (jump >= 0.5 * prev.min_gap) {
        std::ostringstream os;
        os << "phase jump " << jump << " exceeds half the minimum gap " << prev.min_gap << at_t(traj.t[i])
           << "; refine the grid";
        throw MatchingError(os.str(), traj.t[i]);
      }
      taken[to] = true;
      traj.slot[i][k] = to;
      traj.chains[k][i] = traj.chains[k][i - 1] + circular_increment(prev.phases[from], cur.phases[to]);
      traj.max_jump = std::max(traj.max_jump, jump);
    }
  }

  if (traj.sets.front().fixed_index) {
    const std::size_t f = *traj.sets.front().fixed_index;
    traj.fixed_chain = f;
  }
  return traj;
}

std::vector<double> fd_velocity(const Trajectory& traj, std::size_t k) {
  if (k >= traj.chains.size()) throw ValidationError("no trajectory with index " + std::to_string(k));
  const auto& phi = traj.chains[k];
  const auto& t = traj.t;
  const std::size_t n = t.size();
  std::vector<double> v(n, 0.0);
  if (n < 2) return v;
  v[0] = (phi[1] - phi[0]) / (t[1] - t[0]);
  v[n - 1] = (phi[n - 1] - phi[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (phi[i + 1] - phi[i - 1]) / (t[i + 1] - t[i - 1]);
  return v;
}

std::vector<double> local_velocities(const SweepConfig& cfg, double t, const ZeroSet& zs) {
  const ZeroSet plus = solve_point(cfg, t + cfg.h).zeros;
  const ZeroSet minus = solve_point(cfg, t - cfg.h).zeros;
  std::vector<double> v(zs.size());
  for (std::size_t k = 0; k < zs.size(); ++k) {
    const double phi = zs.phases[k];
    const double up = plus.phases[plus.nearest(phi)];
    const double down = minus.phases[minus.nearest(phi)];
    if (circular_distance(up, phi) >= 0.5 * zs.min_gap || circular_distance(down, phi) >= 0.5 * zs.min_gap)
      throw MatchingError("finite-difference step too large to follow zero " + std::to_string(k) + at_t(t), t);
    v[k] = (circular_increment(phi, up) - circular_increment(phi, down)) / (2 * cfg.h);
  }
  return v;
}

std::optional<std::size_t> fixed_zero_index(const SweepConfig& cfg, const PipelinePoint& pt) {
  if (cfg.policy.kind == ZeroPolicy::Kind::fixed_xi) return pt.zeros.fixed_index;
  const PopucInstance plus = solve_point(cfg, pt.t + cfg.h).popuc;
  const PopucInstance minus = solve_point(cfg, pt.t - cfg.h).popuc;
  const double tol = 1e-9 * max_abs_coeff(pt.popuc.p.coeffs());
  std::optional<std::size_t> best;
  double best_res = tol;
  for (std::size_t k = 0; k < pt.zeros.size(); ++k) {
    const Complex z = pt.zeros.zero(k);
    const double res = std::max(std::abs(plus.p(z)), std::abs(minus.p(z)));
    if (res <= best_res) {
      best_res = res;
      best = k;
    }
  }
  return best;
}

BalanceEntry balance_check(const SweepConfig& cfg, const PipelinePoint& pt, std::size_t fixed, std::size_t tracked,
                           double dphi) {
  const MotionContext ctx = make_motion_context(pt.zeros, cfg.measure, pt.t, fixed, tracked);
  const Coeffs& P = pt.popuc.p.coeffs();
  const Complex zeta = pt.zeros.zero(tracked);
  const Complex xi = pt.zeros.zero(fixed);

  BalanceEntry e;
  e.t = pt.t;
  e.tracked = tracked;
  e.phase = pt.zeros.phases[tracked];
  e.dphi = dphi;

  const Coeffs R = deflate(P, zeta);
  e.C = inner_product(R, R, pt.moments).real();
  if (cfg.theorem == Theorem::t22) {
    const Coeffs Rc = deflate(P, std::conj(zeta));
    e.C += inner_product(Rc, Rc, pt.moments).real();
  }
  if (!(e.C > 0.0)) throw NumericalError("balance denominator is not positive" + at_t(pt.t));
  e.lhs = e.C * dphi;

  double rhs = 0.0;
  for (std::size_t j = 0; j < ctx.masses.size(); ++j) {
    const MassState& m = ctx.masses[j];
    double nearest = std::numeric_limits<double>::infinity();
    for (double ph : ctx.phases) nearest = std::min(nearest, circular_distance(ph, m.omega));
    // |P(e^{i omega})|^2 vanishes to second order at a zero; the product has limit 0.
    if (nearest < kCollisionTol) continue;
    const double p2 = std::norm(horner(P, std::polar(1.0, m.omega)));
    switch (cfg.theorem) {
      case Theorem::t21: rhs += W_discrete(j, ctx) * p2; break;
      case Theorem::t22: rhs += W_conjugate(j, ctx) * p2; break;
      case Theorem::t23: rhs += W_mixed(j, ctx) * p2; break;
    }
  }
  if (cfg.theorem == Theorem::t22) rhs *= 2.0 * std::sin(e.phase);

  if (cfg.theorem == Theorem::t23 && cfg.measure.ac.present() && !cfg.measure.ac.log_rate_is_uniform()) {
    // |P|^2 s(theta) = Re[i (zeta - xi) e^{i theta} R2(e^{i theta}) conj(P(e^{i theta}))],
    // R2 = P / ((z - xi)(z - zeta)): smooth, no poles.
    const Coeffs R2 = deflate(R, xi);
    const Complex pre = Complex(0.0, 1.0) * (zeta - xi);
    const double f_phi = cfg.measure.ac.log_rate(e.phase, pt.t);
    const int nodes = cfg.nodes;
    const double theta0 = pt.zeros.phases[fixed];
    double integral = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double theta = theta0 + kTwoPi * (i + 0.5) / nodes;
      const Complex z = std::polar(1.0, theta);
      const double sp2 = (pre * z * horner(R2, z) * std::conj(horner(P, z))).real();
      const double w = cfg.measure.ac.density(theta, pt.t);
      if (w > 0.0) integral += sp2 * (cfg.measure.ac.density_dt(theta, pt.t) / w - f_phi) * w;
    }
    rhs += integral / nodes;
  }
  e.rhs = rhs;
  e.mismatch = std::fabs(e.lhs - e.rhs) / (std::fabs(e.lhs) + std::fabs(e.rhs) + kBalanceFloor);
  return e;
}

namespace {
std::size_t conjugate_partner(const ZeroSet& zs, std::size_t k) { return zs.nearest(-zs.phases[k]); }

bool in_upper_half(double phase) {
  const double r = reduce_angle(phase, -std::numbers::pi);
  return r > 0.0 && r < std::numbers::pi;
}
}  // namespace

BalanceEntry balance_check(const SweepConfig& cfg, double t, std::size_t tracked) {
  const PipelinePoint pt = solve_point(cfg, t);
  if (tracked >= pt.zeros.size()) throw ValidationError("tracked zero index out of range");
  std::size_t fixed;
  if (cfg.theorem == Theorem::t22) {
    fixed = conjugate_partner(pt.zeros, tracked);
  } else {
    const auto f = fixed_zero_index(cfg, pt);
    if (!f) throw ValidationError("no fixed zero" + at_t(t));
    fixed = *f;
  }
  if (fixed == tracked) throw ValidationError("tracked zero coincides with the fixed zero");
  const double dphi = local_velocities(cfg, t, pt.zeros)[tracked];
  return balance_check(cfg, pt, fixed, tracked, dphi);
}

PointAnalysis analyze_point(const SweepConfig& cfg, const PipelinePoint& pt) {
  PointAnalysis out;
  out.t = pt.t;
  const std::vector<double> v = local_velocities(cfg, pt.t, pt.zeros);

  if (cfg.theorem == Theorem::t22) {
    for (std::size_t k = 0; k < pt.zeros.size(); ++k) {
      if (!in_upper_half(pt.zeros.phases[k])) continue;
      const std::size_t partner = conjugate_partner(pt.zeros, k);
      if (partner == k) continue;
      TrackedAnalysis ta;
      ta.index = k;
      ta.phase = pt.zeros.phases[k];
      ta.velocity = v[k];
      ta.report = verdict(make_motion_context(pt.zeros, cfg.measure, pt.t, partner, k), cfg.theorem);
      if (ta.report.applicable) ta.balance = balance_check(cfg, pt, partner, k, v[k]);
      out.tracked.push_back(std::move(ta));
    }
    return out;
  }

  out.fixed = fixed_zero_index(cfg, pt);
  if (!out.fixed) return out;
  for (std::size_t k = 0; k < pt.zeros.size(); ++k) {
    if (k == *out.fixed) continue;
    TrackedAnalysis ta;
    ta.index = k;
    ta.phase = pt.zeros.phases[k];
    ta.velocity = v[k];
    ta.report = verdict(make_motion_context(pt.zeros, cfg.measure, pt.t, *out.fixed, k), cfg.theorem);
    if (ta.report.applicable) ta.balance = balance_check(cfg, pt, *out.fixed, k, v[k]);
    out.tracked.push_back(std::move(ta));
  }
  return out;
}

}  // namespace popuc
