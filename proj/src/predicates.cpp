#include "popuc/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "popuc/error.hpp"

namespace popuc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleTol = 1e-12;
constexpr double kCollisionTol = 1e-9;
constexpr double kNonnegTol = 1e-12;
constexpr double kStrictTol = 1e-10;
constexpr double kStationaryTol = 1e-12;

double cot_half(double x) { return std::cos(x / 2) / std::sin(x / 2); }

void require_distinct(double theta, double phase, const char* what) {
  if (circular_distance(theta, phase) < kPoleTol)
    throw PoleError(std::string("evaluation point collides with ") + what);
}
}  // namespace

const char* to_string(Theorem th) {
  switch (th) {
    case Theorem::t21: return "t21";
    case Theorem::t22: return "t22";
    case Theorem::t23: return "t23";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ccw: return "CCW";
    case Verdict::cw: return "CW";
    case Verdict::stationary: return "Stationary";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "?";
}

Theorem parse_theorem(const std::string& name) {
  if (name == "t21") return Theorem::t21;
  if (name == "t22") return Theorem::t22;
  if (name == "t23") return Theorem::t23;
  throw ValidationError("unknown theorem '" + name + "' (expected t21, t22 or t23)");
}

MotionContext make_motion_context(const ZeroSet& zs, const Measure& m, double t, std::size_t fixed,
                                  std::size_t tracked) {
  if (fixed >= zs.size() || tracked >= zs.size() || fixed == tracked)
    throw ValidationError("fixed and tracked zero indices must be distinct and in range");
  MotionContext ctx;
  ctx.phases = zs.phases;
  ctx.fixed = fixed;
  ctx.tracked = tracked;
  ctx.masses = mass_states(m, t);
  if (m.ac.present()) {
    const ACWeight ac = m.ac;
    ctx.log_rate = [ac, t](double theta) { return ac.log_rate(theta, t); };
    ctx.density = [ac, t](double theta) { return ac.density(theta, t); };
  }
  return ctx;
}

double s_factor(double theta, double phi, double theta0) {
  require_distinct(theta, phi, "the tracked zero");
  require_distinct(theta, theta0, "the fixed zero");
  return std::sin((phi - theta0) / 2) / (2 * std::sin((phi - theta) / 2) * std::sin((theta0 - theta) / 2));
}

double S_sum(double theta, const MotionContext& ctx) {
  double sum = 0.0;
  for (std::size_t k = 0; k < ctx.phases.size(); ++k) {
    require_distinct(theta, ctx.phases[k], "a zero");
    const double weight = (k == ctx.fixed || k == ctx.tracked) ? 0.5 : 1.0;
    sum += weight * cot_half(ctx.phases[k] - theta);
  }
  return sum;
}

double W_discrete(std::size_t j, const MotionContext& ctx) {
  const MassState& m = ctx.masses.at(j);
  for (double ph : ctx.phases)
    if (circular_distance(m.omega, ph) < kCollisionTol) throw PoleError("mass location collides with a zero");
  const double s = s_factor(m.omega, ctx.phi(), ctx.theta0());
  if (m.domega == 0.0) return s * m.dgamma;
  return s * m.dgamma - m.gamma * s * S_sum(m.omega, ctx) * m.domega;
}

double s_conjugate(double theta, double phi) {
  const double den = std::cos(phi) - std::cos(theta);
  if (std::fabs(den) < kPoleTol) throw PoleError("cos(theta) equals cos(phi)");
  return 0.5 / den;
}

double S_conjugate(double theta, const MotionContext& ctx) {
  const double phi = ctx.phi();
  const double den = std::cos(theta) - std::cos(phi);
  if (std::fabs(den) < kPoleTol) throw PoleError("cos(theta) equals cos(phi)");
  double sum = std::sin(theta) / den;
  for (std::size_t k = 0; k < ctx.phases.size(); ++k) {
    if (k == ctx.fixed || k == ctx.tracked) continue;
    require_distinct(theta, ctx.phases[k], "a zero");
    sum += cot_half(ctx.phases[k] - theta);
  }
  return sum;
}

bool is_conjugate_pair(const MotionContext& ctx, double tol) {
  const double sum = reduce_angle(ctx.phi() + ctx.theta0(), -std::numbers::pi);
  const double phi = reduce_angle(ctx.phi(), -std::numbers::pi);
  return std::fabs(sum) <= tol && phi > 0.0 && phi < std::numbers::pi;
}

double W_conjugate(std::size_t j, const MotionContext& ctx) {
  if (!is_conjugate_pair(ctx)) throw ValidationError("tracked zero and its partner are not a conjugate pair in (0, pi)");
  const MassState& m = ctx.masses.at(j);
  for (double ph : ctx.phases)
    if (circular_distance(m.omega, ph) < kCollisionTol) throw PoleError("mass location collides with a zero");
  const double s = s_conjugate(m.omega, ctx.phi());
  if (m.domega == 0.0) return s * m.dgamma;
  return s * m.dgamma - m.gamma * s * S_conjugate(m.omega, ctx) * m.domega;
}

double W_continuous(double theta, const MotionContext& ctx) {
  if (!ctx.has_continuous_part()) throw ValidationError("measure has no continuous part");
  const double s = s_factor(theta, ctx.phi(), ctx.theta0());
  return s * (ctx.log_rate(theta) - ctx.log_rate(ctx.phi()));
}

double W_mixed(std::size_t j, const MotionContext& ctx) {
  const double base = W_discrete(j, ctx);
  if (!ctx.has_continuous_part()) return base;
  const MassState& m = ctx.masses.at(j);
  const double f_phi = ctx.log_rate(ctx.phi());
  return base - m.gamma * s_factor(m.omega, ctx.phi(), ctx.theta0()) * f_phi;
}

double collision_distance(const MotionContext& ctx) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& m : ctx.masses)
    for (double ph : ctx.phases) d = std::min(d, circular_distance(m.omega, ph));
  return d;
}

VerdictReport verdict(const MotionContext& ctx, Theorem theorem) {
  VerdictReport r;
  r.theorem = theorem;

  if (theorem != Theorem::t23 && ctx.has_continuous_part()) {
    r.applicable = false;
    r.note = "theorem requires a purely discrete measure";
    return r;
  }
  if (theorem == Theorem::t22 && !is_conjugate_pair(ctx)) {
    r.applicable = false;
    r.note = "tracked zero has no conjugate partner with phase in (0, pi)";
    return r;
  }
  if (collision_distance(ctx) <= kCollisionTol) {
    r.collision = true;
    r.note = "mass location collides with a zero";
    return r;
  }

  for (std::size_t j = 0; j < ctx.masses.size(); ++j) {
    switch (theorem) {
      case Theorem::t21: r.w.push_back(W_discrete(j, ctx)); break;
      case Theorem::t22: r.w.push_back(W_conjugate(j, ctx)); break;
      case Theorem::t23: r.w.push_back(W_mixed(j, ctx)); break;
    }
  }

  std::vector<double> wc;
  if (theorem == Theorem::t23 && ctx.has_continuous_part()) {
    const double theta0 = ctx.theta0();
    const int n = ctx.nodes;
    double prev_f = 0.0;
    double f_scale = 0.0;
    std::vector<double> fs;
    for (int i = 0; i < n; ++i) {
      const double theta = theta0 + kTwoPi * (i + 0.5) / n;
      const double f = ctx.log_rate(theta);
      fs.push_back(f);
      f_scale = std::max(f_scale, std::fabs(f));
      if (circular_distance(theta, ctx.phi()) > 1e-9) wc.push_back(W_continuous(theta, ctx));
    }
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        const double df = fs[i] - prev_f;
        if (df < -kNonnegTol * (1.0 + f_scale)) r.f_nondecreasing = false;
        if (df > kNonnegTol * (1.0 + f_scale)) r.f_nonincreasing = false;
      }
      prev_f = fs[i];
    }
    if (!wc.empty()) {
      r.continuous_min = *std::min_element(wc.begin(), wc.end());
      r.continuous_max = *std::max_element(wc.begin(), wc.end());
    }
  }

  double wmax_abs = 0.0;
  for (double w : r.w) wmax_abs = std::max(wmax_abs, std::fabs(w));
  const double cmax_abs = std::max(std::fabs(r.continuous_min), std::fabs(r.continuous_max));
  r.scale = wmax_abs + cmax_abs;

  if (wmax_abs <= kStationaryTol && cmax_abs <= kStationaryTol) {
    r.verdict = Verdict::stationary;
    return r;
  }

  auto all_signed = [&](double sign) {
    for (double w : r.w)
      if (sign * w < -kNonnegTol * r.scale) return false;
    for (double w : wc)
      if (sign * w < -kNonnegTol * r.scale) return false;
    double top = -std::numeric_limits<double>::infinity();
    for (double w : r.w) top = std::max(top, sign * w);
    for (double w : wc) top = std::max(top, sign * w);
    return top > kStrictTol * r.scale;
  };

  if (r.f_nondecreasing && all_signed(1.0)) {
    r.verdict = Verdict::ccw;
  } else if (r.f_nonincreasing && all_signed(-1.0)) {
    r.verdict = Verdict::cw;
    r.mirrored = true;
  } else {
    r.note = "sign hypotheses fail";
  }
  return r;
}

}  // namespace popuc
