#include "popuc/measure.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "popuc/error.hpp"

namespace popuc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCoincidenceTol = 1e-9;

void require_t_only(const Expr& e, const char* what) {
  if (e.depends_on(Variable::theta))
    throw ValidationError(std::string(what) + " may only depend on t: " + e.to_string());
}
}  // namespace

int default_quadrature_nodes() {
  if (const char* env = std::getenv("POPUC_QUAD_NODES")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 16) return static_cast<int>(v);
  }
  return kDefaultQuadratureNodes;
}

double circular_distance(double a, double b) {
  double d = std::fmod(std::fabs(a - b), kTwoPi);
  return d > std::numbers::pi ? kTwoPi - d : d;
}

double reduce_angle(double angle, double start) {
  double r = std::fmod(angle - start, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return start + r;
}

MassPoint::MassPoint(Expr gamma, Expr omega) : gamma_(std::move(gamma)), omega_(std::move(omega)) {
  require_t_only(gamma_, "mass weight");
  require_t_only(omega_, "mass location");
  dgamma_ = differentiate(gamma_, Variable::t);
  domega_ = differentiate(omega_, Variable::t);
}

ACWeight ACWeight::none() { return ACWeight{}; }

ACWeight ACWeight::lebesgue(Expr scale) {
  require_t_only(scale, "lebesgue scale");
  ACWeight w;
  w.kind_ = Kind::lebesgue;
  w.dscale_ = differentiate(scale, Variable::t);
  w.scale_ = std::move(scale);
  return w;
}

ACWeight ACWeight::bernstein_szego(std::complex<double> lambda, Expr scale) {
  if (!(std::abs(lambda) < 1.0)) throw ValidationError("bernstein_szego requires |lambda| < 1");
  require_t_only(scale, "bernstein_szego scale");
  ACWeight w;
  w.kind_ = Kind::bernstein_szego;
  w.lambda_ = lambda;
  w.dscale_ = differentiate(scale, Variable::t);
  w.scale_ = std::move(scale);
  return w;
}

ACWeight ACWeight::custom(Expr weight, double theta0) {
  ACWeight w;
  w.kind_ = Kind::custom;
  w.dw_ = differentiate(weight, Variable::t);
  w.w_ = std::move(weight);
  w.theta0_ = theta0;
  return w;
}

double ACWeight::density(double theta, double t) const {
  switch (kind_) {
    case Kind::none: return 0.0;
    case Kind::lebesgue: return scale_.eval_t(t);
    case Kind::bernstein_szego: {
      const double l2 = std::norm(lambda_);
      const double den = std::norm(1.0 - lambda_ * std::polar(1.0, theta));
      return scale_.eval_t(t) * (1.0 - l2) / den;
    }
    case Kind::custom: return w_.eval(Bindings::at(t, theta));
  }
  return 0.0;
}

double ACWeight::density_dt(double theta, double t) const {
  switch (kind_) {
    case Kind::none: return 0.0;
    case Kind::lebesgue: return dscale_.eval_t(t);
    case Kind::bernstein_szego: {
      const double l2 = std::norm(lambda_);
      const double den = std::norm(1.0 - lambda_ * std::polar(1.0, theta));
      return dscale_.eval_t(t) * (1.0 - l2) / den;
    }
    case Kind::custom: return dw_.eval(Bindings::at(t, theta));
  }
  return 0.0;
}

double ACWeight::log_rate(double theta, double t) const {
  const double w = density(theta, t);
  if (!(w > 0.0)) {
    std::ostringstream os;
    os << "continuous weight vanishes at theta=" << theta << ", t=" << t;
    throw NumericalError(os.str());
  }
  return density_dt(theta, t) / w;
}

std::vector<MassState> mass_states(const Measure& m, double t) {
  std::vector<MassState> out;
  out.reserve(m.masses.size());
  for (const auto& p : m.masses) {
    out.push_back({p.gamma().eval_t(t), p.omega().eval_t(t), p.dgamma().eval_t(t), p.domega().eval_t(t)});
  }
  return out;
}

MomentSequence::MomentSequence(double t, Eigen::VectorXcd nonnegative) : t_(t), c_(std::move(nonnegative)) {
  if (c_.size() == 0) throw std::invalid_argument("MomentSequence: empty");
  c_(0) = c_(0).real();
}

std::complex<double> quadrature_moment(const ACWeight& w, double t, int k, int nodes) {
  if (nodes < 16) throw ValidationError("quadrature needs at least 16 nodes");
  if (!w.present()) return 0.0;
  std::complex<double> acc = 0.0;
  const double h = kTwoPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double theta = w.theta0() + h * i;
    const double v = w.density(theta, t);
    if (!std::isfinite(v)) throw NonFiniteError("weight is non-finite at a quadrature node");
    acc += v * std::polar(1.0, -k * theta);
  }
  return acc / static_cast<double>(nodes);
}

namespace {

// All c_0..c_K of a custom weight from one pass over the nodes, with a
// half-grid comparison as the convergence check.
Eigen::VectorXcd custom_moments(const ACWeight& w, double t, int K, int nodes) {
  if (nodes < 16) throw ValidationError("quadrature needs at least 16 nodes");
  if (4 * K >= nodes) {
    throw ValidationError("quadrature nodes (" + std::to_string(nodes) + ") too few for moment order " +
                          std::to_string(K));
  }
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(K + 1);
  Eigen::VectorXcd half = Eigen::VectorXcd::Zero(K + 1);
  const double h = kTwoPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double theta = w.theta0() + h * i;
    const double v = w.density(theta, t);
    if (!std::isfinite(v)) throw NonFiniteError("weight is non-finite at a quadrature node");
    const std::complex<double> step = std::polar(1.0, -theta);
    std::complex<double> e = 1.0;
    for (int k = 0; k <= K; ++k) {
      full(k) += v * e;
      if (i % 2 == 0) half(k) += v * e;
      e *= step;
    }
  }
  full /= static_cast<double>(nodes);
  half /= static_cast<double>(nodes / 2);
  const double scale = std::max(std::abs(full(0)), 1e-300);
  if ((full - half).cwiseAbs().maxCoeff() > 1e-6 * scale) {
    throw NumericalError("custom weight quadrature did not converge with " + std::to_string(nodes) + " nodes");
  }
  return full;
}

}  // namespace

MomentSequence moments(const Measure& m, double t, int K, int nodes) {
  if (K < 0) throw ValidationError("moment order must be nonnegative");
  const Diagnostics d = validate(m, t, std::min(nodes, 256));
  if (!d.ok()) {
    std::string msg = "invalid measure at t=" + std::to_string(t) + ":";
    for (const auto& issue : d.issues) msg += " " + issue + ";";
    throw ValidationError(msg);
  }

  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(K + 1);
  switch (m.ac.kind()) {
    case ACWeight::Kind::none: break;
    case ACWeight::Kind::lebesgue: c(0) = m.ac.scale().eval_t(t); break;
    case ACWeight::Kind::bernstein_szego: {
      // Poisson kernel expansion: c_k = scale * lambda^k for k >= 0.
      const double s = m.ac.scale().eval_t(t);
      std::complex<double> p = 1.0;
      for (int k = 0; k <= K; ++k) {
        c(k) = s * p;
        p *= m.ac.lambda();
      }
      break;
    }
    case ACWeight::Kind::custom: c = custom_moments(m.ac, t, K, nodes); break;
  }

  for (const auto& s : mass_states(m, t)) {
    const std::complex<double> step = std::polar(1.0, -s.omega);
    std::complex<double> e = 1.0;
    for (int k = 0; k <= K; ++k) {
      c(k) += s.gamma * e;
      e *= step;
    }
  }
  return MomentSequence(t, std::move(c));
}

Diagnostics validate(const Measure& m, double t, int nodes) {
  Diagnostics d;
  double total = 0.0;
  std::vector<double> locations;
  for (std::size_t j = 0; j < m.masses.size(); ++j) {
    try {
      const double g = m.masses[j].gamma().eval_t(t);
      const double w = m.masses[j].omega().eval_t(t);
      if (g < 0.0) d.issues.push_back("mass " + std::to_string(j) + " has negative weight " + std::to_string(g));
      total += g;
      for (std::size_t i = 0; i < locations.size(); ++i) {
        if (circular_distance(locations[i], w) < kCoincidenceTol)
          d.issues.push_back("masses " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
      locations.push_back(w);
    } catch (const Error& e) {
      d.issues.push_back("mass " + std::to_string(j) + ": " + e.what());
      locations.push_back(std::nan(""));
    }
  }

  try {
    switch (m.ac.kind()) {
      case ACWeight::Kind::none: break;
      case ACWeight::Kind::lebesgue:
      case ACWeight::Kind::bernstein_szego: {
        const double s = m.ac.scale().eval_t(t);
        if (s < 0.0) d.issues.push_back("continuous part has negative scale " + std::to_string(s));
        total += s;
        break;
      }
      case ACWeight::Kind::custom: {
        const double h = kTwoPi / nodes;
        double sum = 0.0;
        bool negative = false;
        for (int i = 0; i < nodes; ++i) {
          const double v = m.ac.density(m.ac.theta0() + h * i, t);
          if (!std::isfinite(v)) throw NonFiniteError("custom weight non-finite at a node");
          if (v < 0.0) negative = true;
          sum += v;
        }
        if (negative) d.issues.push_back("custom weight is negative at some quadrature node");
        total += sum / nodes;
        break;
      }
    }
  } catch (const Error& e) {
    d.issues.push_back(std::string("continuous part: ") + e.what());
  }

  if (!(total > 0.0)) d.issues.push_back("total mass vanishes");
  return d;
}

}  // namespace popuc
