#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "popuc/expr.hpp"

namespace popuc {

/// Default trapezoid resolution for custom weights; POPUC_QUAD_NODES overrides.
constexpr int kDefaultQuadratureNodes = 4096;
int default_quadrature_nodes();

/// Circular distance between two angles, in [0, pi].
double circular_distance(double a, double b);
/// Reduce an angle into [start, start + 2pi).
double reduce_angle(double angle, double start);

/// Dirac mass gamma(t) * delta(theta - omega(t)).
class MassPoint {
 public:
  /// Both expressions may only depend on t.
  MassPoint(Expr gamma, Expr omega);

  const Expr& gamma() const { return gamma_; }
  const Expr& omega() const { return omega_; }
  const Expr& dgamma() const { return dgamma_; }
  const Expr& domega() const { return domega_; }

 private:
  Expr gamma_, omega_;
  Expr dgamma_, domega_;
};

/// Absolutely continuous part w(theta; t) dtheta/2pi.
class ACWeight {
 public:
  enum class Kind { none, lebesgue, bernstein_szego, custom };

  static ACWeight none();
  static ACWeight lebesgue(Expr scale);
  /// scale(t) (1 - |lambda|^2) / |1 - lambda e^{i theta}|^2, |lambda| < 1.
  static ACWeight bernstein_szego(std::complex<double> lambda, Expr scale);
  /// Arbitrary w(theta; t); moments by trapezoid quadrature.
  static ACWeight custom(Expr w, double theta0 = 0.0);

  Kind kind() const { return kind_; }
  bool present() const { return kind_ != Kind::none; }
  std::complex<double> lambda() const { return lambda_; }
  const Expr& scale() const { return scale_; }
  const Expr& w() const { return w_; }
  double theta0() const { return theta0_; }

  /// Density w(theta; t) against dtheta/2pi.
  double density(double theta, double t) const;
  /// d/dt w(theta; t).
  double density_dt(double theta, double t) const;
  /// f(theta; t) = (dw/dt) / w.
  double log_rate(double theta, double t) const;
  /// True when f(theta; t) cannot depend on theta.
  bool log_rate_is_uniform() const { return kind_ != Kind::custom; }

 private:
  Kind kind_ = Kind::none;
  std::complex<double> lambda_{0.0, 0.0};
  Expr scale_;
  Expr dscale_;
  Expr w_;
  Expr dw_;
  double theta0_ = 0.0;
};

struct Measure {
  ACWeight ac = ACWeight::none();
  std::vector<MassPoint> masses;
};

/// Masses evaluated at a given t, with exact derivatives.
struct MassState {
  double gamma = 0.0;
  double omega = 0.0;
  double dgamma = 0.0;
  double domega = 0.0;
};

std::vector<MassState> mass_states(const Measure& m, double t);

/// Trigonometric moments c_k = int e^{-ik theta} dmu, k = -K..K.
/// Only c_0..c_K are stored; negative orders are conjugates by construction.
class MomentSequence {
 public:
  MomentSequence(double t, Eigen::VectorXcd nonnegative);

  double t() const { return t_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  std::complex<double> operator()(int k) const { return k >= 0 ? c_(k) : std::conj(c_(-k)); }
  double total_mass() const { return c_(0).real(); }

 private:
  double t_;
  Eigen::VectorXcd c_;
};

/// Throws ValidationError when the measure is invalid at t, NumericalError
/// when custom-weight quadrature does not settle.
MomentSequence moments(const Measure& m, double t, int K, int nodes = default_quadrature_nodes());

/// Composite trapezoid value of int e^{-ik theta} w(theta; t) dtheta/2pi over
/// [theta0, theta0 + 2pi). Works for every weight kind.
std::complex<double> quadrature_moment(const ACWeight& w, double t, int k, int nodes);

struct Diagnostics {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

/// Pure report: negative weights, coincident masses, vanishing total mass,
/// invalid continuous part.
Diagnostics validate(const Measure& m, double t, int nodes = 256);

}  // namespace popuc
