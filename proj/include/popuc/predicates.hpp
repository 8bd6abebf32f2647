#pragma once

#include <functional>
#include <string>
#include <vector>

#include "popuc/measure.hpp"
#include "popuc/popuc.hpp"

namespace popuc {

enum class Theorem { t21, t22, t23 };
enum class Verdict { ccw, cw, stationary, inconclusive };

const char* to_string(Theorem th);
const char* to_string(Verdict v);
Theorem parse_theorem(const std::string& name);

/// Everything the monotonicity functionals need at one value of t.
///
/// `fixed` is the zero held at theta0 (for the conjugate-pair functionals,
/// the partner conj(zeta)); `tracked` is the zero whose motion is predicted.
struct MotionContext {
  std::vector<double> phases;
  std::size_t fixed = 0;
  std::size_t tracked = 0;
  std::vector<MassState> masses;
  /// f(theta; t) = (dw/dt)/w of the continuous part; empty when there is none.
  std::function<double(double)> log_rate;
  /// w(theta; t) of the continuous part; empty when there is none.
  std::function<double(double)> density;
  /// Nodes for checks over the continuous part.
  int nodes = 512;

  double theta0() const { return phases.at(fixed); }
  double phi() const { return phases.at(tracked); }
  bool has_continuous_part() const { return static_cast<bool>(log_rate); }
};

MotionContext make_motion_context(const ZeroSet& zs, const Measure& m, double t, std::size_t fixed,
                                  std::size_t tracked);

/// sin((phi - theta0)/2) / (2 sin((phi - theta)/2) sin((theta0 - theta)/2)).
double s_factor(double theta, double phi, double theta0);

/// Cotangent sum over all zeros, fixed and tracked terms weighted 1/2.
double S_sum(double theta, const MotionContext& ctx);

double W_discrete(std::size_t j, const MotionContext& ctx);

/// 1 / (2 (cos phi - cos theta)).
double s_conjugate(double theta, double phi);
/// sin(theta)/(cos theta - cos phi) + cotangent sum over the other zeros.
double S_conjugate(double theta, const MotionContext& ctx);
/// Throws ValidationError when fixed/tracked are not a conjugate pair with
/// the tracked phase in (0, pi).
double W_conjugate(std::size_t j, const MotionContext& ctx);

double W_continuous(double theta, const MotionContext& ctx);
double W_mixed(std::size_t j, const MotionContext& ctx);

/// True when the tracked/fixed slots hold zeta and conj(zeta) with
/// arg zeta in (0, pi).
bool is_conjugate_pair(const MotionContext& ctx, double tol = 1e-8);
/// Smallest circular distance between any mass location and any zero.
double collision_distance(const MotionContext& ctx);

struct VerdictReport {
  Theorem theorem = Theorem::t21;
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> w;  ///< W_j, W~_j or mixed W_j per mass
  double continuous_min = 0.0;
  double continuous_max = 0.0;
  double scale = 0.0;
  bool applicable = true;
  bool collision = false;
  bool f_nondecreasing = true;
  bool f_nonincreasing = true;
  bool mirrored = false;  ///< CW concluded from sign-flipped hypotheses
  std::string note;
};

VerdictReport verdict(const MotionContext& ctx, Theorem theorem);

}  // namespace popuc
