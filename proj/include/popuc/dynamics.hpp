#pragma once

#include <optional>
#include <vector>

#include "popuc/measure.hpp"
#include "popuc/opuc.hpp"
#include "popuc/popuc.hpp"
#include "popuc/predicates.hpp"

namespace popuc {

/// How b(t) is chosen at each t.
struct ZeroPolicy {
  enum class Kind { fixed_xi, fixed_b };
  Kind kind = Kind::fixed_b;
  Complex value{1.0, 0.0};

  static ZeroPolicy fix_zero(Complex xi) { return {Kind::fixed_xi, xi}; }
  static ZeroPolicy fix_b(Complex b) { return {Kind::fixed_b, b}; }
};

struct SweepConfig {
  Measure measure;
  double t_start = 0.0;
  double t_stop = 1.0;
  int steps = 3;
  int degree = 2;  ///< degree of the POPUC, n + 1
  ZeroPolicy policy;
  double h = 1e-5;
  Theorem theorem = Theorem::t23;
  int nodes = default_quadrature_nodes();
  /// Phase window start; defaults to arg(xi) for fixed_xi and -pi otherwise.
  std::optional<double> theta_ref;

  std::vector<double> grid() const;
  double window_start() const;
  /// Throws ValidationError on steps < 3, h above half the spacing, degree < 2.
  void check() const;
};

/// One pass of moments -> OPUC -> b -> POPUC -> zeros.
struct PipelinePoint {
  double t = 0.0;
  MomentSequence moments;
  OpucFamily opuc;
  PopucInstance popuc;
  ZeroSet zeros;
};

PipelinePoint solve_point(const SweepConfig& cfg, double t);

struct Trajectory {
  std::vector<double> t;
  std::vector<ZeroSet> sets;
  /// slot[i][k]: index within sets[i] of trajectory k.
  std::vector<std::vector<std::size_t>> slot;
  /// chains[k][i]: unwrapped phase of trajectory k at t[i].
  std::vector<std::vector<double>> chains;
  double max_jump = 0.0;
  std::optional<std::size_t> fixed_chain;

  std::size_t zero_count() const { return chains.size(); }
};

/// Solves every grid point and matches zeros between consecutive t by
/// nearest circular phase. Throws MatchingError when a matched phase jumps
/// by half the previous minimum gap or more.
Trajectory sweep(const SweepConfig& cfg);

/// Central differences of chain k on interior points, one-sided at the ends.
std::vector<double> fd_velocity(const Trajectory& traj, std::size_t k);

/// dphi/dt for every zero of `zs` (the zero set at t) from fresh solves at t +- h.
std::vector<double> local_velocities(const SweepConfig& cfg, double t, const ZeroSet& zs);

/// Index of the zero held fixed at t: the prescribed one under fixed_xi, the
/// zero that persists at t +- h under fixed_b.
std::optional<std::size_t> fixed_zero_index(const SweepConfig& cfg, const PipelinePoint& pt);

struct BalanceEntry {
  double t = 0.0;
  std::size_t tracked = 0;
  double phase = 0.0;
  double C = 0.0;     ///< denominator integral (positive)
  double dphi = 0.0;  ///< central difference with step h
  double lhs = 0.0;   ///< C * dphi/dt
  double rhs = 0.0;   ///< weighted W sum (plus continuous integral)
  double mismatch = 0.0;
};

/// C(t) dphi/dt against the W-weighted right-hand side of the theorem in force.
BalanceEntry balance_check(const SweepConfig& cfg, double t, std::size_t tracked);

/// Same, reusing a solved point and precomputed velocities.
BalanceEntry balance_check(const SweepConfig& cfg, const PipelinePoint& pt, std::size_t fixed,
                           std::size_t tracked, double dphi);

/// Verdict and balance for every movable zero at one t.
struct TrackedAnalysis {
  std::size_t index = 0;
  double phase = 0.0;
  double velocity = 0.0;
  VerdictReport report;
  std::optional<BalanceEntry> balance;
};

struct PointAnalysis {
  double t = 0.0;
  std::optional<std::size_t> fixed;
  std::vector<TrackedAnalysis> tracked;
};

PointAnalysis analyze_point(const SweepConfig& cfg, const PipelinePoint& pt);

}  // namespace popuc
