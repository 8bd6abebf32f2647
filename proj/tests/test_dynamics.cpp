#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "popuc/dynamics.hpp"
#include "popuc/error.hpp"
#include "popuc/oracles.hpp"

using namespace popuc;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

SweepConfig lebesgue_mass(ZeroPolicy policy) {
  SweepConfig cfg;
  cfg.measure.ac = ACWeight::lebesgue(parse("1 - t"));
  cfg.measure.masses.emplace_back(parse("t"), parse("0"));
  cfg.t_start = 0.05;
  cfg.t_stop = 0.95;
  cfg.steps = 19;
  cfg.degree = 5;
  cfg.policy = policy;
  return cfg;
}

SweepConfig discrete_config() {
  SweepConfig cfg;
  cfg.measure.masses.emplace_back(parse("1 + 0.2*t"), parse("0.3 + 0.1*t"));
  cfg.measure.masses.emplace_back(parse("0.8"), parse("1.6 - 0.2*t"));
  cfg.measure.masses.emplace_back(parse("0.5 + 0.5*t"), parse("2.9"));
  cfg.measure.masses.emplace_back(parse("1.2 - 0.3*t"), parse("4.1 + 0.15*t"));
  cfg.measure.masses.emplace_back(parse("0.6"), parse("5.3 + 0.1*t"));
  cfg.degree = 5;
  cfg.theorem = Theorem::t21;
  cfg.policy = ZeroPolicy::fix_zero(std::polar(1.0, 3.5));
  cfg.t_start = 0.0;
  cfg.t_stop = 1.0;
  cfg.steps = 11;
  return cfg;
}

/// Sorted slots read as chain indices form a rotation of 0..m-1.
bool cyclic_order_preserved(const Trajectory& traj) {
  const std::size_t m = traj.zero_count();
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    std::vector<std::size_t> chain_at(m);
    for (std::size_t k = 0; k < m; ++k) chain_at[traj.slot[i][k]] = k;
    for (std::size_t s = 0; s < m; ++s)
      if (chain_at[s] != (chain_at[0] + s) % m) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("config checks") {
  SweepConfig cfg = lebesgue_mass(ZeroPolicy::fix_b(C(1, 0)));
  CHECK_NOTHROW(cfg.check());
  cfg.steps = 2;
  CHECK_THROWS_AS(cfg.check(), ValidationError);
  cfg.steps = 19;
  cfg.h = 0.1;
  CHECK_THROWS_AS(cfg.check(), ValidationError);
  cfg.h = 1e-5;
  cfg.degree = 1;
  CHECK_THROWS_AS(cfg.check(), ValidationError);
  cfg.degree = 5;
  cfg.t_stop = cfg.t_start;
  CHECK_THROWS_AS(cfg.check(), ValidationError);
  const std::vector<double> g = lebesgue_mass(ZeroPolicy::fix_b(C(1, 0))).grid();
  CHECK(g.size() == 19);
  CHECK(g.front() == 0.05);
  CHECK(g.back() == doctest::Approx(0.95));
}

TEST_CASE("t-independent measure gives constant trajectories") {
  SweepConfig cfg;
  cfg.measure.ac = ACWeight::lebesgue(parse("1"));
  cfg.degree = 5;
  cfg.steps = 10;
  cfg.policy = ZeroPolicy::fix_b(C(1, 0));
  const Trajectory traj = sweep(cfg);
  REQUIRE(traj.zero_count() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    for (double phi : traj.chains[k]) CHECK(std::fabs(phi - traj.chains[k][0]) < 1e-14);
    for (double v : fd_velocity(traj, k)) CHECK(std::fabs(v) < 1e-12);
    CHECK(std::fabs(std::remainder(traj.chains[k][0], 2 * kPi / 5)) < 1e-12);
  }
}

TEST_CASE("Lebesgue plus mass with a zero fixed at 1 does not move") {
  const SweepConfig cfg = lebesgue_mass(ZeroPolicy::fix_zero(C(1, 0)));
  const Trajectory traj = sweep(cfg);
  for (double t : cfg.grid()) CHECK(std::abs(solve_point(cfg, t).popuc.b - 1.0) < 1e-12);
  REQUIRE(traj.zero_count() == 5);
  for (std::size_t k = 0; k < traj.zero_count(); ++k)
    for (double phi : traj.chains[k]) CHECK(std::fabs(phi - traj.chains[k][0]) <= 1e-8);
}

TEST_CASE("Bernstein-Szego sweep keeps the zero at i") {
  SweepConfig cfg = scenario_config(ScenarioId::bs_mass_gamma);
  cfg.steps = 100;
  const Trajectory traj = sweep(cfg);
  REQUIRE(traj.fixed_chain.has_value());
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const ZeroSet& zs = traj.sets[i];
    REQUIRE(zs.fixed_index.has_value());
    CHECK(zs.residuals[*zs.fixed_index] <= 1e-9);
    CHECK(std::abs(zs.zero(*zs.fixed_index) - C(0, 1)) < 1e-12);
    CHECK(traj.max_jump < 0.5 * zs.min_gap);
  }
  CHECK(cyclic_order_preserved(traj));
  for (double phi : traj.chains[*traj.fixed_chain]) CHECK(phi == doctest::Approx(kPi / 2));
}

TEST_CASE("finite-difference velocities") {
  Trajectory traj;
  traj.t = {0.0, 0.1, 0.25, 0.4};
  traj.chains = {{0.0, 0.1, 0.25, 0.4}, {1.0, 1.0, 1.0, 1.0}};
  for (double v : fd_velocity(traj, 0)) CHECK(std::fabs(v - 1.0) < 1e-10);
  for (double v : fd_velocity(traj, 1)) CHECK(v == 0.0);
  CHECK_THROWS_AS(fd_velocity(traj, 2), ValidationError);
}

TEST_CASE("matching survives the branch cut") {
  SweepConfig cfg;
  cfg.measure.ac = ACWeight::lebesgue(parse("1"));
  cfg.degree = 3;
  cfg.policy = ZeroPolicy::fix_zero(C(1, 0));
  // Lebesgue zeros are rotated cube roots of conj(b); rotate b instead by a moving mass
  cfg.measure.masses.emplace_back(parse("0.5"), parse("t"));
  cfg.t_start = 0.0;
  cfg.t_stop = 2 * kPi;
  cfg.steps = 200;
  const Trajectory traj = sweep(cfg);
  CHECK(cyclic_order_preserved(traj));
  for (std::size_t k = 0; k < traj.zero_count(); ++k)
    for (std::size_t i = 1; i < traj.t.size(); ++i) CHECK(std::fabs(traj.chains[k][i] - traj.chains[k][i - 1]) < 0.5);
}

TEST_CASE("matching guard trips on a coarse grid") {
  SweepConfig cfg;
  cfg.measure.ac = ACWeight::lebesgue(parse("1"));
  cfg.degree = 6;
  cfg.policy = ZeroPolicy::fix_zero(C(1, 0));
  cfg.measure.masses.emplace_back(parse("20"), parse("t"));
  cfg.t_start = 0.0;
  cfg.t_stop = 6.0;
  cfg.steps = 3;
  CHECK_THROWS_AS(sweep(cfg), MatchingError);
}

TEST_CASE("degenerate measure aborts with the offending t") {
  SweepConfig cfg;
  cfg.measure.masses.emplace_back(parse("1"), parse("0"));
  cfg.measure.masses.emplace_back(parse("1"), parse("2"));
  cfg.degree = 4;
  CHECK_THROWS_AS(sweep(cfg), DegenerateMeasureError);
  try {
    solve_point(cfg, 0.5);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("t=0.5") != std::string::npos);
  }
}

TEST_CASE("balance for a constant measure") {
  SweepConfig cfg;
  cfg.measure.masses.emplace_back(parse("1"), parse("0.5"));
  cfg.measure.masses.emplace_back(parse("1"), parse("2.0"));
  cfg.measure.masses.emplace_back(parse("1"), parse("3.5"));
  cfg.measure.masses.emplace_back(parse("1"), parse("5.0"));
  cfg.degree = 3;
  cfg.theorem = Theorem::t21;
  cfg.policy = ZeroPolicy::fix_zero(std::polar(1.0, 1.2));
  const PipelinePoint pt = solve_point(cfg, 0.5);
  for (std::size_t k = 0; k < pt.zeros.size(); ++k) {
    if (k == *pt.zeros.fixed_index) continue;
    const BalanceEntry e = balance_check(cfg, 0.5, k);
    CHECK(e.C > 0.0);
    CHECK(std::fabs(e.lhs) < 1e-12);
    CHECK(std::fabs(e.rhs) < 1e-12);
  }
}

TEST_CASE("balance on a discrete sweep and sign agreement") {
  const SweepConfig cfg = discrete_config();
  for (double t : cfg.grid()) {
    const PointAnalysis a = analyze_point(cfg, solve_point(cfg, t));
    REQUIRE(a.fixed.has_value());
    CHECK(a.tracked.size() == 4);
    for (const auto& ta : a.tracked) {
      REQUIRE(ta.balance.has_value());
      CHECK(ta.balance->C > 0.0);
      CHECK(ta.balance->mismatch <= 1e-5);
      if (std::fabs(ta.balance->rhs) > 1e-8 * std::max(1.0, ta.report.scale))
        CHECK((ta.velocity > 0) == (ta.balance->rhs > 0));
      if (ta.report.verdict == Verdict::ccw) CHECK(ta.velocity > 0);
      if (ta.report.verdict == Verdict::cw) CHECK(ta.velocity < 0);
      if (ta.report.verdict == Verdict::stationary) CHECK(std::fabs(ta.velocity) <= 1e-8);
    }
  }
}

TEST_CASE("mixed balance, Lebesgue plus mass") {
  const SweepConfig cfg = lebesgue_mass(ZeroPolicy::fix_zero(C(0, 1)));
  const PipelinePoint pt = solve_point(cfg, 0.3);
  CHECK(pt.zeros.phases.front() == doctest::Approx(kPi / 2));
  for (std::size_t k = 1; k < pt.zeros.size(); ++k) {
    const BalanceEntry e = balance_check(cfg, 0.3, k);
    CHECK(e.mismatch <= 1e-5);
  }
}

TEST_CASE("mixed balance with a t-dependent weight shape") {
  SweepConfig cfg;
  cfg.measure.ac = ACWeight::custom(parse("1 + 0.5*cos(theta - t)"));
  cfg.measure.masses.emplace_back(parse("0.4 + 0.2*t"), parse("2.5"));
  cfg.degree = 5;
  cfg.theorem = Theorem::t23;
  cfg.policy = ZeroPolicy::fix_zero(std::polar(1.0, 0.3));
  cfg.nodes = 1024;
  const PipelinePoint pt = solve_point(cfg, 0.7);
  const PointAnalysis a = analyze_point(cfg, pt);
  REQUIRE(a.tracked.size() == 4);
  for (const auto& ta : a.tracked) {
    REQUIRE(ta.balance.has_value());
    CHECK(ta.balance->mismatch <= 1e-5);
  }
}

TEST_CASE("conjugate pair balance") {
  SweepConfig cfg;
  for (double w : {0.7, 1.9}) {
    cfg.measure.masses.emplace_back(parse("0.5 + 0.3*t"), Expr::constant(w));
    cfg.measure.masses.emplace_back(parse("0.5 + 0.3*t"), Expr::constant(-w));
  }
  cfg.measure.masses.emplace_back(parse("0.8"), parse("pi"));
  cfg.degree = 5;
  cfg.theorem = Theorem::t22;
  cfg.policy = ZeroPolicy::fix_b(C(1, 0));
  const PointAnalysis a = analyze_point(cfg, solve_point(cfg, 0.4));
  REQUIRE(a.tracked.size() == 2);
  for (const auto& ta : a.tracked) {
    CHECK(ta.report.applicable);
    REQUIRE(ta.balance.has_value());
    CHECK(ta.balance->mismatch <= 1e-5);
  }
}

TEST_CASE("fixed zero under a fixed b") {
  const SweepConfig cfg = scenario_config(ScenarioId::lebesgue_mass_b);
  const PipelinePoint pt = solve_point(cfg, 0.5);
  const auto f = fixed_zero_index(cfg, pt);
  REQUIRE(f.has_value());
  CHECK(pt.zeros.phases[*f] == doctest::Approx(kPi));
  // P(z) = z - conj(b) at every fourth root of unity other than 1, so b = i pins -i
  SweepConfig quarter = cfg;
  quarter.policy = ZeroPolicy::fix_b(C(0, 1));
  const PipelinePoint qp = solve_point(quarter, 0.5);
  const auto fq = fixed_zero_index(quarter, qp);
  REQUIRE(fq.has_value());
  CHECK(std::abs(qp.zeros.zero(*fq) - C(0, -1)) < 1e-9);
  SweepConfig moving = cfg;
  moving.policy = ZeroPolicy::fix_b(std::polar(1.0, 0.7));
  CHECK_FALSE(fixed_zero_index(moving, solve_point(moving, 0.5)).has_value());
}

TEST_CASE("Lebesgue plus mass velocities follow the closed-form sign") {
  const SweepConfig cfg = scenario_config(ScenarioId::lebesgue_mass_b);
  const Trajectory traj = sweep(cfg);
  const double theta0 = kPi;
  for (std::size_t k = 0; k < traj.zero_count(); ++k) {
    if (traj.fixed_chain && k == *traj.fixed_chain) continue;
    const std::vector<double> v = fd_velocity(traj, k);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      const double phi = reduce_angle(traj.chains[k][i], theta0);
      const double w0 = oracles::w0_lebesgue(phi, theta0, traj.t[i]);
      CHECK((v[i] > 0) == (w0 > 0));
    }
  }
}
