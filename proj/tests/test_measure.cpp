#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "popuc/error.hpp"
#include "popuc/measure.hpp"

using namespace popuc;
using C = std::complex<double>;

namespace {

Eigen::MatrixXcd toeplitz(const MomentSequence& ms, int m) {
  Eigen::MatrixXcd T(m + 1, m + 1);
  for (int j = 0; j <= m; ++j)
    for (int k = 0; k <= m; ++k) T(j, k) = ms(j - k);
  return T;
}

Measure masses_at(const std::vector<double>& omegas) {
  Measure m;
  for (double w : omegas) m.masses.emplace_back(Expr::constant(1.0), Expr::constant(w));
  return m;
}

}  // namespace

TEST_CASE("angles") {
  CHECK(circular_distance(0.1, 2 * std::numbers::pi - 0.1) == doctest::Approx(0.2));
  CHECK(circular_distance(1.0, 1.0 + 4 * std::numbers::pi) < 1e-12);
  CHECK(reduce_angle(-0.5, 0.0) == doctest::Approx(2 * std::numbers::pi - 0.5));
  CHECK(reduce_angle(7.0, 1.0) == doctest::Approx(7.0));
  CHECK(reduce_angle(1.0, 1.0) == 1.0);
}

TEST_CASE("Lebesgue moments") {
  Measure m;
  m.ac = ACWeight::lebesgue(parse("1"));
  const MomentSequence ms = moments(m, 0.0, 3);
  CHECK(ms(0) == C(1.0));
  for (int k = 1; k <= 3; ++k) {
    CHECK(ms(k) == C(0.0));
    CHECK(ms(-k) == C(0.0));
  }
}

TEST_CASE("single mass moments") {
  Measure m;
  m.masses.emplace_back(parse("0.5"), parse("0"));
  const MomentSequence ms = moments(m, 0.0, 2);
  for (int k = -2; k <= 2; ++k) CHECK(std::abs(ms(k) - 0.5) < 1e-15);
  CHECK(ms.total_mass() == 0.5);
}

TEST_CASE("Bernstein-Szego moments against quadrature") {
  for (C lambda : {C(0.2, 0.0), C(0.0, -1.0 / 3.0), C(0.5, 0.3)}) {
    const ACWeight w = ACWeight::bernstein_szego(lambda, parse("1 + t"));
    Measure m;
    m.ac = w;
    for (double t : {0.0, 0.5, 1.0}) {
      const MomentSequence ms = moments(m, t, 16);
      for (int k = 0; k <= 16; ++k) CHECK(std::abs(ms(k) - quadrature_moment(w, t, k, 4096)) <= 1e-10);
    }
  }
  // squared-modulus Poisson kernel: c_k = lambda^k
  Measure m;
  m.ac = ACWeight::bernstein_szego(C(0.0, -1.0 / 3.0), parse("1"));
  const MomentSequence ms = moments(m, 0.0, 4);
  for (int k = 0; k <= 4; ++k) {
    CHECK(std::abs(ms(k) - std::pow(C(0.0, -1.0 / 3.0), k)) < 1e-15);
    CHECK(std::abs(ms(k) - quadrature_moment(m.ac, 0.0, k, 4096)) < 1e-12);
  }
}

TEST_CASE("quadrature on pure harmonics") {
  const ACWeight w = ACWeight::lebesgue(parse("1"));
  CHECK(quadrature_moment(w, 0.0, 0, 64) == C(1.0));
  CHECK(std::abs(quadrature_moment(w, 0.0, 5, 64)) < 1e-15);
  const ACWeight bs = ACWeight::bernstein_szego(C(0.4, 0.0), parse("1"));
  CHECK(std::abs(quadrature_moment(bs, 0.0, 1, 1024) - quadrature_moment(bs, 0.0, 1, 4096)) < 1e-13);
  CHECK_THROWS_AS(quadrature_moment(w, 0.0, 1, 8), ValidationError);
}

TEST_CASE("custom weights") {
  Measure m;
  m.ac = ACWeight::custom(parse("1 + 0.5*cos(theta)"));
  const MomentSequence ms = moments(m, 0.0, 4, 1024);
  CHECK(std::abs(ms(0) - 1.0) < 1e-14);
  CHECK(std::abs(ms(1) - 0.25) < 1e-14);
  CHECK(std::abs(ms(-1) - 0.25) < 1e-14);
  CHECK(std::abs(ms(2)) < 1e-14);
  CHECK_THROWS_AS(moments(m, 0.0, 300, 1024), ValidationError);

  Measure bad;
  bad.ac = ACWeight::custom(parse("1/(theta - theta)"));
  CHECK_THROWS_AS(moments(bad, 0.0, 2, 64), Error);

  const ACWeight dep = ACWeight::custom(parse("1 + t*cos(theta)"));
  CHECK(dep.density(0.0, 0.5) == doctest::Approx(1.5));
  CHECK(dep.density_dt(0.0, 0.5) == doctest::Approx(1.0));
  CHECK(dep.log_rate(0.0, 0.5) == doctest::Approx(1.0 / 1.5));
  CHECK_FALSE(dep.log_rate_is_uniform());
  CHECK(ACWeight::lebesgue(parse("1 - t")).log_rate(1.0, 0.5) == doctest::Approx(-2.0));
}

TEST_CASE("Hermitian symmetry is exact") {
  Measure m;
  m.ac = ACWeight::bernstein_szego(C(0.3, 0.4), parse("2"));
  m.masses.emplace_back(parse("1 + t"), parse("2*t"));
  const MomentSequence ms = moments(m, 0.7, 6);
  for (int k = 1; k <= 6; ++k) CHECK(ms(-k) == std::conj(ms(k)));
  CHECK(ms(0).imag() == 0.0);
  CHECK(ms(0).real() > 0.0);
}

TEST_CASE("Toeplitz definiteness tracks the support size") {
  const Measure m = masses_at({0.0, 1.0, 2.0, 3.0, 4.5});
  const MomentSequence ms = moments(m, 0.0, 6);
  for (int deg = 0; deg <= 4; ++deg) CHECK(toeplitz(ms, deg).llt().info() == Eigen::Success);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(toeplitz(ms, 5));
  CHECK(std::fabs(es.eigenvalues().minCoeff()) < 1e-12);
}

TEST_CASE("mass states carry exact derivatives") {
  Measure m;
  m.masses.emplace_back(parse("0.5 + 0.3*t"), parse("sin(t)"));
  const auto s = mass_states(m, 0.2);
  REQUIRE(s.size() == 1);
  CHECK(s[0].gamma == doctest::Approx(0.56));
  CHECK(s[0].dgamma == doctest::Approx(0.3));
  CHECK(s[0].omega == doctest::Approx(std::sin(0.2)));
  CHECK(s[0].domega == doctest::Approx(std::cos(0.2)));
  CHECK_THROWS_AS(MassPoint(parse("theta"), parse("0")), ValidationError);
}

TEST_CASE("validation") {
  const Measure coincident = masses_at({std::numbers::pi / 3, std::numbers::pi / 3});
  CHECK_FALSE(validate(coincident, 0.0).ok());
  CHECK_THROWS_AS(moments(coincident, 0.0, 2), ValidationError);
  CHECK_FALSE(validate(masses_at({0.0, 2 * std::numbers::pi}), 0.0).ok());

  Measure negative;
  negative.masses.emplace_back(parse("t"), parse("0"));
  CHECK_FALSE(validate(negative, -1.0).ok());
  CHECK_THROWS_AS(moments(negative, -1.0, 2), ValidationError);

  Measure lebesgue_mass;
  lebesgue_mass.ac = ACWeight::lebesgue(parse("1 - t"));
  lebesgue_mass.masses.emplace_back(parse("t"), parse("0"));
  CHECK(validate(lebesgue_mass, 0.5).ok());
  CHECK_FALSE(validate(lebesgue_mass, 1.5).ok());

  CHECK_FALSE(validate(Measure{}, 0.0).ok());
  CHECK_THROWS_AS(ACWeight::bernstein_szego(C(1.0, 0.0), parse("1")), ValidationError);

  Measure neg_weight;
  neg_weight.ac = ACWeight::custom(parse("cos(theta)"));
  CHECK_FALSE(validate(neg_weight, 0.0).ok());

  Measure pole;
  pole.masses.emplace_back(parse("1/(1-t)"), parse("0"));
  CHECK_FALSE(validate(pole, 1.0).ok());
}

TEST_CASE("quadrature node count from environment") {
  ::setenv("POPUC_QUAD_NODES", "256", 1);
  CHECK(popuc::default_quadrature_nodes() == 256);
  ::setenv("POPUC_QUAD_NODES", "8", 1);
  CHECK(popuc::default_quadrature_nodes() == popuc::kDefaultQuadratureNodes);
  ::setenv("POPUC_QUAD_NODES", "12x", 1);
  CHECK(popuc::default_quadrature_nodes() == popuc::kDefaultQuadratureNodes);
  ::unsetenv("POPUC_QUAD_NODES");
  CHECK(popuc::default_quadrature_nodes() == popuc::kDefaultQuadratureNodes);
}
