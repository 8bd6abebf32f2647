#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "popuc/error.hpp"
#include "popuc/opuc.hpp"
#include "popuc/oracles.hpp"
#include "popuc/popuc.hpp"

using namespace popuc;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

MonicPoly lebesgue_mass_q4(double gamma) {
  Measure m;
  m.ac = ACWeight::lebesgue(Expr::constant(1.0 - gamma));
  m.masses.emplace_back(Expr::constant(gamma), Expr::constant(0.0));
  return gram_opuc(moments(m, 0.0, 4), 4).top();
}

PopucInstance instance_from(const Coeffs& c, C b) { return {MonicPoly(c), b, static_cast<int>(c.size()) - 2, {}}; }

/// Zeros of a self-inversive P with P* = -bP from sign changes of a real phase function.
std::vector<double> bisection_zeros(const PopucInstance& p, double theta_ref) {
  const int m = p.p.degree();
  const C u = std::sqrt(-p.b);
  auto F = [&](double th) { return (u * std::polar(1.0, -m * th / 2) * p.p(std::polar(1.0, th))).real(); };
  std::vector<double> out;
  const int samples = 4000;
  double a = theta_ref, fa = F(a);
  for (int k = 1; k <= samples; ++k) {
    double b = theta_ref + 2 * kPi * k / samples, fb = F(b);
    if (fa == 0.0) out.push_back(a);
    else if (fa * fb < 0) {
      double lo = a, hi = b;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (F(lo) * F(mid) <= 0 ? hi : lo) = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return out;
}

}  // namespace

TEST_CASE("Lebesgue POPUC") {
  for (C b : {C(1, 0), C(0, 1), std::polar(1.0, 0.7)}) {
    const PopucInstance p = build_popuc(MonicPoly::monomial(3), b);
    CHECK(p.p.degree() == 4);
    CHECK(p.p[0] == -std::conj(b));
    CHECK(std::abs(p.p[1]) + std::abs(p.p[2]) + std::abs(p.p[3]) == 0.0);
  }
  CHECK_THROWS_AS(build_popuc(MonicPoly::monomial(3), C(1.1, 0.0)), ValidationError);
}

TEST_CASE("Lebesgue plus mass closed form") {
  for (double gamma : {0.1, 0.5, 0.9})
    for (C b : {C(1, 0), C(0, 1), C(-1, 0), std::polar(1.0, 2.0)}) {
      const PopucInstance p = build_popuc(lebesgue_mass_q4(gamma), b);
      const C bb = std::conj(b);
      Coeffs want(6);
      const C mid = -(1.0 - bb) * gamma / (1.0 + 3.0 * gamma);
      want << -bb, mid, mid, mid, mid, 1.0;
      CHECK((p.p.coeffs() - want).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Bernstein-Szego with mass matches the closed form") {
  Measure m;
  const C lambda(0.0, -1.0 / 3.0);
  m.ac = ACWeight::bernstein_szego(lambda, parse("1"));
  m.masses.emplace_back(parse("0.01"), parse("2*pi/3"));
  const MonicPoly q = gram_opuc(moments(m, 0.0, 4), 4).top();
  const MonicPoly want = oracles::bs_mass_opuc(4, lambda, 0.01, 2 * kPi / 3);
  CHECK((q.coeffs() - want.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
  const C b(0.3, 0.4);
  const PopucInstance got = build_popuc(q, b / std::abs(b));
  const PopucInstance ref = build_popuc(want, b / std::abs(b));
  CHECK((got.p.coeffs() - ref.p.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fixing a zero") {
  const MonicPoly q4 = MonicPoly::monomial(4);
  C b = fix_zero_param(q4, C(1, 0));
  CHECK(std::abs(b - 1.0) < 1e-15);
  CHECK(std::abs(build_popuc(q4, b).p(C(1, 0))) < 1e-15);

  b = fix_zero_param(q4, C(0, 1));
  CHECK(std::abs(b - C(0, -1)) < 1e-15);
  CHECK(std::abs(build_popuc(q4, b).p(C(0, 1))) < 1e-12);

  Measure m;
  m.ac = ACWeight::bernstein_szego(C(0.0, -1.0 / 3.0), parse("1"));
  m.masses.emplace_back(parse("t"), parse("2*pi/3"));
  for (double gamma : {0.01, 0.5, 5.0}) {
    const MonicPoly q = gram_opuc(moments(m, gamma, 4), 4).top();
    const PopucInstance p = popuc_with_zero_at(q, C(0, 1));
    CHECK(std::abs(p.p(C(0, 1))) <= 1e-10);
    REQUIRE(p.xi.has_value());
    const ZeroSet zs = zeros_on_circle(p, kPi / 2);
    REQUIRE(zs.fixed_index.has_value());
    CHECK(zs.phases[*zs.fixed_index] == doctest::Approx(kPi / 2));
  }

  // Q* vanishes inside the disk only; a polynomial with a zero of Q* on the circle is degenerate
  Coeffs c(2);
  c << -1.0, 1.0;  // z - 1, reversed 1 - z vanishes at 1
  CHECK_THROWS_AS(fix_zero_param(MonicPoly(c), C(1, 0)), NumericalError);
  CHECK_THROWS_AS(fix_zero_param(q4, C(2, 0)), ValidationError);
}

TEST_CASE("roots of unity") {
  Coeffs c = Coeffs::Zero(6);
  c(0) = -1.0;
  c(5) = 1.0;
  const ZeroSet zs = zeros_on_circle(instance_from(c, C(1, 0)), -kPi);
  REQUIRE(zs.size() == 5);
  const double want[] = {-4 * kPi / 5, -2 * kPi / 5, 0.0, 2 * kPi / 5, 4 * kPi / 5};
  for (int k = 0; k < 5; ++k) CHECK(std::fabs(zs.phases[k] - want[k]) < 1e-12);
  CHECK(zs.min_gap == doctest::Approx(2 * kPi / 5));

  c(0) = 1.0;
  const ZeroSet odd = zeros_on_circle(instance_from(c, C(-1, 0)), 0.0);
  for (int k = 0; k < 5; ++k) CHECK(std::fabs(odd.phases[k] - (2 * k + 1) * kPi / 5) < 1e-12);
}

TEST_CASE("phase window") {
  Coeffs c = Coeffs::Zero(5);
  c(0) = -1.0;
  c(4) = 1.0;
  const ZeroSet zs = zeros_on_circle(instance_from(c, C(1, 0)), kPi / 2);
  CHECK(zs.phases.front() == doctest::Approx(kPi / 2));
  CHECK(zs.phases.back() == doctest::Approx(2 * kPi));
  for (double p : zs.phases) {
    CHECK(p >= kPi / 2);
    CHECK(p < kPi / 2 + 2 * kPi);
  }
  CHECK(zs.nearest(3.1) == 1);
}

TEST_CASE("Aberth against the bisection oracle") {
  const PopucInstance p = build_popuc(lebesgue_mass_q4(0.5), C(-1, 0));
  const ZeroSet zs = zeros_on_circle(p, 0.1);
  const std::vector<double> ref = bisection_zeros(p, 0.1);
  REQUIRE(ref.size() == 5);
  for (int k = 0; k < 5; ++k) CHECK(std::fabs(zs.phases[k] - ref[k]) < 1e-10);
}

TEST_CASE("non-POPUC input is rejected") {
  Coeffs c(3);
  c << 0.25, 0.0, 1.0;  // zeros at +-i/2
  CHECK_THROWS_AS(zeros_on_circle(instance_from(c, C(1, 0)), 0.0), NumericalError);
}

TEST_CASE("Aberth on real-coefficient polynomials") {
  Coeffs c(4);
  c << -6.0, 11.0, -6.0, 1.0;  // (z-1)(z-2)(z-3)
  auto r = aberth_roots(c);
  std::vector<double> re;
  for (C z : r) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  for (int k = 0; k < 3; ++k) CHECK(re[k] == doctest::Approx(k + 1.0));
}

TEST_CASE("random POPUC properties") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Measure m;
    const int masses = trial % 9;
    if (masses < 8 || trial % 3 == 0)
      m.ac = ACWeight::bernstein_szego(std::polar(0.7 * u(rng), 6.0 * u(rng)), Expr::constant(0.3 + u(rng)));
    for (int j = 0; j < masses; ++j)
      m.masses.emplace_back(Expr::constant(0.2 + u(rng)), Expr::constant(2 * kPi * (j + 0.4 * u(rng)) / masses));
    const int n = m.ac.present() ? 1 + trial % 12 : masses - 1;
    const MomentSequence ms = moments(m, 0.0, n + 1);
    const MonicPoly q = gram_opuc(ms, n).top();
    const C b = std::polar(1.0, 2 * kPi * u(rng));
    const PopucInstance p = build_popuc(q, b);

    CHECK((reversed(p.p) + b * p.p.coeffs()).cwiseAbs().maxCoeff() <= 1e-10);

    const ZeroSet zs = zeros_on_circle(p, -kPi);
    CHECK(static_cast<int>(zs.size()) == n + 1);
    CHECK(zs.max_modulus_deviation <= 1e-9);
    CHECK(zs.min_gap > 1e-6);
    for (double r : zs.residuals) CHECK(r <= 1e-9 * p.p.coeffs().cwiseAbs().maxCoeff());

    Coeffs g1(n);
    for (int k = 0; k < n; ++k) g1(k) = C(g(rng), g(rng));
    CHECK(std::abs(inner_product(p.p.coeffs(), shift_up(g1), ms)) <= 1e-9);

    const C zeta = zs.zero(trial % zs.size());
    const Coeffs R = deflate(p.p.coeffs(), zeta);
    Coeffs h(n + 1);
    for (int k = 0; k <= n; ++k) h(k) = C(g(rng), g(rng));
    const C lhs = inner_product(R, h, ms);
    const C rhs = std::conj(horner(h, zeta)) * inner_product(R, Coeffs::Ones(1), ms);
    CHECK(std::abs(lhs - rhs) <= 1e-8);
  }
}
