#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shearlab/fit.hpp"
#include "shearlab/shear.hpp"

using namespace shearlab;

namespace {

double bump1(double t) { return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0; }

// Separable integrals of the default bump, each a 1-d trapezoid rule.
double bump_mass_t() { return oracle::trapezoid(bump1, -1.0, 1.0, 4000); }
double haar_mean_oracle() {
  const BumpParams b;
  double ix = b.x_radius * bump_mass_t();
  double iy = oracle::trapezoid(
      [&](double t) { return bump1(t) * b.log_y_radius / (b.y_center * std::exp(b.log_y_radius * t)); }, -1.0, 1.0,
      4000);
  return 3.0 / std::numbers::pi * ix * iy;
}

}  // namespace

TEST_CASE("bump construction and validation") {
  auto psi = make_bump(psl2z_spec());
  CHECK(psi.k_invariant);
  CHECK(psi.support.has_value());
  CHECK(psi(UTBPoint(0.0, 2.0)) == doctest::Approx(1.0));
  CHECK(psi(UTBPoint(0.0, 0.5)) == doctest::Approx(1.0));  // S image of 2i
  CHECK(psi(UTBPoint(3.0, 2.0)) == doctest::Approx(1.0));
  BumpParams bad;
  bad.x_radius = 0.6;
  CHECK_THROWS_AS(make_bump(psl2z_spec(), bad), std::invalid_argument);
  bad = {};
  bad.y_center = 1.0;
  CHECK_THROWS_AS(make_bump(psl2z_spec(), bad), std::invalid_argument);
}

TEST_CASE("registration accepts automorphic and rejects non-automorphic functions") {
  auto psi = make_bump(psl2z_spec());
  auto rep = register_test_function(psl2z_spec(), psi);
  CHECK(rep.max_automorphy_violation < 1e-7);
  BumpParams ang;
  ang.angular = 0.5;
  CHECK_NOTHROW(register_test_function(psl2z_spec(), make_bump(psl2z_spec(), ang)));
  CHECK_NOTHROW(register_test_function(thin4_spec(), make_bump(thin4_spec())));

  TestFunction raw = psi;
  raw.evaluator = [](const UTBPoint& p) { return std::exp(-(p.x - 0.2) * (p.x - 0.2) - (p.y - 2) * (p.y - 2)); };
  CHECK_THROWS_AS(register_test_function(psl2z_spec(), raw), std::invalid_argument);
}

TEST_CASE("haar mean against separable oracle") {
  auto psi = make_bump(psl2z_spec());
  CHECK(std::abs(haar_mean(psi) - haar_mean_oracle()) < 1e-10);
  CHECK(haar_mean(zero_function(psl2z_spec())) == 0.0);
}

TEST_CASE("mu_T at T = 0 against a direct one-dimensional integral") {
  auto psi = make_bump(psl2z_spec());
  auto s = mu_T(psi, 0.0, 1e-10);
  CHECK(s.converged);
  CHECK(std::abs(s.value - BumpParams{}.log_y_radius * bump_mass_t()) < 1e-9);
}

TEST_CASE("property: mu_T is linear in psi") {
  BumpParams b2;
  b2.x_center = 0.1;
  b2.y_center = 1.6;
  b2.x_radius = 0.2;
  b2.log_y_radius = 0.2;
  auto p1 = make_bump(psl2z_spec()), p2 = make_bump(psl2z_spec(), b2);
  auto comb = linear_combination(2.0, p1, -0.5, p2);
  for (double T : {3.0, 10.0, 30.0}) {
    double a = mu_T(p1, T, 1e-10).value, b = mu_T(p2, T, 1e-10).value, c = mu_T(comb, T, 1e-10).value;
    CHECK(std::abs(c - (2.0 * a - 0.5 * b)) < 1e-8);
  }
  CHECK(mu_T(zero_function(psl2z_spec()), 10.0, 1e-10).value == 0.0);
}

TEST_CASE("mu_T is invariant under the tolerance") {
  auto psi = make_bump(psl2z_spec());
  double a = mu_T(psi, 10.0, 1e-8).value, b = mu_T(psi, 10.0, 1e-11).value;
  CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("strip average at moderate T") {
  auto psi = make_bump(psl2z_spec());
  auto s = mu_T_strip(psi, 10.0, 1e-7);
  CHECK(s.converged);
  CHECK(s.value > 0.0);
  CHECK(std::abs(s.value - mu_T(psi, 10.0, 1e-9).value) < 0.1);
}

TEST_CASE("synthetic regression recovery") {
  std::vector<double> T = {10, 30, 100, 300, 1000}, v;
  for (double t : T) v.push_back(0.25 * std::log(t) - 0.125);
  auto r = fit_equidistribution(T, v);
  CHECK(std::abs(r.slope - 0.25) < 1e-10);
  CHECK(std::abs(r.intercept + 0.125) < 1e-10);
  CHECK_THROWS_AS(fit_equidistribution({10, 20, 30}, {1, 2, 3}), InsufficientDataError);

  std::vector<double> w;
  for (double t : T) w.push_back(0.25 * std::log(t) - 0.125 + 0.3 * std::pow(t, -0.5));
  auto c = fit_equidistribution(T, w, true);
  CHECK(std::abs(c.slope - 0.25) < 1e-6);
  CHECK(std::abs(c.correction_exponent - 0.5) < 1e-4);
}

TEST_CASE("property: nonzero Fourier modes decay, the zero mode tends to the Haar mean") {
  auto psi = make_bump(psl2z_spec());
  std::vector<double> ys = {0.01, 0.003, 0.001, 0.0003, 0.0001}, a;
  for (double y : ys) a.push_back(std::abs(fourier_coefficient(psi, 1, y)));
  CHECK(loglog_slope(ys, a) > 0.0);
  double hm = haar_mean(psi);
  CHECK(std::abs(fourier_coefficient(psi, 0, 1e-4).real() - hm) < 0.01 * hm);
  CHECK(std::abs(horocycle_average(psi, 1e-4, {0.0, 1.0}) - hm) < 0.01 * hm);
}

TEST_CASE("thin bump") {
  auto psi = make_bump(thin4_spec());
  CHECK(psi.width == 4);
  CHECK(psi(UTBPoint(4.0, 2.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(haar_mean(psi), std::invalid_argument);
  auto s = mu_T(psi, 10.0, 1e-9);
  CHECK(s.value > 0.0);
  CHECK(horocycle_average(psi, 1e-3, {0.0, 4.0}) < 0.05 * psi.peak);
}
