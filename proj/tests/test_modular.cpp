#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shearlab/modular.hpp"
#include "shearlab/special.hpp"

using namespace shearlab;

namespace {

constexpr double kPi = std::numbers::pi;
// Petersson norm of Delta over the modular fundamental domain (dx dy / y^2).
constexpr double kDeltaNormSq = 1.0353620568043209223e-6;

const QExpansion& delta() {
  static const QExpansion f = delta_qexp(2000);
  return f;
}

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("tau values") {
  const auto& f = delta();
  const std::int64_t known[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
  for (int n = 1; n <= 10; ++n) CHECK(f.coeffs[n] == known[n - 1]);
  CHECK(f.coeffs[6] == f.coeffs[2] * f.coeffs[3]);
  CHECK(f.coeffs[0] == 0);
  CHECK(to_string(f.coeffs[2]) == "-24");
}

TEST_CASE("tau against the E4^3 - E6^2 oracle") {
  auto ref = oracle::tau_from_eisenstein(300);
  const auto& f = delta();
  for (std::size_t n = 1; n <= 300; ++n) CHECK(f.coeffs[n] == ref[n]);
}

TEST_CASE("large tau stays exact") {
  auto f = delta_qexp(100000);
  CHECK(to_string(f.coeffs[100000]) == "-2983637890141033828147200000");
}

TEST_CASE("property: Hecke relations and Deligne bound") {
  const auto& f = delta();
  const std::size_t N = f.size();
  for (std::size_t p = 2; p <= N; ++p) {
    if (!is_prime(p)) continue;
    CHECK(std::abs(f.a(p)) <= 2.0 * std::pow(static_cast<double>(p), 5.5));
    int128 p11 = 1;
    for (int e = 0; e < 11; ++e) p11 *= static_cast<int128>(p);
    int128 prev = 1, cur = f.coeffs[p];
    for (std::size_t pr = p; pr * p <= N; pr *= p) {
      int128 next = f.coeffs[p] * cur - p11 * prev;
      CHECK(f.coeffs[pr * p] == next);
      prev = cur, cur = next;
    }
  }
  for (std::size_t m = 2; m < 40; ++m)
    for (std::size_t n = 2; m * n <= N && n < 40; ++n)
      if (std::gcd(m, n) == 1) CHECK(f.coeffs[m * n] == f.coeffs[m] * f.coeffs[n]);
}

TEST_CASE("property: Psi_f is modular invariant and decays in the cusp") {
  const auto& f = delta();
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.3, 2.0);
  const IntGroupElement T(1, 1, 0, 1), S(0, -1, 1, 0);
  for (int n = 0; n < 200; ++n) {
    UTBPoint z(ux(rng), uy(rng));
    IntGroupElement g;
    for (int k = 0; k < 6; ++k) g = multiply(g, (rng() % 3 == 0) ? S : (rng() & 1 ? T : inverse(T)));
    UTBPoint w = mobius_act(g.to_real(), z);
    // Direct evaluation at w through the weight-12 transformation law.
    double a = eval_psi_f(f, z);
    double b = std::norm(eval_form(f, w)) * std::pow(w.y, 12);
    CHECK(std::abs(a - b) < 1e-10 * (a + 1e-12));
  }
  for (double y : {3.0, 5.0, 8.0}) {
    double model = std::pow(y, 12) * std::exp(-4.0 * kPi * y);
    CHECK(rel(eval_psi_f(f, UTBPoint(0.0, y)), model) < 0.01);
  }
  auto shorter = delta_qexp(200);
  CHECK(rel(eval_psi_f(shorter, UTBPoint(0, 1)), eval_psi_f(f, UTBPoint(0, 1))) < 1e-13);
}

TEST_CASE("Petersson norm") {
  double n1 = petersson_norm_sq(delta(), 1e-10);
  CHECK(n1 > 0.0);
  CHECK(rel(n1, kDeltaNormSq) < 1e-8);
  double n2 = petersson_norm_sq(delta(), 1e-12);
  CHECK(rel(n1, n2) < 1e-8);
}

TEST_CASE("symmetric square L-function") {
  auto f = delta_qexp(100000);
  auto two = sym2_L(f, 2.0);
  CHECK(std::abs(two.value - sym2_L_partial(f, 2.0, 100000)) < 1e-6);
  auto one = sym2_L(f, 1.0, true);
  CHECK(one.has_derivative);
  CHECK(one.error < 1e-6);
  // Residue identity: ||f||^2 / vol = Lambda(sym^2 f, 1) / zeta(2).
  double lhs = petersson_norm_sq(delta()) * 3.0 / kPi;
  CHECK(rel(lhs, one.completed / zeta(2.0)) < 1e-5);
  // Centered difference of log Lambda.
  const double h = 1e-4;
  auto up = sym2_L(f, 1.0 + h), mid = sym2_L(f, 1.0 + 2.0 * h);
  // One-sided (s >= 1 only) second-order difference.
  double d = (-3.0 * std::log(one.completed) + 4.0 * std::log(up.completed) - std::log(mid.completed)) / (2.0 * h);
  CHECK(std::abs(d - one.completed_log_derivative) < 1e-5);
  CHECK_THROWS_AS(sym2_L(f, 0.9), std::invalid_argument);
}

TEST_CASE("archimedean weight") {
  const double k = 12;
  auto w0 = weight_W(12, cplx(2.0, 0.0), 0.0);
  CHECK(rel(w0.real(), std::pow(2.0 * kPi, -(2.0 + (k - 1) / 2)) * gamma_fn(2.0 + (k - 1) / 2)) < 1e-12);
  CHECK(std::abs(w0.imag()) < 1e-18);
  const double T = 50.0;
  double hi = std::norm(weight_W(12, cplx(0.5, 2.0 * T), T));
  double lo = std::norm(weight_W(12, cplx(0.5, T / 2.0), T));
  CHECK(hi / lo < 1e-3);
}

TEST_CASE("Hecke integral equals L times the weight") {
  auto f = delta_qexp(20000);
  cplx lhs = hecke_integral(f, 2.0, 1.0);
  auto L = standard_L(f, 2.0);
  cplx rhs = L.value * weight_W(12, cplx(2.0, 0.0), 1.0);
  CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-6);
}

TEST_CASE("second moment splits into the two shear integrals") {
  const auto& f = delta();
  auto psi = make_form_test_function(f);
  for (double T : {10.0, 30.0}) {
    auto lhs = second_moment_lhs(f, T);
    double parts = mu_T(psi, T, 1e-10 * psi.peak).value + mu_T(psi, -T, 1e-10 * psi.peak).value;
    CHECK(rel(lhs.value, parts) < 1e-5);
  }
  CHECK(second_moment_lhs(f, 30.0).value > second_moment_lhs(f, 10.0).value);
}

TEST_CASE("Kronecker identity is homogeneous of degree zero") {
  auto f = delta_qexp(100000);
  auto a = kronecker_check(f);
  CHECK(std::abs(a.gap) < 1e-4);
  CHECK(std::abs(a.lhs - a.via_regularized_eisenstein) < 1e-6);
  f.scale = 2.0;
  auto b = kronecker_check(f);
  CHECK(std::abs(a.lhs - b.lhs) < 1e-8);
  CHECK(std::abs(a.rhs - b.rhs) < 1e-8);
}
