#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shearlab/algebra.hpp"

using namespace shearlab;

namespace {

constexpr double kPi = std::numbers::pi;

GroupElement random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1) continue;
    double d = (1.0 + b * c) / a;
    if (std::abs(d) <= 10.0) return {a, b, c, d};
  }
}

double max_entry(const GroupElement& g) {
  double m = 0.0;
  for (double e : g.entries()) m = std::max(m, std::abs(e));
  return m;
}

bool same_point(const UTBPoint& p, const UTBPoint& q, double tol) {
  return std::abs(p.x - q.x) < tol && std::abs(p.y - q.y) < tol &&
         std::abs(normalize_angle(p.theta - q.theta)) < tol;
}

}  // namespace

TEST_CASE("composition laws") {
  GroupElement g(2.0, 3.0, 1.0, 2.0);
  CHECK(approx_equal(compose(identity_element(), g), g, 1e-15));
  CHECK(approx_equal(compose(inversion(), inversion()), identity_element(), 1e-15));
  CHECK(approx_equal(compose(unipotent(1.0), unipotent(2.0)), unipotent(3.0), 1e-15));
  CHECK(approx_equal(compose(g, inverse(g)), identity_element(), 1e-14));
}

TEST_CASE("canonical sign") {
  GroupElement g(-1.0, -2.0, -1.0, -3.0);
  CHECK(g.c() > 0.0);
  GroupElement h(-2.0, 0.0, 0.0, -0.5);
  CHECK(h.a() > 0.0);
  CHECK(GroupElement(1, 2, 3, 7) == GroupElement(-1, -2, -3, -7));
}

TEST_CASE("shear element") {
  CHECK(approx_equal(shear_element(0.0), identity_element(), 1e-15));
  const double s = std::pow(2.0, -0.25);
  CHECK(approx_equal(shear_element(1.0), GroupElement(s, s, 0.0, 1.0 / s), 1e-14));
  for (double T : {-7.0, 0.3, 12.0, 1e4}) CHECK(std::abs(shear_element(T).det() - 1.0) < 1e-12);
  CHECK(std::abs(shear_element(1e6).a()) < 1e-3);
  CHECK(std::abs(shear_element(-1e6).a()) < 1e-3);
  CHECK(shear_element(1e6).c() == 0.0);
}

TEST_CASE("mobius action examples") {
  UTBPoint i(0.0, 1.0, 0.0);
  auto s = mobius_act(inversion(), i);
  CHECK(std::abs(s.x) < 1e-15);
  CHECK(std::abs(s.y - 1.0) < 1e-15);
  // cz + d = i sends the tangent vector to its negative.
  CHECK(std::abs(std::abs(s.theta) - kPi) < 1e-15);
  auto n = mobius_act(unipotent(0.7), i);
  CHECK(same_point(n, UTBPoint(0.7, 1.0, 0.0), 1e-15));
  auto a = mobius_act(diagonal(4.0), i);
  CHECK(same_point(a, UTBPoint(0.0, 4.0, 0.0), 1e-15));
}

TEST_CASE("iwasawa examples") {
  auto id = iwasawa_decompose(identity_element());
  CHECK(id.x == 0.0);
  CHECK(id.y == 1.0);
  CHECK(id.theta == 0.0);
  auto a = iwasawa_decompose(diagonal(3.5));
  CHECK(std::abs(a.y - 3.5) < 1e-14);
  for (double T : {0.5, 3.0, 40.0}) {
    auto c = iwasawa_decompose(shear_element(T));
    double Tt = std::sqrt(T * T + 1.0);
    CHECK(std::abs(c.x - T / Tt) < 1e-12);
    CHECK(std::abs(c.y - 1.0 / Tt) < 1e-12);
    CHECK(approx_equal(iwasawa_compose(c), shear_element(T), 1e-12));
  }
}

TEST_CASE("hyperbolic distance examples") {
  UTBPoint i(0.0, 1.0);
  CHECK(hyperbolic_distance(i, i) == 0.0);
  CHECK(std::abs(hyperbolic_distance(i, UTBPoint(0.0, std::exp(1.0))) - 1.0) < 1e-14);
  // Geodesic length oracle: the semicircle through i and 1+i is centred at
  // 1/2 with radius sqrt(5)/2; its arclength is int dphi / sin(phi).
  const double r = std::sqrt(1.25);
  const double phi0 = std::acos(-0.5 / r), phi1 = std::acos(0.5 / r);
  double len = std::log(std::tan(phi0 / 2.0)) - std::log(std::tan(phi1 / 2.0));
  CHECK(std::abs(hyperbolic_distance(i, UTBPoint(1.0, 1.0)) - len) < 1e-14);
  CHECK(std::abs(len - std::acosh(1.5)) < 1e-14);
}

TEST_CASE("spin cover examples") {
  FormVector sq{1.0, 0.0, 0.0};
  CHECK(spin_cover(unipotent(1.0), sq) == FormVector{1.0, 2.0, 1.0});
  FormVector v{0.3, -1.2, 2.5};
  CHECK(spin_cover(identity_element(), v) == v);
  FormVector xy{0.0, 1.0, 0.0};
  auto w = spin_cover(diagonal(7.0), xy);
  CHECK(std::abs(w.p) < 1e-15);
  CHECK(std::abs(w.q - 1.0) < 1e-14);
  CHECK(std::abs(w.r) < 1e-15);
}

TEST_CASE("discriminant form has signature (2,1)") {
  auto Q = TernaryForm::discriminant_form();
  auto [pos, neg] = Q.signature();
  CHECK(pos == 2);
  CHECK(neg == 1);
  FormVector v{1.0, 3.0, -2.0};
  CHECK(Q.evaluate(v) == doctest::Approx(v.discriminant()));
}

TEST_CASE("property: iwasawa round trip on random elements") {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    GroupElement g = random_element(rng);
    GroupElement h = iwasawa_compose(iwasawa_decompose(g));
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(g.entries()[k] - h.entries()[k]) / max_entry(g));
    CHECK(std::abs(h.det() - 1.0) < 1e-12);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("property: spin cover preserves Q and is a right action") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_q = 0.0, worst_law = 0.0;
  for (int n = 0; n < 10000; ++n) {
    GroupElement g = random_element(rng), h = random_element(rng);
    FormVector v{u(rng), u(rng), u(rng)};
    FormVector vg = spin_cover(g, v);
    double scale = 1.0 + euclidean_norm(vg) * euclidean_norm(vg);
    worst_q = std::max(worst_q, std::abs(vg.discriminant() - v.discriminant()) / scale);
    FormVector lhs = spin_cover(compose(g, h), v);
    FormVector rhs = spin_cover(h, vg);
    double s2 = 1.0 + euclidean_norm(lhs);
    worst_law = std::max({worst_law, std::abs(lhs.p - rhs.p) / s2, std::abs(lhs.q - rhs.q) / s2,
                          std::abs(lhs.r - rhs.r) / s2});
  }
  CHECK(worst_q < 1e-9);
  CHECK(worst_law < 1e-9);
}

TEST_CASE("property: mobius action is an isometry and a group action") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.2, 3.0), ut(-kPi, kPi);
  for (int n = 0; n < 2000; ++n) {
    GroupElement g = random_element(rng), h = random_element(rng);
    UTBPoint p(ux(rng), uy(rng), ut(rng)), q(ux(rng), uy(rng), ut(rng));
    double d0 = hyperbolic_distance(p, q);
    double d1 = hyperbolic_distance(mobius_act(g, p), mobius_act(g, q));
    CHECK(std::abs(d0 - d1) < 1e-10 * (1.0 + d0));
    UTBPoint lhs = mobius_act(compose(g, h), p);
    UTBPoint rhs = mobius_act(g, mobius_act(h, p));
    CHECK(hyperbolic_distance(lhs, rhs) < 1e-8);
    CHECK(std::abs(normalize_angle(lhs.theta - rhs.theta)) < 1e-8);
  }
}
