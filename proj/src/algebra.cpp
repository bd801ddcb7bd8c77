#include "shearlab/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>

namespace shearlab {

namespace {
constexpr double kDetDrift = 1e-12;
constexpr double kPi = std::numbers::pi;
}  // namespace

GroupElement::GroupElement(double a, double b, double c, double d) : m_{a, b, c, d} {
  double det = a * d - b * c;
  if (!(det > 0.0)) throw std::domain_error("GroupElement: determinant must be positive");
  if (std::abs(det - 1.0) > kDetDrift) {
    double s = 1.0 / std::sqrt(det);
    for (double& e : m_) e *= s;
  }
  if (m_[2] < 0.0 || (m_[2] == 0.0 && m_[0] < 0.0)) {
    for (double& e : m_) e = -e;
  }
  for (double& e : m_)
    if (e == 0.0) e = 0.0;  // drop negative zeros so field comparison is exact
}

bool approx_equal(const GroupElement& g, const GroupElement& h, double tol) {
  double plus = 0.0, minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(g.entries()[i] - h.entries()[i]));
    minus = std::max(minus, std::abs(g.entries()[i] + h.entries()[i]));
  }
  return std::min(plus, minus) <= tol;
}

GroupElement identity_element() { return {}; }

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  return {g.a() * h.a() + g.b() * h.c(), g.a() * h.b() + g.b() * h.d(),
          g.c() * h.a() + g.d() * h.c(), g.c() * h.b() + g.d() * h.d()};
}

GroupElement inverse(const GroupElement& g) { return {g.d(), -g.b(), -g.c(), g.a()}; }

GroupElement unipotent(double x) { return {1.0, x, 0.0, 1.0}; }

GroupElement diagonal(double y) {
  if (!(y > 0.0)) throw std::domain_error("diagonal: y must be positive");
  double s = std::sqrt(y);
  return {s, 0.0, 0.0, 1.0 / s};
}

GroupElement rotation(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return {c, s, -s, c};
}

GroupElement inversion() { return {0.0, -1.0, 1.0, 0.0}; }

GroupElement shear_element(double T) {
  return compose(diagonal(1.0 / std::sqrt(T * T + 1.0)), unipotent(T));
}

double normalize_angle(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  t -= kPi;
  if (t >= kPi) t -= 2.0 * kPi;
  return t;
}

UTBPoint::UTBPoint(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {
  if (!(y_ > 0.0)) throw std::domain_error("UTBPoint: y must be positive");
}

cplx mobius(const GroupElement& g, cplx z) {
  cplx w = g.c() * z + g.d();
  if (std::abs(w) < 1e-300) throw std::overflow_error("mobius: |cz+d| underflow");
  return (g.a() * z + g.b()) / w;
}

UTBPoint mobius_act(const GroupElement& g, const UTBPoint& p) {
  cplx z = p.z();
  cplx w = g.c() * z + g.d();
  if (std::abs(w) < 1e-300) throw std::overflow_error("mobius_act: |cz+d| underflow");
  cplx img = (g.a() * z + g.b()) / w;
  double y = std::max(img.imag(), std::numeric_limits<double>::min());
  return {img.real(), y, p.theta - 2.0 * std::arg(w)};
}

IwasawaCoords iwasawa_decompose(const GroupElement& g) {
  double n2 = g.c() * g.c() + g.d() * g.d();
  IwasawaCoords out;
  out.x = (g.a() * g.c() + g.b() * g.d()) / n2;
  out.y = 1.0 / n2;
  double t = -std::atan2(g.c(), g.d());
  if (t >= kPi / 2) t -= kPi;
  if (t < -kPi / 2) t += kPi;
  out.theta = t;
  return out;
}

GroupElement iwasawa_compose(const IwasawaCoords& c) {
  return compose(compose(unipotent(c.x), diagonal(c.y)), rotation(c.theta));
}

double hyperbolic_distance(const UTBPoint& p1, const UTBPoint& p2) {
  double dz = std::abs(p1.z() - p2.z());
  return 2.0 * std::asinh(dz / (2.0 * std::sqrt(p1.y * p2.y)));
}

FormVector spin_cover(const GroupElement& g, const FormVector& v) {
  const double a = g.a(), b = g.b(), c = g.c(), d = g.d();
  return {v.p * a * a + v.q * a * c + v.r * c * c,
          2.0 * v.p * a * b + v.q * (a * d + b * c) + 2.0 * v.r * c * d,
          v.p * b * b + v.q * b * d + v.r * d * d};
}

double sup_norm(const FormVector& v) { return std::max({std::abs(v.p), std::abs(v.q), std::abs(v.r)}); }

double euclidean_norm(const FormVector& v) { return std::sqrt(v.p * v.p + v.q * v.q + v.r * v.r); }

TernaryForm::TernaryForm(const std::array<std::array<double, 3>, 3>& m) : m_(m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j)
      if (m_[i][j] != m_[j][i]) throw std::invalid_argument("TernaryForm: matrix must be symmetric");
  auto [pos, neg] = signature();
  if (pos != 2 || neg != 1) throw std::invalid_argument("TernaryForm: signature must be (2,1)");
}

TernaryForm TernaryForm::discriminant_form() {
  return TernaryForm({{{0.0, 0.0, -2.0}, {0.0, 1.0, 0.0}, {-2.0, 0.0, 0.0}}});
}

double TernaryForm::evaluate(const FormVector& v) const {
  const std::array<double, 3> x{v.p, v.q, v.r};
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += m_[i][j] * x[i] * x[j];
  return s;
}

std::pair<int, int> TernaryForm::signature() const {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = m_[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  int pos = 0, neg = 0;
  double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    double e = es.eigenvalues()(i);
    if (e > 1e-12 * scale) ++pos;
    else if (e < -1e-12 * scale) ++neg;
  }
  return {pos, neg};
}

}  // namespace shearlab
