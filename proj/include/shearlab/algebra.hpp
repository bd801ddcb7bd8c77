#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shearlab {

using cplx = std::complex<double>;

// PSL(2,R) element stored with the canonical sign: c > 0, or c == 0 and a > 0.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(double a, double b, double c, double d);

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  const std::array<double, 4>& entries() const { return m_; }

  bool operator==(const GroupElement& o) const { return m_ == o.m_; }

 private:
  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

// Entrywise comparison modulo global sign.
bool approx_equal(const GroupElement& g, const GroupElement& h, double tol);

GroupElement identity_element();
GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

GroupElement unipotent(double x);     // (1 x; 0 1)
GroupElement diagonal(double y);      // diag(sqrt y, 1/sqrt y)
GroupElement rotation(double theta);  // (cos sin; -sin cos)
GroupElement inversion();             // (0 -1; 1 0)
GroupElement shear_element(double T);

// Point of the unit tangent bundle. theta is the angle of the tangent vector,
// counterclockwise from the upward vertical, normalized to [-pi, pi).
struct UTBPoint {
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;

  UTBPoint() = default;
  UTBPoint(double x_, double y_, double theta_ = 0.0);
  cplx z() const { return {x, y}; }
};

double normalize_angle(double theta);

UTBPoint mobius_act(const GroupElement& g, const UTBPoint& p);
cplx mobius(const GroupElement& g, cplx z);

// g = n_x a_y k_theta. Because k_theta turns the tangent vector at i by
// 2*theta, theta is half the tangent angle of g(i, up); it lives in [-pi/2, pi/2).
struct IwasawaCoords {
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;
};

IwasawaCoords iwasawa_decompose(const GroupElement& g);
GroupElement iwasawa_compose(const IwasawaCoords& c);

double hyperbolic_distance(const UTBPoint& p1, const UTBPoint& p2);

// Binary quadratic form p u^2 + q uv + r v^2, the concrete model of the
// quadric space; the invariant form is q^2 - 4pr.
template <class Scalar>
struct BasicFormVector {
  Scalar p{}, q{}, r{};

  Scalar discriminant() const { return q * q - 4 * p * r; }
  bool operator==(const BasicFormVector&) const = default;
};

using FormVector = BasicFormVector<double>;
using IntFormVector = BasicFormVector<std::int64_t>;

FormVector spin_cover(const GroupElement& g, const FormVector& v);

double sup_norm(const FormVector& v);
double euclidean_norm(const FormVector& v);

// Symmetric 3x3 form in the coordinates (p, q, r).
class TernaryForm {
 public:
  explicit TernaryForm(const std::array<std::array<double, 3>, 3>& m);

  // The form q^2 - 4pr.
  static TernaryForm discriminant_form();

  double evaluate(const FormVector& v) const;
  const std::array<std::array<double, 3>, 3>& matrix() const { return m_; }
  // (positive, negative) eigenvalue counts.
  std::pair<int, int> signature() const;

 private:
  std::array<std::array<double, 3>, 3> m_;
};

}  // namespace shearlab
