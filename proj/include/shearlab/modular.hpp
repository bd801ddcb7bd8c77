#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "shearlab/algebra.hpp"
#include "shearlab/shear.hpp"

namespace shearlab {

using int128 = __int128;
std::string to_string(int128 v);

// Holomorphic cusp form f(z) = scale * sum_{n>=1} a(n) e(nz) of weight k,
// normalized so that a(1) = 1.
struct QExpansion {
  int weight = 12;
  std::vector<int128> coeffs;  // coeffs[0] = 0, coeffs[n] = a(n)
  double scale = 1.0;

  std::size_t size() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double a(std::size_t n) const { return static_cast<double>(coeffs.at(n)); }
  // a(n) / n^{(k-1)/2}
  double normalized(std::size_t n) const;
};

// tau(1..N) from q * prod (1 - q^n)^24, computed exactly.
QExpansion delta_qexp(std::size_t N);

cplx eval_form(const QExpansion& f, const UTBPoint& z);
// |f(z)|^2 y^k, evaluated at the reduced point.
double eval_psi_f(const QExpansion& f, const UTBPoint& z);
// Psi_f as a K-invariant, cusp-decaying test function on PSL(2,Z).
TestFunction make_form_test_function(const QExpansion& f);

// int_F |f|^2 y^k dx dy / y^2.
double petersson_norm_sq(const QExpansion& f, double rel_tol = 1e-10);

struct LSeriesValue {
  double s = 0.0;
  double value = 0.0;
  double completed = 0.0;  // (4 pi)^{-(s+k-1)} Gamma(s+k-1) L
  double derivative = 0.0;
  double completed_log_derivative = 0.0;  // Lambda'/Lambda
  double error = 0.0;
  double cutoff = 0.0;  // smoothing scale X in exp(-n/X)
  std::size_t terms = 0;
  bool has_derivative = false;
};

struct InsufficientConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Symmetric-square L-function by Dirichlet-series algebra
// zeta(2s)/zeta(s) * sum lambda(n)^2 n^{-s} with a smoothed cutoff and
// Richardson extrapolation in the smoothing scale. Needs s >= 1.
LSeriesValue sym2_L(const QExpansion& f, double s, bool want_derivative = false);
// Plain partial sum of the same Dirichlet series up to N (s > 1).
double sym2_L_partial(const QExpansion& f, double s, std::size_t N);
// L(f,s) = sum a(n) n^{-s-(k-1)/2}, smoothed and extrapolated.
LSeriesValue standard_L(const QExpansion& f, double s);

// (2 pi)^{-(s+(k-1)/2)} Gamma(s+(k-1)/2) (1 - iT)^{-(s+(k-1)/2)}.
cplx weight_W(int k, cplx s, double T);
// int_0^inf f(Ty + iy) y^{s+(k-1)/2} dy/y by quadrature.
cplx hecke_integral(const QExpansion& f, double s, double T, double rel_tol = 1e-10);

// int_0^inf |f(Ty + iy)|^2 y^k dy/y.
ShearSample second_moment_lhs(const QExpansion& f, double T, double rel_tol = 1e-8);

struct MomentConstants {
  double norm_sq = 0.0;           // Petersson norm squared
  double haar_mean = 0.0;         // norm_sq / vol
  double sym2_log_derivative = 0.0;  // Lambda'/Lambda(sym^2 f, 1)
  double constant = 0.0;          // Lambda'/Lambda + gamma - 2 zeta'/zeta(2)
};
MomentConstants moment_constants(const QExpansion& f);
// 2 (norm_sq / vol) (log T + constant)
double second_moment_prediction(const MomentConstants& c, double T);

struct KroneckerCheck {
  double lhs = 0.0;  // <log(4 y |eta|^4), Psi_f> / norm_sq
  double rhs = 0.0;  // gamma - Lambda'/Lambda(sym^2 f, 1)
  double gap = 0.0;
  double via_regularized_eisenstein = 0.0;  // 2 gamma - 2 zeta'/zeta(2) - (pi/3) mu_Eis / norm_sq
};
KroneckerCheck kronecker_check(const QExpansion& f);

}  // namespace shearlab
