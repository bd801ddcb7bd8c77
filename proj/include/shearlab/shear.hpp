#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shearlab/algebra.hpp"
#include "shearlab/group.hpp"

namespace shearlab {

// Axis-parallel box inside the fundamental domain, in (x, y) coordinates.
struct SupportBox {
  double x0, x1, y0, y1;
};

// An automorphic observable on Gamma\G. When k_invariant is set, `profile`
// gives its values on the fundamental domain in (x, y).
struct TestFunction {
  std::string name;
  std::function<double(const UTBPoint&)> evaluator;
  double C_psi = 1.0;
  double alpha_psi = 1.0;
  std::optional<SupportBox> support;  // nullopt: cusp-decaying
  bool smooth = true;
  bool k_invariant = true;
  int width = 1;  // Hecke width of the active group
  double peak = 1.0;
  std::function<double(double, double)> profile;

  double operator()(const UTBPoint& p) const { return evaluator(p); }
};

struct BumpParams {
  double x_center = 0.0;
  double y_center = 2.0;
  double x_radius = 0.3;
  double log_y_radius = 0.4;
  double amplitude = 1.0;
  // Weight of a cos(theta) modulation; 0 keeps the bump K-invariant.
  double angular = 0.0;
};

// Smooth compactly supported bump exp(1 - 1/(1-t^2)) in x and log y, placed
// inside the fundamental domain of the Hecke-type group `spec`.
TestFunction make_bump(const GroupSpec& spec, const BumpParams& params = {});
TestFunction zero_function(const GroupSpec& spec);
TestFunction linear_combination(double a, const TestFunction& f, double b, const TestFunction& g);

struct RegistrationReport {
  double max_automorphy_violation = 0.0;
  double max_decay_violation = 0.0;
};

// Random spot checks of automorphy (1000 samples) and of the declared cusp
// decay; throws std::invalid_argument when a violation exceeds 1e-7.
RegistrationReport register_test_function(const GroupSpec& spec, const TestFunction& psi, unsigned seed = 1);

struct ShearSample {
  double T = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::size_t nodes = 0;
  double upper_cutoff = 0.0;  // U in the y-integral
  bool converged = true;
};

// mu_T(psi) = int_1^U psi((yT + iy)/sqrt(T^2+1), up) dy/y.
ShearSample mu_T(const TestFunction& psi, double T, double tol);
// (1/w) int_0^w int_{1/T}^inf psi(x + iy) dy/y dx.
ShearSample mu_T_strip(const TestFunction& psi, double T, double tol);

std::complex<double> fourier_coefficient(const TestFunction& psi, int m, double y, double theta = 0.0,
                                         double tol = 1e-10);
double horocycle_average(const TestFunction& psi, double y, std::pair<double, double> interval, double tol = 1e-10);

// Integral of psi against f over the fundamental domain with dx dy / y^2
// (K-invariant psi). Compact support is integrated over its box; otherwise
// over {|x| <= w/2, |z| >= 1, y <= y_max}.
double integrate_fundamental_domain(const TestFunction& psi, const std::function<double(double, double)>& f,
                                    double tol, double y_max = 0.0);
// (1/vol) int psi with vol = pi/3 for PSL(2,Z).
double haar_mean(const TestFunction& psi, double tol = 1e-11);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double decay_exponent = 0.0;  // fitted from |mu_T - slope log T - intercept|
  double correction = 0.0;      // c in c * T^{-eta}
  double correction_exponent = 0.0;
  std::vector<double> T;
  std::vector<double> values;
  std::vector<double> residuals;
};

// Fits values ~ a log T + b + c T^{-eta} (eta by nested search); with
// with_correction = false the plain line a log T + b is fitted.
RegressionResult fit_equidistribution(const std::vector<double>& T, const std::vector<double>& values,
                                      bool with_correction = false);
RegressionResult equidistribution_regression(const TestFunction& psi, const std::vector<double>& T_list,
                                             double tol = 1e-9, bool with_correction = false);

}  // namespace shearlab
