#pragma once

#include <complex>
#include <cstdint>

#include "shearlab/algebra.hpp"

namespace shearlab {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Default relative tolerances met on the documented domains.
struct Precision {
  double gamma_zeta_eta = 1e-12;
  double bessel = 1e-10;
};

// Lanczos approximation (g = 7, 9 terms); reflection below Re s = 1/2.
double gamma_fn(double s);
cplx gamma_fn(cplx s);
cplx log_gamma(cplx s);
double digamma(double s);

struct ZetaValue {
  double value;
  double remainder;  // size of the first omitted Euler-Maclaurin term
};

// Euler-Maclaurin summation; valid for real s > 0, s != 1.
ZetaValue zeta_em(double s);
ZetaValue zeta_prime_em(double s);
double zeta(double s);
double zeta_prime(double s);

// K_nu(x) for real nu >= 0, x > 0. Returns 0 for x > 700.
double bessel_k(double nu, double x);

// Dedekind eta. Small Im z is handled through the modular group with the
// full Dedekind-sum multiplier.
cplx dedekind_eta(cplx z);
cplx eta_product(cplx z);
cplx eta_pentagonal_series(cplx z);
// log|eta(z)|, stable for any y > 0.
double log_abs_eta(cplx z);

// s(h, k) for k >= 1.
double dedekind_sum(std::int64_t h, std::int64_t k);

double divisor_sigma(double s, std::int64_t n);

}  // namespace shearlab
