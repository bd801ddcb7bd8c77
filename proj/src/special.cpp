#include "shearlab/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "shearlab/group.hpp"

namespace shearlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_2, B_4, ..., B_30
constexpr std::array<double, 15> kBernoulli = {
    1.0 / 6,          -1.0 / 30,         1.0 / 42,           -1.0 / 30,
    5.0 / 66,         -691.0 / 2730,     7.0 / 6,            -3617.0 / 510,
    43867.0 / 798,    -174611.0 / 330,   854513.0 / 138,     -236364091.0 / 2730,
    8553103.0 / 6,    -23749461029.0 / 870, 8615841276005.0 / 14322};

constexpr int kEulerMaclaurinN = 20;

cplx lanczos_sum(cplx z, cplx* derivative) {
  cplx x = kLanczos[0], dx = 0.0;
  for (int i = 1; i < 9; ++i) {
    cplx den = z + static_cast<double>(i);
    x += kLanczos[i] / den;
    dx -= kLanczos[i] / (den * den);
  }
  if (derivative) *derivative = dx;
  return x;
}

}  // namespace

cplx log_gamma(cplx s) {
  if (s.real() < 0.5) {
    // log Gamma(s) = log pi - log sin(pi s) - log Gamma(1 - s)
    return std::log(kPi) - std::log(std::sin(kPi * s)) - log_gamma(1.0 - s);
  }
  cplx z = s - 1.0;
  cplx x = lanczos_sum(z, nullptr);
  cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_fn(cplx s) {
  if (s.real() < 0.5) return kPi / (std::sin(kPi * s) * gamma_fn(1.0 - s));
  cplx z = s - 1.0;
  cplx x = lanczos_sum(z, nullptr);
  cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double gamma_fn(double s) {
  if (s <= 0.0 && s == std::floor(s)) throw std::domain_error("gamma_fn: pole");
  if (s < 0.5) return kPi / (std::sin(kPi * s) * gamma_fn(1.0 - s));
  double z = s - 1.0;
  double x = lanczos_sum(z, nullptr).real();
  double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double digamma(double s) {
  if (s <= 0.0 && s == std::floor(s)) throw std::domain_error("digamma: pole");
  if (s < 0.5) return digamma(1.0 - s) - kPi / std::tan(kPi * s);
  double z = s - 1.0;
  cplx dx;
  double x = lanczos_sum(z, &dx).real();
  double t = z + kLanczosG + 0.5;
  return std::log(t) + (z + 0.5) / t - 1.0 + dx.real() / x;
}

ZetaValue zeta_em(double s) {
  if (s == 1.0) throw std::domain_error("zeta: pole at s = 1");
  if (!(s > 0.0)) throw std::domain_error("zeta: requires s > 0");
  const int n = kEulerMaclaurinN;
  const double ln = std::log(static_cast<double>(n));
  double sum = 0.0;
  for (int k = n - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  double npow = std::exp(-s * ln);  // N^{-s}
  sum += npow * n / (s - 1.0) + 0.5 * npow;
  // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  double rising = s;        // s(s+1)...(s+2k-2)
  double fact = 2.0;        // (2k)!
  double power = npow / n;  // N^{-s-1}
  double last = 0.0;
  for (int k = 1; k <= 15; ++k) {
    double term = kBernoulli[k - 1] / fact * rising * power;
    if (k < 15) sum += term;
    else last = std::abs(term);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    power /= static_cast<double>(n) * n;
  }
  return {sum, last};
}

ZetaValue zeta_prime_em(double s) {
  if (s == 1.0) throw std::domain_error("zeta_prime: pole at s = 1");
  if (!(s > 0.0)) throw std::domain_error("zeta_prime: requires s > 0");
  const int n = kEulerMaclaurinN;
  const double ln = std::log(static_cast<double>(n));
  double sum = 0.0;
  for (int k = n - 1; k >= 2; --k) sum -= std::log(static_cast<double>(k)) * std::pow(static_cast<double>(k), -s);
  double npow = std::exp(-s * ln);
  double sm1 = s - 1.0;
  sum += npow * n * (-ln / sm1 - 1.0 / (sm1 * sm1));
  sum -= 0.5 * ln * npow;
  double rising = s, drising = 1.0;  // product and its derivative
  double fact = 2.0;
  double power = npow / n;
  double last = 0.0;
  for (int k = 1; k <= 15; ++k) {
    double term = kBernoulli[k - 1] / fact * power * (drising - ln * rising);
    if (k < 15) sum += term;
    else last = std::abs(term);
    double f1 = s + 2 * k - 1, f2 = s + 2 * k;
    drising = drising * f1 * f2 + rising * (f1 + f2);
    rising *= f1 * f2;
    fact *= (2.0 * k + 1) * (2.0 * k + 2);
    power /= static_cast<double>(n) * n;
  }
  return {sum, last};
}

double zeta(double s) { return zeta_em(s).value; }
double zeta_prime(double s) { return zeta_prime_em(s).value; }

namespace {

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  gampl = 1.0 / gamma_fn(1.0 + mu);
  gammi = 1.0 / gamma_fn(1.0 - mu);
  if (std::abs(mu) >= 0.05) {
    gam1 = (gammi - gampl) / (2.0 * mu);
    gam2 = 0.5 * (gammi + gampl);
    return;
  }
  // Taylor coefficients of 1/Gamma(z) = sum a_k z^k.
  constexpr std::array<double, 11> a = {0.0,
                                        1.0,
                                        0.5772156649015329,
                                        -0.6558780715202538,
                                        -0.0420026350340952,
                                        0.1665386113822915,
                                        -0.0421977345555443,
                                        -0.0096219715278770,
                                        0.0072189432466630,
                                        -0.0011651675918591,
                                        -0.0002152416741149};
  double m2 = mu * mu;
  gam1 = -(a[2] + m2 * (a[4] + m2 * (a[6] + m2 * (a[8] + m2 * a[10]))));
  gam2 = a[1] + m2 * (a[3] + m2 * (a[5] + m2 * (a[7] + m2 * a[9])));
}

}  // namespace

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: requires x > 0");
  if (nu < 0.0) nu = -nu;
  if (x > 700.0) return 0.0;
  constexpr double eps = 1e-16;
  constexpr int maxit = 100000;
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl, mu2 = mu * mu;
  const double xi = 1.0 / x, xi2 = 2.0 * xi;
  double rkmu, rk1;
  if (x < 2.0) {
    // Temme's series for K_mu, K_{mu+1}
    double x2 = 0.5 * x, pimu = kPi * mu;
    double fact = std::abs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    double fact2 = std::abs(e) < eps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= maxit; ++i) {
      ff = (i * ff + p + q) / (i * i - mu2);
      c *= d / i;
      p /= (i - mu);
      q /= (i + mu);
      double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    rkmu = sum;
    rk1 = sum1 * xi2;
  } else {
    // Steed's continued fraction
    double b = 2.0 * (1.0 + x), d = 1.0 / b, h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double a1 = 0.25 - mu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= maxit; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < eps) break;
    }
    h = a1 * h;
    rkmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    rk1 = rkmu * (mu + x + 0.5 - h) * xi;
  }
  for (int i = 1; i <= nl; ++i) {
    double next = (mu + i) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = next;
  }
  return rkmu;
}

cplx eta_product(cplx z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("eta: requires Im z > 0");
  const cplx twopii(0.0, 2.0 * kPi);
  cplx q = std::exp(twopii * z);
  double aq = std::abs(q);
  cplx prod = 1.0, qn = q;
  double mag = aq;
  while (mag > 1e-18) {
    prod *= (1.0 - qn);
    qn *= q;
    mag *= aq;
  }
  return std::exp(twopii * z / 24.0) * prod;
}

cplx eta_pentagonal_series(cplx z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("eta: requires Im z > 0");
  const cplx twopii(0.0, 2.0 * kPi);
  const double y = z.imag();
  cplx sum = 1.0;
  for (long n = 1;; ++n) {
    double e1 = n * (3.0 * n - 1.0) / 2.0, e2 = n * (3.0 * n + 1.0) / 2.0;
    if (2.0 * kPi * y * e1 > 45.0) break;
    double sign = (n % 2) ? -1.0 : 1.0;
    sum += sign * (std::exp(twopii * (e1 * z)) + std::exp(twopii * (e2 * z)));
  }
  return std::exp(twopii * z / 24.0) * sum;
}

double dedekind_sum(std::int64_t h, std::int64_t k) {
  if (k < 1) throw std::domain_error("dedekind_sum: requires k >= 1");
  double sign = 1.0, acc = 0.0;
  h %= k;
  if (h < 0) h += k;
  // reciprocity: s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk)) / 12
  while (h != 0) {
    double hd = static_cast<double>(h), kd = static_cast<double>(k);
    acc += sign * (-0.25 + (hd * hd + kd * kd + 1.0) / (12.0 * hd * kd));
    sign = -sign;
    std::int64_t r = k % h;
    k = h;
    h = r;
  }
  return acc;
}

cplx dedekind_eta(cplx z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("eta: requires Im z > 0");
  if (z.imag() >= 0.25) return eta_product(z);
  auto [w, g] = reduce_to_fundamental_domain(UTBPoint(z.real(), z.imag(), 0.0));
  cplx etaw = eta_product(w.z());
  // eta(g z) = eps(g) sqrt(-i(cz+d)) eta(z)
  const auto a = g.a(), b = g.b(), c = g.c(), d = g.d();
  if (c == 0) return etaw * std::exp(cplx(0.0, -kPi * static_cast<double>(b) / 12.0));
  double phase = kPi * (static_cast<double>(a + d) / (12.0 * c) - dedekind_sum(d, c));
  cplx mult = std::exp(cplx(0.0, phase)) *
              std::sqrt(cplx(0.0, -1.0) * (static_cast<double>(c) * z + static_cast<double>(d)));
  return etaw / mult;
}

double log_abs_eta(cplx z) {
  if (!(z.imag() > 0.0)) throw std::domain_error("eta: requires Im z > 0");
  cplx w = z;
  if (z.imag() < 0.8) w = reduce_to_fundamental_domain(UTBPoint(z.real(), z.imag(), 0.0)).first.z();
  const double y = w.imag();
  cplx q = std::exp(cplx(0.0, 2.0 * kPi) * w);
  double aq = std::abs(q), mag = aq;
  cplx qn = q;
  double s = -kPi * y / 12.0;
  while (mag > 1e-18) {
    s += std::log(std::abs(1.0 - qn));
    qn *= q;
    mag *= aq;
  }
  return s + 0.25 * (std::log(y) - std::log(z.imag()));
}

double divisor_sigma(double s, std::int64_t n) {
  if (n < 1) throw std::domain_error("divisor_sigma: requires n >= 1");
  double sum = 0.0;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    std::int64_t e = n / d;
    sum += std::pow(static_cast<double>(d), s);
    if (e != d) sum += std::pow(static_cast<double>(e), s);
  }
  return sum;
}

}  // namespace shearlab
