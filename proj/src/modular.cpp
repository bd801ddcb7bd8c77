#include "shearlab/modular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shearlab/eisenstein.hpp"
#include "shearlab/group.hpp"
#include "shearlab/parallel.hpp"
#include "shearlab/quadrature.hpp"
#include "shearlab/special.hpp"

namespace shearlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Smoothing weights exp(-n/X) at X, X/2, X/4, X/8; the smoothed sums differ
// from the limit by a power series in 1/X, removed to third order.
constexpr std::array<double, 4> kRichardson4{64.0 / 21.0, -56.0 / 21.0, 14.0 / 21.0, -1.0 / 21.0};
constexpr std::array<double, 3> kRichardson3{8.0 / 3.0, -6.0 / 3.0, 1.0 / 3.0};

struct Smoothed {
  double value;
  double error;
  double cutoff;
};

// Extrapolated sum_n coef(n) g(n) as the smoothing scale goes to infinity.
template <class G>
Smoothed smoothed_sum(const std::vector<double>& coef, G&& g) {
  const std::size_t N = coef.size() - 1;
  const double X = static_cast<double>(N) / 40.0;
  if (X < 100.0) throw std::invalid_argument("smoothed Dirichlet series: need at least 4000 coefficients");
  std::array<double, 5> level{};
  for (std::size_t n = 1; n <= N; ++n) {
    if (coef[n] == 0.0) continue;
    const double t = coef[n] * g(static_cast<double>(n));
    const double r = static_cast<double>(n) / X;
    for (int j = 0; j < 5; ++j) level[j] += t * std::exp(-r * std::ldexp(1.0, j));
  }
  double v4 = 0.0, v4b = 0.0, v3 = 0.0;
  for (int j = 0; j < 4; ++j) v4 += kRichardson4[j] * level[j];
  for (int j = 0; j < 4; ++j) v4b += kRichardson4[j] * level[j + 1];
  for (int j = 0; j < 3; ++j) v3 += kRichardson3[j] * level[j];
  return {v4, std::max(std::abs(v4 - v4b), std::abs(v4 - v3)), X};
}

std::vector<double> sym2_coefficients(const QExpansion& f, std::size_t N) {
  if (f.size() < N) throw std::invalid_argument("sym2: not enough q-expansion coefficients");
  std::vector<int> mu(N + 1, 1);
  std::vector<bool> composite(N + 1, false);
  for (std::size_t p = 2; p <= N; ++p) {
    if (composite[p]) continue;
    for (std::size_t m = p; m <= N; m += p) {
      if (m > p) composite[m] = true;
      mu[m] = -mu[m];
    }
    for (std::size_t m = p * p; m <= N; m += p * p) mu[m] = 0;
  }
  std::vector<double> sq(N + 1), b(N + 1, 0.0), c(N + 1, 0.0);
  for (std::size_t n = 1; n <= N; ++n) sq[n] = f.normalized(n) * f.normalized(n);
  for (std::size_t d = 1; d <= N; ++d) {
    if (mu[d] == 0) continue;
    for (std::size_t m = d, q = 1; m <= N; m += d, ++q) b[m] += mu[d] * sq[q];
  }
  for (std::size_t k = 1; k * k <= N; ++k)
    for (std::size_t m = k * k, q = 1; m <= N; m += k * k, ++q) c[m] += b[q];
  return c;
}

}  // namespace

std::string to_string(int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

double QExpansion::normalized(std::size_t n) const {
  return a(n) / std::pow(static_cast<double>(n), 0.5 * (weight - 1));
}

QExpansion delta_qexp(std::size_t N) {
  if (N < 1) throw std::invalid_argument("delta_qexp: N must be >= 1");
  // prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}; the 24th power is its 8th power.
  std::vector<std::pair<std::size_t, int128>> jacobi;
  for (std::size_t k = 0; k * (k + 1) / 2 < N; ++k)
    jacobi.push_back({k * (k + 1) / 2, (k % 2 ? -1 : 1) * static_cast<int128>(2 * k + 1)});
  std::vector<int128> acc(N, 0);
  for (const auto& [e, v] : jacobi) acc[e] = v;
  for (int power = 2; power <= 8; ++power) {
    std::vector<int128> next(N, 0);
    for (std::size_t i = 0; i < N; ++i) {
      if (acc[i] == 0) continue;
      for (const auto& [e, v] : jacobi) {
        if (i + e >= N) break;
        next[i + e] += acc[i] * v;
      }
    }
    acc.swap(next);
  }
  QExpansion f;
  f.weight = 12;
  f.coeffs.assign(N + 1, 0);
  for (std::size_t n = 1; n <= N; ++n) f.coeffs[n] = acc[n - 1];
  return f;
}

namespace {

// Series at a point of the fundamental domain; |q| <= exp(-pi sqrt 3).
cplx series_value(const QExpansion& f, cplx w) {
  const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * w);
  cplx qn = q, sum = 0.0;
  const double aq = std::abs(q);
  double mag = aq;
  for (std::size_t n = 1; n <= f.size(); ++n) {
    const cplx term = f.a(n) * qn;
    sum += term;
    if (n > 2 && std::abs(f.a(n)) * mag < 1e-18 * std::abs(sum)) break;
    qn *= q;
    mag *= aq;
    if (mag == 0.0) break;
  }
  return f.scale * sum;
}

}  // namespace

cplx eval_form(const QExpansion& f, const UTBPoint& z) {
  auto [w, g] = reduce_to_fundamental_domain(z, 1);
  const cplx fw = series_value(f, cplx(w.x, w.y));
  // f(g z) = (c z + d)^k f(z)
  const cplx j = static_cast<double>(g.c()) * cplx(z.x, z.y) + static_cast<double>(g.d());
  return fw * std::pow(j, -f.weight);
}

double eval_psi_f(const QExpansion& f, const UTBPoint& z) {
  const UTBPoint w = reduce_point(z, 1);
  return std::norm(series_value(f, cplx(w.x, w.y))) * std::pow(w.y, f.weight);
}

TestFunction make_form_test_function(const QExpansion& f) {
  TestFunction t;
  t.name = "psi_f";
  t.width = 1;
  t.k_invariant = true;
  // y^k |f|^2 <= y^k e^{-4 pi y} (1 + small) stays below y^{-20} for y > 1
  t.C_psi = std::max(1.0, f.scale * f.scale);
  t.alpha_psi = 20.0;
  t.evaluator = [f](const UTBPoint& p) { return eval_psi_f(f, p); };
  t.profile = [f](double x, double y) { return eval_psi_f(f, UTBPoint(x, y, 0.0)); };
  double peak = 0.0;
  for (double y = 0.87; y < 3.0; y += 0.01) peak = std::max(peak, eval_psi_f(f, UTBPoint(0.5, y, 0.0)));
  for (double y = 0.87; y < 3.0; y += 0.01) peak = std::max(peak, eval_psi_f(f, UTBPoint(0.0, y, 0.0)));
  t.peak = peak;
  return t;
}

double petersson_norm_sq(const QExpansion& f, double rel_tol) {
  const TestFunction psi = make_form_test_function(f);
  const double scale = psi.peak;
  return integrate_fundamental_domain(psi, [](double, double) { return 1.0; }, rel_tol * scale, 12.0);
}

LSeriesValue sym2_L(const QExpansion& f, double s, bool want_derivative) {
  if (!(s >= 1.0)) throw std::invalid_argument("sym2_L: s must be >= 1");
  const std::vector<double> c = sym2_coefficients(f, f.size());
  LSeriesValue out;
  out.s = s;
  auto val = smoothed_sum(c, [s](double n) { return std::pow(n, -s); });
  out.value = val.value;
  out.error = val.error;
  out.cutoff = val.cutoff;
  out.terms = c.size() - 1;
  const double k1 = f.weight - 1;
  out.completed = std::exp(-(s + k1) * std::log(4.0 * kPi) + std::lgamma(s + k1)) * out.value;
  if (want_derivative) {
    auto der = smoothed_sum(c, [s](double n) { return -std::log(n) * std::pow(n, -s); });
    out.derivative = der.value;
    out.error = std::max(out.error, der.error);
    out.completed_log_derivative = -std::log(4.0 * kPi) + digamma(s + k1) + out.derivative / out.value;
    out.has_derivative = true;
  }
  if (out.error > 1e-4 * std::abs(out.value))
    throw InsufficientConvergenceError("sym2_L: smoothing cutoffs disagree beyond 1e-4 relative");
  return out;
}

double sym2_L_partial(const QExpansion& f, double s, std::size_t N) {
  if (!(s > 1.0)) throw std::invalid_argument("sym2_L_partial: needs s > 1");
  const std::vector<double> c = sym2_coefficients(f, N);
  std::vector<double> terms(N);
  for (std::size_t n = 1; n <= N; ++n) terms[n - 1] = c[n] * std::pow(static_cast<double>(n), -s);
  return pairwise_sum(terms);
}

LSeriesValue standard_L(const QExpansion& f, double s) {
  std::vector<double> lam(f.size() + 1, 0.0);
  for (std::size_t n = 1; n <= f.size(); ++n) lam[n] = f.normalized(n);
  auto v = smoothed_sum(lam, [s](double n) { return std::pow(n, -s); });
  LSeriesValue out;
  out.s = s;
  out.value = f.scale * v.value;
  out.error = f.scale * v.error;
  out.cutoff = v.cutoff;
  out.terms = f.size();
  return out;
}

cplx weight_W(int k, cplx s, double T) {
  const cplx a = s + 0.5 * (k - 1);
  if (!(a.real() > 0.0)) throw std::invalid_argument("weight_W: Re(s + (k-1)/2) must be positive");
  return std::exp(-a * std::log(2.0 * kPi) + log_gamma(a) - a * std::log(cplx(1.0, -T)));
}

cplx hecke_integral(const QExpansion& f, double s, double T, double rel_tol) {
  const double a = s + 0.5 * (f.weight - 1);
  if (!(s > 0.5)) throw std::invalid_argument("hecke_integral: needs s > 1/2");
  // |f(z)| y^{k/2} is bounded, so the integrand is O(y^{s - 1/2}) at 0
  const double ulo = std::log(1e-18) / (s - 0.5), uhi = std::log(60.0);
  AdaptiveOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = rel_tol;
  opt.initial_panels = static_cast<std::size_t>(std::ceil((uhi - ulo) * std::max(1.0, std::abs(T)) * 10.0));
  auto g = [&](double u) {
    const double y = std::exp(u);
    return eval_form(f, UTBPoint(T * y, y, 0.0)) * std::exp(a * u);
  };
  return integrate_adaptive<cplx>(g, ulo, uhi, opt).value;
}

ShearSample second_moment_lhs(const QExpansion& f, double T, double rel_tol) {
  if (!(T > 1.0)) throw std::invalid_argument("second_moment_lhs: T must exceed 1");
  const double Tt2 = T * T + 1.0;
  // Below y ~ 1/(40 T~^2) the point Ty + iy sits high in the cusp at 0.
  const double ulo = std::log(1.0 / (40.0 * Tt2)), uhi = std::log(40.0);
  TestFunction psi = make_form_test_function(f);
  AdaptiveOptions opt;
  opt.abs_tol = rel_tol * psi.peak;
  opt.rel_tol = rel_tol;
  opt.initial_panels = static_cast<std::size_t>(std::ceil((uhi - ulo) / (0.05 / T)));
  opt.parallel = true;
  auto g = [&](double u) {
    const double y = std::exp(u);
    return eval_psi_f(f, UTBPoint(T * y, y, 0.0));
  };
  auto r = integrate_adaptive<double>(g, ulo, uhi, opt);
  ShearSample out;
  out.T = T;
  out.value = r.value;
  out.error = r.error;
  out.nodes = r.evaluations;
  out.upper_cutoff = 40.0;
  out.converged = r.converged;
  return out;
}

MomentConstants moment_constants(const QExpansion& f) {
  MomentConstants c;
  c.norm_sq = petersson_norm_sq(f);
  c.haar_mean = 3.0 / kPi * c.norm_sq;
  c.sym2_log_derivative = sym2_L(f, 1.0, true).completed_log_derivative;
  c.constant = c.sym2_log_derivative + kEulerGamma - 2.0 * zeta_prime(2.0) / zeta(2.0);
  return c;
}

double second_moment_prediction(const MomentConstants& c, double T) {
  return 2.0 * c.haar_mean * (std::log(T) + c.constant);
}

KroneckerCheck kronecker_check(const QExpansion& f) {
  const TestFunction psi = make_form_test_function(f);
  const double norm_sq = petersson_norm_sq(f);
  const double tol = 1e-12 * psi.peak;
  auto log_term = [](double x, double y) { return std::log(4.0 * y) + 4.0 * log_abs_eta(cplx(x, y)); };
  KroneckerCheck k;
  k.lhs = integrate_fundamental_domain(psi, log_term, tol, 12.0) / norm_sq;
  k.rhs = kEulerGamma - sym2_L(f, 1.0, true).completed_log_derivative;
  k.gap = std::abs(k.lhs - k.rhs);
  EisensteinEvaluator e(psl2z_spec());
  const double mu = mu_eis(e, psi, true, tol);
  k.via_regularized_eisenstein = 2.0 * kEulerGamma - 2.0 * zeta_prime(2.0) / zeta(2.0) - kPi / 3.0 * mu / norm_sq;
  return k;
}

}  // namespace shearlab
