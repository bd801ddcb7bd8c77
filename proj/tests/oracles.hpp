#pragma once

// Reference implementations used only by the tests. Each one takes a route
// that shares no code with the library beyond the basic matrix/form types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "shearlab/group.hpp"

namespace oracle {

using i64 = std::int64_t;

inline double trapezoid(const auto& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
  return s * h;
}

// K_nu(x) e^{x} = int_0^inf e^{-x (cosh t - 1)} cosh(nu t) dt, by the
// trapezoid rule (exponentially accurate for this analytic integrand).
inline double bessel_k_scaled(double nu, double x) {
  double t_max = std::acosh(1.0 + 800.0 / x);
  t_max = std::max(t_max, 1.0);
  const double h = std::min(0.01, 0.05 / std::sqrt(x));
  auto f = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
  return trapezoid(f, 0.0, t_max, static_cast<std::size_t>(std::ceil(t_max / h)));
}

// Cohen-Rodriguez Villegas-Zagier acceleration of sum_{k>=0} (-1)^k a(k).
inline double alternating_sum(const auto& a, int n = 40) {
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c * a(k);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

// zeta(s) and zeta'(s) for s > 0 through the alternating eta series.
struct ZetaPair {
  double zeta, zeta_prime;
};
inline ZetaPair zeta_via_eta(double s) {
  double eta = alternating_sum([&](int k) { return std::pow(k + 1.0, -s); });
  double eta_p = -alternating_sum([&](int k) { return std::log(k + 1.0) * std::pow(k + 1.0, -s); });
  double f = 1.0 - std::pow(2.0, 1.0 - s);
  double fp = std::pow(2.0, 1.0 - s) * std::log(2.0);
  return {eta / f, (eta_p * f - eta * fp) / (f * f)};
}

// Divisor power sum by trial division.
inline i64 sigma_int(int k, i64 n) {
  i64 s = 0;
  for (i64 d = 1; d <= n; ++d)
    if (n % d == 0) {
      i64 p = 1;
      for (int j = 0; j < k; ++j) p *= d;
      s += p;
    }
  return s;
}

// tau(1..N) from 1728 Delta = E4^3 - E6^2 using exact integer series.
inline std::vector<__int128> tau_from_eisenstein(std::size_t N) {
  std::vector<__int128> e4(N + 1), e6(N + 1);
  e4[0] = e6[0] = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    e4[n] = 240 * static_cast<__int128>(sigma_int(3, static_cast<i64>(n)));
    e6[n] = -504 * static_cast<__int128>(sigma_int(5, static_cast<i64>(n)));
  }
  auto mul = [N](const std::vector<__int128>& a, const std::vector<__int128>& b) {
    std::vector<__int128> c(N + 1, 0);
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t j = 0; i + j <= N; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  auto e4c = mul(mul(e4, e4), e4);
  auto e6s = mul(e6, e6);
  std::vector<__int128> tau(N + 1, 0);
  for (std::size_t n = 1; n <= N; ++n) tau[n] = (e4c[n] - e6s[n]) / 1728;
  return tau;
}

// Factor an integral form of discriminant 1 as (a u + b v)(c u + d v) with
// ad - bc = 1, i.e. find g with (0,1,0).g = form. Returns nullopt when no
// integral factorization exists.
inline std::optional<shearlab::IntGroupElement> factor_unit_discriminant(const shearlab::IntFormVector& f) {
  const i64 p = f.p, q = f.q, r = f.r;
  if (q * q - 4 * p * r != 1) return std::nullopt;
  i64 a, b, c, d;
  if (p == 0) {
    // v (q u + r v) with q = +-1
    a = 0, b = 1, c = q, d = r;
  } else {
    // roots u/v = (-q +- 1) / (2p); each gives a primitive linear factor.
    auto factor = [&](i64 num) {
      i64 den = 2 * p;
      i64 g = std::gcd(num, den);
      num /= g, den /= g;
      return std::pair<i64, i64>{den, -num};  // den u - num v
    };
    auto [a1, b1] = factor(-q + 1);
    auto [c1, d1] = factor(-q - 1);
    // p = k a1 c1 with k = +-1 for a unit discriminant form.
    i64 lead = a1 * c1;
    if (lead == 0 || p % lead != 0) return std::nullopt;
    i64 k = p / lead;
    if (k != 1 && k != -1) return std::nullopt;
    a = k * a1, b = k * b1, c = c1, d = d1;
  }
  if (a * d - b * c == -1) std::swap(a, c), std::swap(b, d);
  if (a * d - b * c != 1) return std::nullopt;
  // uv o g with g = (a b; c d) gives (a u + b v)(c u + d v).
  shearlab::IntGroupElement g(a, b, c, d);
  shearlab::IntFormVector back = shearlab::spin_cover(g, shearlab::IntFormVector{0, 1, 0});
  if (!(back == f)) return std::nullopt;
  return g;
}

// Number of orbit points of (0,1,0) under PSL(2,Z) with sup norm < T: scan
// every integral form in the box and keep those admitting a factorization.
inline i64 lacunary_count_bruteforce(i64 T_strict) {
  i64 count = 0;
  for (i64 p = -T_strict + 1; p < T_strict; ++p)
    for (i64 q = -T_strict + 1; q < T_strict; ++q)
      for (i64 r = -T_strict + 1; r < T_strict; ++r)
        if (factor_unit_discriminant({p, q, r})) ++count;
  return count;
}

// All canonical PSL(2,Z) matrices with a^2 + b^2 + c^2 + d^2 <= R^2.
inline std::set<shearlab::IntGroupElement> psl2z_ball(double R) {
  std::set<shearlab::IntGroupElement> out;
  const i64 m = static_cast<i64>(std::floor(R));
  const double R2 = R * R;
  for (i64 a = -m; a <= m; ++a)
    for (i64 b = -m; b <= m; ++b)
      for (i64 c = -m; c <= m; ++c)
        for (i64 d = -m; d <= m; ++d) {
          if (a * d - b * c != 1) continue;
          if (static_cast<double>(a * a + b * b + c * c + d * d) > R2) continue;
          out.insert(shearlab::IntGroupElement(a, b, c, d));
        }
  return out;
}

}  // namespace oracle
