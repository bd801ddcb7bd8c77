#include "shearlab/eisenstein.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "shearlab/fit.hpp"
#include "shearlab/special.hpp"

namespace shearlab {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this reduced height the thin route sums node by node instead of
// through the precomputed Fourier modes.
constexpr double kModeHeight = 0.6;
constexpr int kLevels = 4;

double completed_zeta(double s) { return std::pow(kPi, -0.5 * s) * gamma_fn(0.5 * s) * zeta(s); }

// Depth-first walk over Gamma_inf \ Gamma / Gamma_inf for the Hecke-type
// group of width w >= 3. Each node is a bottom row (c, d) with |d| < c;
// children are (d + w m c, -c) for m != 0, so c grows by a factor >= w - 1.
template <class Visit>
void walk_coset_tree(int w, double cutoff, Visit&& visit) {
  const auto C = static_cast<std::int64_t>(std::floor(cutoff));
  std::vector<std::pair<std::int64_t, std::int64_t>> stack{{1, 0}};
  while (!stack.empty()) {
    auto [c, d] = stack.back();
    stack.pop_back();
    visit(c, d);
    const std::int64_t step = static_cast<std::int64_t>(w) * c;
    // |d + m step| <= C
    const std::int64_t mlo = -((C + d) / step), mhi = (C - d) / step;
    for (std::int64_t m = mlo; m <= mhi; ++m) {
      if (m == 0) continue;
      const std::int64_t e = d + m * step;
      stack.push_back({std::abs(e), e > 0 ? -c : c});
    }
  }
}

int level_of(std::int64_t c, double cutoff) {
  int b = static_cast<int>(std::floor(std::log2(cutoff / static_cast<double>(c))));
  return std::clamp(b, 0, kLevels - 1);
}

// Sum over k of y^s / |u + w k + i y|^{2s}.
double periodized_power(double u, double y, double s, int w) {
  u -= w * std::floor(u / w + 0.5);
  if (s == 1.0) {
    const double a = 2.0 * kPi * y / w;
    // sinh(a) / (cosh(a) - cos(2 pi u / w)) written to avoid cancellation
    const double num = -std::expm1(-2.0 * a);
    const double den = 1.0 - 2.0 * std::exp(-a) * std::cos(2.0 * kPi * u / w) + std::exp(-2.0 * a);
    return kPi / w * num / den;
  }
  const int K = 64;
  double sum = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double v = u + w * k;
    sum += std::pow(y * y / (v * v + y * y), s) * std::pow(y, -s);
  }
  for (double sign : {1.0, -1.0}) {
    const double v0 = sign * u + w * (K + 0.5);
    double tail = std::pow(y, s) * std::pow(v0, 1.0 - 2.0 * s) / (w * (2.0 * s - 1.0));
    tail -= s * std::pow(y, s + 2.0) * std::pow(v0, -1.0 - 2.0 * s) / (w * (2.0 * s + 1.0));
    tail += 2.0 * s * w * std::pow(y, s) * std::pow(v0, -2.0 * s - 1.0) / 24.0;
    sum += tail;
  }
  return sum;
}

EisensteinValue extrapolate(const std::array<double, kLevels>& level_values, double p) {
  const double r = std::pow(2.0, p) - 1.0;
  const double x0 = level_values[0] + (level_values[0] - level_values[1]) / r;
  const double x1 = level_values[1] + (level_values[1] - level_values[2]) / r;
  return {x0, std::abs(x0 - x1), EisensteinRoute::CosetSum};
}

}  // namespace

std::string to_string(EisensteinRoute r) {
  switch (r) {
    case EisensteinRoute::Auto: return "auto";
    case EisensteinRoute::Fourier: return "fourier";
    case EisensteinRoute::CosetSum: return "coset";
  }
  return "?";
}

EisensteinRoute eisenstein_route_from_string(const std::string& s) {
  for (auto r : {EisensteinRoute::Auto, EisensteinRoute::Fourier, EisensteinRoute::CosetSum})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown Eisenstein route '" + s + "'");
}

struct EisensteinEvaluator::ModeTable {
  int modes = 0;
  // weights[j][n] = sum over tree nodes with c <= C / 2^j of c^{-2s} e(n d / (w c))
  std::array<std::vector<std::complex<double>>, kLevels> weights;
};

EisensteinEvaluator::EisensteinEvaluator(const GroupSpec& spec, EisensteinRoute route, EisensteinOptions options,
                                         std::size_t cusp_index)
    : spec_(spec), route_(route), options_(options) {
  auto w = spec.hecke_width();
  if (!w || *w == 2) throw std::invalid_argument("Eisenstein series need a built-in Hecke-type group of width 1 or >= 3");
  if (cusp_index != 0) throw std::invalid_argument("only the cusp at infinity is supported");
  width_ = *w;
  if (width_ != 1 && route == EisensteinRoute::Fourier)
    throw NonConvergentError("the Fourier route is only available for the lattice");
}

EisensteinEvaluator::~EisensteinEvaluator() = default;

double EisensteinEvaluator::thin_cutoff() const {
  return options_.max_coset_height > 0.0 ? options_.max_coset_height : std::ldexp(1.0, 18);
}

double EisensteinEvaluator::delta_hat() const {
  if (lattice()) return 1.0;
  if (spec_.delta_hat) return *spec_.delta_hat;
  std::lock_guard lock(mutex_);
  if (delta_hat_ == 0.0) delta_hat_ = count_coset_tree(width_, std::ldexp(1.0, 18)).exponent;
  return delta_hat_;
}

CosetTreeCount count_coset_tree(int width, double max_cutoff) {
  if (width < 3) throw std::invalid_argument("count_coset_tree: width must be >= 3");
  const int levels = std::max(1, static_cast<int>(std::floor(std::log2(max_cutoff))) + 1);
  std::vector<std::size_t> bucket(levels, 0);
  walk_coset_tree(width, max_cutoff, [&](std::int64_t c, std::int64_t) {
    int b = static_cast<int>(std::floor(std::log2(max_cutoff / static_cast<double>(c))));
    ++bucket[std::clamp(b, 0, levels - 1)];
  });
  CosetTreeCount out;
  std::size_t acc = 0;
  std::vector<std::size_t> cum(levels);
  for (int j = levels - 1; j >= 0; --j) cum[j] = acc += bucket[j];
  for (int j = 0; j < levels; ++j) {
    out.cutoffs.push_back(std::ldexp(max_cutoff, -j));
    out.counts.push_back(cum[j]);
  }
  // slope of log N(C) over the top five octaves; N(C) grows like C^{2 delta}
  std::vector<double> x, y;
  for (int j = 0; j < std::min(levels, 5); ++j) {
    x.push_back(out.cutoffs[j]);
    y.push_back(static_cast<double>(out.counts[j]));
  }
  out.exponent = x.size() >= 2 ? 0.5 * loglog_slope(x, y) : 0.0;
  return out;
}

const EisensteinEvaluator::ModeTable& EisensteinEvaluator::modes(double s) const {
  std::lock_guard lock(mutex_);
  auto it = tables_.find(s);
  if (it != tables_.end()) return *it->second;
  auto table = std::make_unique<ModeTable>();
  // e^{-2 pi n y / w} < 1e-15 at the lowest height served by the modes
  table->modes = static_cast<int>(std::ceil(35.0 * width_ / (2.0 * kPi * kModeHeight)));
  const int N = table->modes;
  std::array<std::vector<std::complex<double>>, kLevels> bucket;
  for (auto& b : bucket) b.assign(N + 1, 0.0);
  const double C = thin_cutoff();
  const double w = width_;
  walk_coset_tree(width_, C, [&](std::int64_t c, std::int64_t d) {
    const double cd = static_cast<double>(c);
    const double weight = std::pow(cd, -2.0 * s);
    const std::complex<double> step = std::polar(1.0, 2.0 * kPi * static_cast<double>(d) / (w * cd));
    auto& b = bucket[level_of(c, C)];
    std::complex<double> z = weight;
    for (int n = 0; n <= N; ++n) {
      b[n] += z;
      z *= step;
    }
  });
  for (int j = kLevels - 1; j >= 0; --j) {
    table->weights[j] = bucket[j];
    if (j + 1 < kLevels)
      for (int n = 0; n <= N; ++n) table->weights[j][n] += table->weights[j + 1][n];
  }
  auto& ref = *table;
  tables_.emplace(s, std::move(table));
  return ref;
}

EisensteinValue EisensteinEvaluator::thin_modes(const UTBPoint& z, double s) const {
  const ModeTable& t = modes(s);
  const double w = width_, x = z.x, y = z.y;
  // Poisson summation of the periodized y^s |z + w k|^{-2s}
  std::vector<double> amp(t.modes + 1);
  if (s == 1.0) {
    for (int n = 0; n <= t.modes; ++n) amp[n] = kPi * std::exp(-2.0 * kPi * n * y / w);
  } else {
    amp[0] = std::sqrt(kPi) * gamma_fn(s - 0.5) / gamma_fn(s) * std::pow(y, 1.0 - s);
    const double pref = 2.0 * std::pow(kPi, s) / gamma_fn(s) * std::sqrt(y);
    for (int n = 1; n <= t.modes; ++n)
      amp[n] = pref * std::pow(n / w, s - 0.5) * bessel_k(s - 0.5, 2.0 * kPi * n * y / w);
  }
  std::array<double, kLevels> lv{};
  for (int j = 0; j < kLevels; ++j) {
    double acc = amp[0] * t.weights[j][0].real();
    for (int n = 1; n <= t.modes; ++n)
      acc += 2.0 * amp[n] * (std::polar(1.0, 2.0 * kPi * n * x / w) * t.weights[j][n]).real();
    lv[j] = (std::pow(y, s) + acc / w) / w;
  }
  return extrapolate(lv, 2.0 * s - 2.0 * delta_hat());
}

EisensteinValue EisensteinEvaluator::thin_direct(const UTBPoint& z, double s) const {
  const double C = thin_cutoff() / 4.0;
  std::array<double, kLevels> bucket{};
  walk_coset_tree(width_, C, [&](std::int64_t c, std::int64_t d) {
    const double cd = static_cast<double>(c);
    bucket[level_of(c, C)] += std::pow(cd, -2.0 * s) * periodized_power(z.x + static_cast<double>(d) / cd, z.y, s, width_);
  });
  std::array<double, kLevels> lv{};
  double acc = 0.0;
  for (int j = kLevels - 1; j >= 0; --j) {
    acc += bucket[j];
    lv[j] = (std::pow(z.y, s) + acc) / width_;
  }
  return extrapolate(lv, 2.0 * s - 2.0 * delta_hat());
}

EisensteinValue EisensteinEvaluator::lattice_fourier(const UTBPoint& z, double s) const {
  if (!(s > 0.5) || s == 1.0) throw NonConvergentError("Fourier route needs s > 1/2, s != 1");
  const double x = z.x, y = z.y;
  const double xi2s = completed_zeta(2.0 * s);
  double value = std::pow(y, s) + completed_zeta(2.0 * s - 1.0) / xi2s * std::pow(y, 1.0 - s);
  const double pref = 4.0 * std::sqrt(y) / xi2s;
  const double nu = s - 0.5;
  double last = 0.0;
  const int fixed = options_.max_mode;
  for (int n = 1; n <= 10000; ++n) {
    const double term = pref * std::pow(n, nu) * divisor_sigma(1.0 - 2.0 * s, n) *
                        bessel_k(nu, 2.0 * kPi * n * y) * std::cos(2.0 * kPi * n * x);
    value += term;
    last = std::abs(pref * std::pow(n, nu) * divisor_sigma(1.0 - 2.0 * s, n) * bessel_k(nu, 2.0 * kPi * n * y));
    if (fixed > 0) {
      if (n >= fixed) break;
    } else if (last < 1e-17 * std::max(1.0, std::abs(value)) && 2.0 * kPi * n * y > 4.0) {
      break;
    }
  }
  return {value, last, EisensteinRoute::Fourier};
}

EisensteinValue EisensteinEvaluator::lattice_cosets(const UTBPoint& z, double s) const {
  if (!(s > 1.0)) throw NonConvergentError("coset route needs s > 1 on the lattice");
  const double R = options_.max_coset_height > 0.0 ? options_.max_coset_height : 2000.0;
  const double x = z.x, y = z.y;
  long double sum = 0.0L;
  const auto cmax = static_cast<std::int64_t>(std::floor(R / y));
  for (std::int64_t c = 1; c <= cmax; ++c) {
    const double cy = c * y;
    const double h2 = R * R - cy * cy;
    if (h2 < 0.0) break;
    const double h = std::sqrt(h2), center = -c * x;
    long double row = 0.0L;
    for (auto d = static_cast<std::int64_t>(std::ceil(center - h)); d <= static_cast<std::int64_t>(std::floor(center + h));
         ++d) {
      if (std::gcd(c, d) != 1) continue;
      const double re = c * x + d;
      row += std::pow(re * re + cy * cy, -s);
    }
    sum += row;
  }
  double value = std::pow(y, s) * (1.0 + static_cast<double>(sum));
  // lattice-point density 6 r / (pi y) beyond the sharp cutoff
  value += 3.0 / kPi * std::pow(y, s - 1.0) * std::pow(R, 2.0 - 2.0 * s) / (s - 1.0);
  const double err = std::pow(y, s - 0.5) * std::pow(R, 1.0 - 2.0 * s) * std::log(R);
  return {value, err, EisensteinRoute::CosetSum};
}

EisensteinValue EisensteinEvaluator::evaluate(const UTBPoint& z, double s) const {
  if (!std::isfinite(s)) throw std::invalid_argument("Eisenstein: s must be finite");
  const UTBPoint r = reduce_point(z, width_);
  if (lattice()) {
    if (route_ == EisensteinRoute::CosetSum) return lattice_cosets(r, s);
    return lattice_fourier(r, s);
  }
  const double dh = delta_hat();
  if (!(s > dh + 0.1))
    throw NonConvergentError("thin coset sum needs s > delta_hat + 0.1 (delta_hat = " + std::to_string(dh) + ")");
  return r.y >= kModeHeight ? thin_modes(r, s) : thin_direct(r, s);
}

double regularized_E1(const UTBPoint& z) {
  const double ratio = zeta_prime(2.0) / zeta(2.0);
  const double log_term = std::log(4.0 * z.y) + 4.0 * log_abs_eta(cplx(z.x, z.y));
  return 3.0 / kPi * (2.0 * kEulerGamma - 2.0 * ratio - log_term);
}

double mu_eis(const EisensteinEvaluator& e, const TestFunction& psi, bool regularized, double tol) {
  if (!psi.k_invariant) throw std::invalid_argument("mu_eis: only K-invariant test functions are supported");
  if (psi.width != e.width()) throw std::invalid_argument("mu_eis: test function and evaluator use different groups");
  if (e.lattice() && !regularized)
    throw NonConvergentError("mu_eis: E(., s) has a pole at s = 1 on the lattice; use the regularized pairing");
  double y_max = 0.0;
  if (!psi.support) {
    // E grows like y in the cusp, so the pairing needs alpha > 1
    if (!(psi.alpha_psi > 1.0)) throw NonConvergentError("mu_eis: divergent pairing (needs cusp decay alpha > 1)");
    y_max = std::max(psi.C_psi, std::pow(psi.C_psi / ((psi.alpha_psi - 1.0) * tol), 1.0 / (psi.alpha_psi - 1.0)));
  }
  std::function<double(double, double)> f;
  if (e.lattice()) {
    f = [](double x, double y) { return regularized_E1(UTBPoint(x, y, 0.0)); };
  } else {
    f = [&e](double x, double y) { return e.evaluate(UTBPoint(x, y, 0.0), 1.0).value; };
  }
  return integrate_fundamental_domain(psi, f, tol, y_max);
}

}  // namespace shearlab
