#include "shearlab/shear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <stdexcept>

#include "shearlab/fit.hpp"
#include "shearlab/quadrature.hpp"

namespace shearlab {

namespace {

constexpr double kPi = std::numbers::pi;

double bump1d(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

int hecke_width_or_throw(const GroupSpec& spec) {
  auto w = spec.hecke_width();
  if (!w) throw std::invalid_argument("group '" + spec.name + "' has no built-in fundamental domain");
  return *w;
}

struct TrapezoidResult {
  std::complex<double> value;
  double error;
};

// Mean over one period with the trapezoid rule, doubling the node count
// until two successive values agree.
template <class F>
TrapezoidResult periodic_mean_adaptive(F&& f, double x0, double period, std::size_t n0, double tol) {
  std::size_t n = std::max<std::size_t>(n0, 16);
  std::complex<double> prev = periodic_mean<std::complex<double>>(f, x0, period, n, true);
  for (int it = 0; it < 12; ++it) {
    // midpoints of the current grid
    std::complex<double> mid =
        periodic_mean<std::complex<double>>(f, x0 + 0.5 * period / static_cast<double>(n), period, n, true);
    std::complex<double> cur = 0.5 * (prev + mid);
    double err = std::abs(cur - prev);
    n *= 2;
    prev = cur;
    if (err <= tol) return {cur, err};
    if (it == 11) return {cur, err};
  }
  return {prev, std::numeric_limits<double>::infinity()};
}

}  // namespace

TestFunction make_bump(const GroupSpec& spec, const BumpParams& bp) {
  const int w = hecke_width_or_throw(spec);
  SupportBox box{bp.x_center - bp.x_radius, bp.x_center + bp.x_radius, bp.y_center * std::exp(-bp.log_y_radius),
                 bp.y_center * std::exp(bp.log_y_radius)};
  if (!(bp.x_radius > 0.0 && bp.log_y_radius > 0.0 && bp.y_center > 0.0))
    throw std::invalid_argument("make_bump: radii and center height must be positive");
  if (box.x0 <= -0.5 * w || box.x1 >= 0.5 * w) throw std::invalid_argument("make_bump: support leaves the strip");
  double xmin = (box.x0 <= 0.0 && box.x1 >= 0.0) ? 0.0 : std::min(std::abs(box.x0), std::abs(box.x1));
  if (xmin * xmin + box.y0 * box.y0 <= 1.0) throw std::invalid_argument("make_bump: support meets the unit circle");

  TestFunction t;
  t.name = "bump";
  t.width = w;
  t.support = box;
  t.C_psi = std::max(1.0, box.y1);
  t.alpha_psi = 1.0;
  t.k_invariant = bp.angular == 0.0;
  t.peak = bp.amplitude * (1.0 + std::abs(bp.angular));
  const double xc = bp.x_center, xr = bp.x_radius, lyc = std::log(bp.y_center), lyr = bp.log_y_radius,
               amp = bp.amplitude, ang = bp.angular;
  t.profile = [=](double x, double y) {
    if (x <= box.x0 || x >= box.x1 || y <= box.y0 || y >= box.y1) return 0.0;
    return amp * bump1d((x - xc) / xr) * bump1d((std::log(y) - lyc) / lyr);
  };
  auto profile = t.profile;
  t.evaluator = [=](const UTBPoint& p) {
    UTBPoint r = reduce_point(p, w);
    double v = profile(r.x, r.y);
    if (v == 0.0 || ang == 0.0) return v;
    return v * (1.0 + ang * std::cos(r.theta));
  };
  return t;
}

TestFunction zero_function(const GroupSpec& spec) {
  TestFunction t;
  t.name = "zero";
  t.width = hecke_width_or_throw(spec);
  t.support = SupportBox{-0.1, 0.1, 1.5, 2.0};
  t.peak = 0.0;
  t.profile = [](double, double) { return 0.0; };
  t.evaluator = [](const UTBPoint&) { return 0.0; };
  return t;
}

TestFunction linear_combination(double a, const TestFunction& f, double b, const TestFunction& g) {
  if (f.width != g.width) throw std::invalid_argument("linear_combination: different groups");
  TestFunction t;
  t.name = "combination";
  t.width = f.width;
  t.k_invariant = f.k_invariant && g.k_invariant;
  t.smooth = f.smooth && g.smooth;
  t.peak = std::abs(a) * f.peak + std::abs(b) * g.peak;
  t.C_psi = std::max(f.C_psi, g.C_psi);
  t.alpha_psi = std::min(f.alpha_psi, g.alpha_psi);
  if (f.support && g.support) {
    t.support = SupportBox{std::min(f.support->x0, g.support->x0), std::max(f.support->x1, g.support->x1),
                           std::min(f.support->y0, g.support->y0), std::max(f.support->y1, g.support->y1)};
  }
  auto fe = f.evaluator, ge = g.evaluator;
  t.evaluator = [=](const UTBPoint& p) { return a * fe(p) + b * ge(p); };
  if (f.profile && g.profile) {
    auto fp = f.profile, gp = g.profile;
    t.profile = [=](double x, double y) { return a * fp(x, y) + b * gp(x, y); };
  }
  return t;
}

RegistrationReport register_test_function(const GroupSpec& spec, const TestFunction& psi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uly(std::log(0.05), std::log(4.0)), uth(-kPi, kPi);
  std::uniform_int_distribution<std::size_t> ugen(0, 2 * spec.generators.size() - 1);
  std::uniform_int_distribution<int> ulen(1, 8);
  RegistrationReport rep;
  for (int i = 0; i < 1000; ++i) {
    IntGroupElement g;
    int len = ulen(rng);
    for (int k = 0; k < len; ++k) {
      std::size_t j = ugen(rng);
      const auto& gen = spec.generators[j / 2];
      g = multiply(g, (j % 2) ? inverse(gen) : gen);
    }
    UTBPoint p(ux(rng), std::exp(uly(rng)), uth(rng));
    UTBPoint gp = mobius_act(g.to_real(), p);
    double v = std::abs(psi(gp) - psi(p));
    rep.max_automorphy_violation = std::max(rep.max_automorphy_violation, v);
  }
  std::uniform_real_distribution<double> uxs(-0.5 * psi.width, 0.5 * psi.width), uf(1.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    double y = psi.C_psi * uf(rng) * 1.0000001;
    UTBPoint p(uxs(rng), y, uth(rng));
    double excess = std::abs(psi(p)) - psi.C_psi * std::pow(y, -psi.alpha_psi);
    rep.max_decay_violation = std::max(rep.max_decay_violation, excess);
  }
  if (rep.max_automorphy_violation > 1e-7)
    throw std::invalid_argument("test function '" + psi.name + "' is not automorphic (violation " +
                                std::to_string(rep.max_automorphy_violation) + ")");
  if (rep.max_decay_violation > 1e-7)
    throw std::invalid_argument("test function '" + psi.name + "' violates its declared cusp decay");
  return rep;
}

namespace {

double tail_cutoff(const TestFunction& psi, double tol) {
  if (psi.support) return std::max(psi.support->y1, 1.0) * (1.0 + 1e-9);
  double bound = std::pow(2.0 * psi.C_psi / (psi.alpha_psi * tol), 1.0 / psi.alpha_psi);
  return std::max(psi.C_psi, bound);
}

}  // namespace

ShearSample mu_T(const TestFunction& psi, double T, double tol) {
  if (!std::isfinite(T)) throw std::invalid_argument("mu_T: T must be finite");
  if (!(tol > 0.0)) throw std::invalid_argument("mu_T: tol must be positive");
  const double Tt = std::sqrt(T * T + 1.0);
  ShearSample s;
  s.T = T;
  // Heights of the ray are y / Tt; above the cutoff height psi vanishes or is below the tail bound.
  s.upper_cutoff = Tt * tail_cutoff(psi, tol);
  const double umax = std::log(s.upper_cutoff);
  if (umax <= 0.0) return s;
  const double panel = std::min(0.1, 0.1 / std::max(std::abs(T), 1e-9));
  AdaptiveOptions opt;
  opt.abs_tol = 0.5 * tol;
  opt.rel_tol = 0.0;
  opt.initial_panels = static_cast<std::size_t>(std::ceil(umax / panel));
  opt.parallel = true;
  const double cx = T / Tt, cy = 1.0 / Tt;
  auto integrand = [&](double u) {
    double y = std::exp(u);
    return psi(UTBPoint(cx * y, cy * y, 0.0));
  };
  auto r = integrate_adaptive<double>(integrand, 0.0, umax, opt);
  s.value = r.value;
  s.error = r.error;
  s.nodes = r.evaluations;
  s.converged = r.converged && r.error <= tol;
  return s;
}

namespace {

TrapezoidResult horocycle_mean(const TestFunction& psi, double y, double theta, int m, double tol) {
  const double w = psi.width;
  std::size_t n0 = static_cast<std::size_t>(std::ceil(w * 24.0 / y));
  auto f = [&](double x) {
    double v = psi(UTBPoint(x, y, theta));
    if (m == 0 || v == 0.0) return std::complex<double>(v, 0.0);
    return v * std::polar(1.0, -2.0 * kPi * m * x / w);
  };
  return periodic_mean_adaptive(f, 0.0, w, n0, tol);
}

}  // namespace

ShearSample mu_T_strip(const TestFunction& psi, double T, double tol) {
  if (!(T > 0.0)) throw std::invalid_argument("mu_T_strip: T must be positive");
  ShearSample s;
  s.T = T;
  s.upper_cutoff = tail_cutoff(psi, tol);
  const double ulo = -std::log(T), uhi = std::log(s.upper_cutoff);
  if (uhi <= ulo) return s;
  AdaptiveOptions opt;
  opt.abs_tol = 0.5 * tol;
  opt.rel_tol = 0.0;
  opt.initial_panels = static_cast<std::size_t>(std::ceil((uhi - ulo) * 4.0));
  double inner_err = 0.0;
  std::size_t nodes = 0;
  auto integrand = [&](double u) {
    auto r = horocycle_mean(psi, std::exp(u), 0.0, 0, 1e-3 * tol);
    inner_err = std::max(inner_err, r.error);
    ++nodes;
    return r.value.real();
  };
  auto r = integrate_adaptive<double>(integrand, ulo, uhi, opt);
  s.value = r.value;
  s.error = r.error + inner_err * (uhi - ulo);
  s.nodes = nodes;
  s.converged = r.converged && s.error <= tol;
  return s;
}

std::complex<double> fourier_coefficient(const TestFunction& psi, int m, double y, double theta, double tol) {
  if (!(y > 0.0)) throw std::invalid_argument("fourier_coefficient: y must be positive");
  return horocycle_mean(psi, y, theta, m, tol).value;
}

double horocycle_average(const TestFunction& psi, double y, std::pair<double, double> interval, double tol) {
  auto [x0, x1] = interval;
  if (!(x0 < x1)) throw std::invalid_argument("horocycle_average: need x0 < x1");
  if (!(y > 0.0)) throw std::invalid_argument("horocycle_average: y must be positive");
  if (std::abs((x1 - x0) - psi.width) < 1e-12) {
    auto f = [&](double x) { return std::complex<double>(psi(UTBPoint(x, y, 0.0)), 0.0); };
    std::size_t n0 = static_cast<std::size_t>(std::ceil(psi.width * 24.0 / y));
    return periodic_mean_adaptive(f, x0, x1 - x0, n0, tol).value.real();
  }
  AdaptiveOptions opt;
  opt.abs_tol = tol * (x1 - x0);
  opt.rel_tol = 0.0;
  opt.initial_panels = static_cast<std::size_t>(std::ceil((x1 - x0) / (0.1 * y)));
  opt.parallel = true;
  auto r = integrate_adaptive<double>([&](double x) { return psi(UTBPoint(x, y, 0.0)); }, x0, x1, opt);
  return r.value / (x1 - x0);
}

double integrate_fundamental_domain(const TestFunction& psi, const std::function<double(double, double)>& f,
                                    double tol, double y_max) {
  if (!psi.k_invariant || !psi.profile)
    throw std::invalid_argument("integrate_fundamental_domain: requires a K-invariant profile");
  const auto& prof = psi.profile;
  AdaptiveOptions inner;
  inner.abs_tol = 1e-3 * tol;
  inner.rel_tol = 1e-13;
  inner.initial_panels = 4;
  AdaptiveOptions outer;
  outer.abs_tol = tol;
  outer.rel_tol = 1e-13;
  outer.initial_panels = 8;
  outer.parallel = true;
  double x0, x1;
  std::function<double(double)> ylo;
  double yhi;
  if (psi.support) {
    x0 = psi.support->x0;
    x1 = psi.support->x1;
    double y0 = psi.support->y0;
    ylo = [y0](double) { return y0; };
    yhi = psi.support->y1;
  } else {
    if (psi.width > 2) throw std::invalid_argument("integrate_fundamental_domain: non-compact domain with funnels");
    if (!(y_max > 0.0)) throw std::invalid_argument("integrate_fundamental_domain: y_max required");
    x0 = -0.5 * psi.width;
    x1 = 0.5 * psi.width;
    ylo = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
    yhi = y_max;
  }
  auto column = [&](double x) {
    auto g = [&](double y) { return prof(x, y) * f(x, y) / (y * y); };
    return integrate_adaptive<double>(g, ylo(x), yhi, inner).value;
  };
  return integrate_adaptive<double>(column, x0, x1, outer).value;
}

double haar_mean(const TestFunction& psi, double tol) {
  if (psi.width != 1) throw std::invalid_argument("haar_mean: finite-volume quotient required (PSL(2,Z))");
  double ymax = psi.support ? 0.0 : 40.0;
  return 3.0 / kPi * integrate_fundamental_domain(psi, [](double, double) { return 1.0; }, tol, ymax);
}

RegressionResult fit_equidistribution(const std::vector<double>& T, const std::vector<double>& values,
                                      bool with_correction) {
  if (T.size() != values.size()) throw std::invalid_argument("fit_equidistribution: size mismatch");
  if (T.size() < (with_correction ? 4u : 2u)) throw InsufficientDataError("fit_equidistribution: too few points");
  double tmin = *std::min_element(T.begin(), T.end()), tmax = *std::max_element(T.begin(), T.end());
  if (std::log10(tmax / tmin) < 1.5 - 1e-12) throw InsufficientDataError("fit_equidistribution: T span below 1.5 decades");
  const std::size_t n = T.size();
  std::vector<double> logT(n), one(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) logT[i] = std::log(T[i]);
  RegressionResult r;
  r.T = T;
  r.values = values;
  if (with_correction) {
    auto design = [&](double eta) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = std::pow(T[i], -eta);
      return std::vector<std::vector<double>>{logT, one, p};
    };
    auto f = nested_exponent_fit(design, values, one, 0.02, 3.0);
    r.slope = f.inner.coef[0];
    r.intercept = f.inner.coef[1];
    r.correction = f.inner.coef[2];
    r.correction_exponent = f.exponent;
  } else {
    auto f = weighted_least_squares({logT, one}, values, one);
    r.slope = f.coef[0];
    r.intercept = f.coef[1];
  }
  r.residuals.resize(n);
  bool all_nonzero = true;
  for (std::size_t i = 0; i < n; ++i) {
    r.residuals[i] = values[i] - r.slope * logT[i] - r.intercept;
    if (r.residuals[i] == 0.0) all_nonzero = false;
  }
  r.decay_exponent = all_nonzero ? -loglog_slope(T, r.residuals) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

RegressionResult equidistribution_regression(const TestFunction& psi, const std::vector<double>& T_list, double tol,
                                             bool with_correction) {
  std::vector<double> vals;
  for (double T : T_list) vals.push_back(mu_T(psi, T, tol).value);
  return fit_equidistribution(T_list, vals, with_correction);
}

}  // namespace shearlab
