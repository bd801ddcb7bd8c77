#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

#include "shearlab/parallel.hpp"

namespace shearlab {

template <class V>
struct BasicQuadResult {
  V value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = true;
};

using QuadResult = BasicQuadResult<double>;

namespace gk {
// 21-point Kronrod nodes on [0,1] (symmetric) with the embedded 10-point Gauss rule.
inline constexpr std::array<double, 11> xk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> wk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077687275617801, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
}  // namespace gk

// One 21-point Gauss-Kronrod panel on [a, b].
template <class V, class F>
BasicQuadResult<V> gauss_kronrod21(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  V fc = f(c);
  V kron = gk::wk[10] * fc;
  V gauss{};
  for (int j = 0; j < 10; ++j) {
    double dx = h * gk::xk[j];
    V f1 = f(c - dx), f2 = f(c + dx);
    kron += gk::wk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += gk::wg[j / 2] * (f1 + f2);
  }
  BasicQuadResult<V> r;
  r.value = kron * h;
  r.error = std::abs(kron - gauss) * std::abs(h);
  r.evaluations = 21;
  r.panels = 1;
  return r;
}

template <class P>
auto sum_values(const std::vector<P>& panels) -> decltype(panels[0].value) {
  using V = decltype(panels[0].value);
  if constexpr (std::is_same_v<V, double>) {
    std::vector<double> v(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) v[i] = panels[i].value;
    return pairwise_sum(v);
  } else {
    std::vector<double> re(panels.size()), im(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) {
      re[i] = panels[i].value.real();
      im[i] = panels[i].value.imag();
    }
    return V(pairwise_sum(re), pairwise_sum(im));
  }
}

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t initial_panels = 1;
  std::size_t max_panels = 2'000'000;
  bool parallel = false;  // evaluate panels concurrently (f must be thread-safe)
};

// Uniform initial panels, then repeated bisection of every panel whose error
// exceeds its share of the tolerance. Panel sums are reduced pairwise in
// panel order, so the result does not depend on scheduling.
template <class V, class F>
BasicQuadResult<V> integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  struct Panel {
    double lo, hi;
    V value;
    double error;
  };
  const std::size_t n0 = std::max<std::size_t>(1, opt.initial_panels);
  std::vector<Panel> panels(n0);
  for (std::size_t i = 0; i < n0; ++i) {
    panels[i].lo = a + (b - a) * static_cast<double>(i) / n0;
    panels[i].hi = (i + 1 == n0) ? b : a + (b - a) * static_cast<double>(i + 1) / n0;
  }
  std::size_t evals = 0;
  auto evaluate = [&](std::vector<Panel>& ps, const std::vector<std::size_t>& idx) {
    auto one = [&](std::size_t k) {
      Panel& p = ps[idx[k]];
      auto r = gauss_kronrod21<V>(f, p.lo, p.hi);
      p.value = r.value;
      p.error = r.error;
    };
    if (opt.parallel) parallel_for(idx.size(), one);
    else
      for (std::size_t k = 0; k < idx.size(); ++k) one(k);
    evals += 21 * idx.size();
  };
  std::vector<std::size_t> all(n0);
  for (std::size_t i = 0; i < n0; ++i) all[i] = i;
  evaluate(panels, all);

  const double width = std::abs(b - a);
  BasicQuadResult<V> out;
  for (int round = 0;; ++round) {
    V total{};
    double err = 0.0;
    {
      std::vector<double> errs(panels.size());
      for (std::size_t i = 0; i < panels.size(); ++i) errs[i] = panels[i].error;
      err = pairwise_sum(errs);
      total = sum_values(panels);
    }
    double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    out.value = total;
    out.error = err;
    if (err <= tol) break;
    if (panels.size() >= opt.max_panels || round >= 64) {
      out.converged = false;
      break;
    }
    std::vector<Panel> next;
    next.reserve(panels.size() + 64);
    std::vector<std::size_t> fresh;
    for (const Panel& p : panels) {
      double share = tol * std::abs(p.hi - p.lo) / width;
      if (p.error > share && std::abs(p.hi - p.lo) > 1e-13 * width) {
        double m = 0.5 * (p.lo + p.hi);
        fresh.push_back(next.size());
        next.push_back({p.lo, m, V{}, 0.0});
        fresh.push_back(next.size());
        next.push_back({m, p.hi, V{}, 0.0});
      } else {
        next.push_back(p);
      }
    }
    if (fresh.empty()) {
      out.converged = false;
      break;
    }
    evaluate(next, fresh);
    panels.swap(next);
  }
  out.evaluations = evals;
  out.panels = panels.size();
  return out;
}

// Trapezoid rule on one period of a periodic integrand: (1/P) * integral.
template <class V, class F>
V periodic_mean(F&& f, double x0, double period, std::size_t n, bool parallel = false) {
  std::vector<V> vals(n);
  auto one = [&](std::size_t j) { vals[j] = f(x0 + period * static_cast<double>(j) / n); };
  if (parallel) parallel_for(n, one);
  else
    for (std::size_t j = 0; j < n; ++j) one(j);
  if constexpr (std::is_same_v<V, double>) {
    return pairwise_sum(vals) / static_cast<double>(n);
  } else {
    std::vector<double> re(n), im(n);
    for (std::size_t j = 0; j < n; ++j) {
      re[j] = vals[j].real();
      im[j] = vals[j].imag();
    }
    return V(pairwise_sum(re), pairwise_sum(im)) / static_cast<double>(n);
  }
}

}  // namespace shearlab
