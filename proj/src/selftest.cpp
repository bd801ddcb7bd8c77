#include "shearlab/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shearlab/eisenstein.hpp"
#include "shearlab/modular.hpp"
#include "shearlab/orbit.hpp"
#include "shearlab/shear.hpp"
#include "shearlab/special.hpp"

namespace shearlab {
namespace {

using Rng = std::mt19937_64;

GroupElement random_sl2(Rng& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (;;) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.1) continue;
    double d = (1.0 + b * c) / a;
    if (std::abs(d) <= 10.0) return {a, b, c, d};
  }
}

IntGroupElement random_word(const GroupSpec& spec, Rng& rng, int len) {
  std::uniform_int_distribution<std::size_t> pick(0, 2 * spec.generators.size() - 1);
  IntGroupElement g;
  for (int n = 0; n < len; ++n) {
    std::size_t k = pick(rng);
    g = multiply(g, k % 2 ? inverse(spec.generators[k / 2]) : spec.generators[k / 2]);
  }
  return g;
}

double max_abs_entry(const GroupElement& g) {
  double m = 0.0;
  for (double e : g.entries()) m = std::max(m, std::abs(e));
  return m;
}

void algebra_suite(Rng& rng, std::vector<SelfTestResult>& out) {
  SelfTestResult iw{"algebra", "iwasawa round trip", 10000, 0.0, 1e-12};
  SelfTestResult q{"algebra", "spin cover preserves Q", 10000, 0.0, 1e-9};
  SelfTestResult law{"algebra", "spin cover right action", 10000, 0.0, 1e-9};
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t n = 0; n < 10000; ++n) {
    GroupElement g = random_sl2(rng), h = random_sl2(rng);
    GroupElement r = iwasawa_compose(iwasawa_decompose(g));
    for (int k = 0; k < 4; ++k) iw.worst = std::max(iw.worst, std::abs(g.entries()[k] - r.entries()[k]) / max_abs_entry(g));
    FormVector v{u(rng), u(rng), u(rng)};
    FormVector vg = spin_cover(g, v);
    double s = 1.0 + euclidean_norm(vg) * euclidean_norm(vg);
    q.worst = std::max(q.worst, std::abs(vg.discriminant() - v.discriminant()) / s);
    FormVector a = spin_cover(compose(g, h), v), b = spin_cover(h, vg);
    double s2 = 1.0 + euclidean_norm(a);
    law.worst = std::max({law.worst, std::abs(a.p - b.p) / s2, std::abs(a.q - b.q) / s2, std::abs(a.r - b.r) / s2});
  }
  out.insert(out.end(), {iw, q, law});

  SelfTestResult iso{"algebra", "mobius action is an isometry", 1000, 0.0, 1e-10};
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.2, 3.0);
  for (std::size_t n = 0; n < iso.samples; ++n) {
    GroupElement g = random_sl2(rng);
    UTBPoint p(ux(rng), uy(rng)), r(ux(rng), uy(rng));
    double d0 = hyperbolic_distance(p, r);
    double d1 = hyperbolic_distance(mobius_act(g, p), mobius_act(g, r));
    iso.worst = std::max(iso.worst, std::abs(d0 - d1) / (1.0 + d0));
  }
  out.push_back(iso);
}

void group_suite(Rng& rng, std::vector<SelfTestResult>& out) {
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 3.0);
  for (const auto& spec : {psl2z_spec(), thin4_spec()}) {
    const int w = *spec.hecke_width();
    SelfTestResult red{"group", "reduction is invariant (" + spec.name + ")", 1000, 0.0, 1e-9};
    for (std::size_t n = 0; n < red.samples; ++n) {
      UTBPoint p(ux(rng), uy(rng));
      UTBPoint a = reduce_point(p, w);
      UTBPoint b = reduce_point(mobius_act(random_word(spec, rng, 6).to_real(), p), w);
      UTBPoint c = reduce_point(a, w);
      red.worst = std::max({red.worst, std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.x - c.x), std::abs(a.y - c.y)});
    }
    out.push_back(red);
  }
  SelfTestResult lab{"group", "coset labels are multiplicative", 400, 0.0, 0.0};
  for (std::size_t n = 0; n < lab.samples; ++n) {
    std::int64_t q = 3 + 2 * static_cast<std::int64_t>(n % 3);
    IntGroupElement g = random_word(psl2z_spec(), rng, 8), h = random_word(psl2z_spec(), rng, 8);
    if (!(coset_label(multiply(g, h), q) == label_product(coset_label(g, q), coset_label(h, q)))) lab.worst += 1.0;
  }
  out.push_back(lab);
}

void orbit_suite(Rng& rng, std::vector<SelfTestResult>& out) {
  OrbitQuery q;
  q.spec = psl2z_spec();
  q.T_list = {10, 20, 40, 80};
  q.q = 3;
  auto base = count_orbit(q);
  SelfTestResult mono{"orbit", "counts monotone in T, also per coset", base.T.size(), 0.0, 0.0};
  for (std::size_t i = 1; i < base.T.size(); ++i) {
    if (base.counts[i] < base.counts[i - 1]) mono.worst += 1.0;
    for (const auto& [label, c] : base.per_coset)
      if (c[i] < c[i - 1]) mono.worst += 1.0;
  }
  out.push_back(mono);
  SelfTestResult inv{"orbit", "counts depend only on the orbit of x0", 3, 0.0, 0.0};
  for (int t = 0; t < 3; ++t) {
    OrbitQuery m = q;
    m.q.reset();
    m.x0 = spin_cover(random_word(psl2z_spec(), rng, 5), q.x0);
    auto moved = count_orbit(m);
    for (std::size_t i = 0; i < base.T.size(); ++i)
      inv.worst += std::abs(static_cast<double>(moved.counts[i] - base.counts[i]));
  }
  out.push_back(inv);
}

void special_suite(Rng& rng, std::vector<SelfTestResult>& out) {
  SelfTestResult gam{"special", "gamma recurrence", 1000, 0.0, 1e-12};
  std::uniform_real_distribution<double> us(0.05, 30.0);
  for (std::size_t n = 0; n < gam.samples; ++n) {
    double s = us(rng);
    double r = s * gamma_fn(s);
    gam.worst = std::max(gam.worst, std::abs(gamma_fn(s + 1.0) - r) / r);
  }
  out.push_back(gam);

  SelfTestResult bk{"special", "bessel K three-term recurrence", 0, 0.0, 1e-8};
  for (double nu : {0.3, 1.0, 1.7, 2.0})
    for (double x = 0.01; x < 60.0; x *= 1.7) {
      double lower = bessel_k(std::abs(nu - 1.0), x);
      double rhs = lower + 2.0 * nu / x * bessel_k(nu, x);
      bk.worst = std::max(bk.worst, std::abs(bessel_k(nu + 1.0, x) - rhs) / rhs);
      ++bk.samples;
    }
  out.push_back(bk);

  SelfTestResult eta{"special", "eta product vs pentagonal series", 100, 0.0, 1e-12};
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.3, 3.0);
  for (std::size_t n = 0; n < eta.samples; ++n) {
    cplx z(ux(rng), uy(rng));
    cplx a = eta_product(z), b = eta_pentagonal_series(z);
    eta.worst = std::max(eta.worst, std::abs(a - b) / std::abs(b));
  }
  out.push_back(eta);

  SelfTestResult inv{"special", "4 y |eta|^4 is modular invariant", 1000, 0.0, 1e-10};
  std::uniform_real_distribution<double> vx(-1.0, 1.0), vy(0.2, 2.0);
  for (std::size_t n = 0; n < inv.samples; ++n) {
    cplx z(vx(rng), vy(rng));
    cplx w = mobius(random_word(psl2z_spec(), rng, 8).to_real(), z);
    double a = std::log(4.0 * z.imag()) + 4.0 * log_abs_eta(z);
    double b = std::log(4.0 * w.imag()) + 4.0 * log_abs_eta(w);
    inv.worst = std::max(inv.worst, std::abs(a - b) / (1.0 + std::abs(a)));
  }
  out.push_back(inv);
}

void shear_suite(std::vector<SelfTestResult>& out) {
  for (const auto& spec : {psl2z_spec(), thin4_spec()}) {
    auto rep = register_test_function(spec, make_bump(spec));
    out.push_back({"shear", "bump automorphy (" + spec.name + ")", 1000, rep.max_automorphy_violation, 1e-7});
  }
  BumpParams b2;
  b2.x_center = 0.1;
  b2.y_center = 1.6;
  b2.x_radius = 0.2;
  b2.log_y_radius = 0.2;
  auto p1 = make_bump(psl2z_spec()), p2 = make_bump(psl2z_spec(), b2);
  auto comb = linear_combination(2.0, p1, -0.5, p2);
  SelfTestResult add{"shear", "mu_T is linear in psi", 2, 0.0, 1e-8};
  for (double T : {3.0, 30.0}) {
    double a = mu_T(p1, T, 1e-10).value, b = mu_T(p2, T, 1e-10).value, c = mu_T(comb, T, 1e-10).value;
    add.worst = std::max(add.worst, std::abs(c - (2.0 * a - 0.5 * b)));
  }
  out.push_back(add);
}

void eisenstein_suite(Rng& rng, std::vector<SelfTestResult>& out) {
  EisensteinEvaluator four(psl2z_spec(), EisensteinRoute::Fourier), coset(psl2z_spec(), EisensteinRoute::CosetSum);
  SelfTestResult dual{"eisenstein", "fourier and coset routes agree", 3, 0.0, 1e-8};
  for (auto z : {UTBPoint(0, 1), UTBPoint(0.3, 0.9), UTBPoint(-0.4, 1.7)})
    dual.worst = std::max(dual.worst, std::abs(four.evaluate(z, 2.0).value - coset.evaluate(z, 2.0).value));
  out.push_back(dual);
  SelfTestResult aut{"eisenstein", "E(., 2) automorphy", 20, 0.0, 1e-8};
  std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.3, 2.0);
  for (std::size_t n = 0; n < aut.samples; ++n) {
    UTBPoint z(ux(rng), uy(rng));
    UTBPoint w = mobius_act(random_word(psl2z_spec(), rng, 6).to_real(), z);
    aut.worst = std::max(aut.worst, std::abs(four.evaluate(z, 2.0).value - four.evaluate(w, 2.0).value));
  }
  out.push_back(aut);
  SelfTestResult reg{"eisenstein", "regularized E(., 1) invariance", 200, 0.0, 1e-10};
  for (std::size_t n = 0; n < reg.samples; ++n) {
    UTBPoint z(ux(rng), uy(rng));
    UTBPoint w = mobius_act(random_word(psl2z_spec(), rng, 8).to_real(), z);
    double a = regularized_E1(z);
    reg.worst = std::max(reg.worst, std::abs(a - regularized_E1(w)) / (1.0 + std::abs(a)));
  }
  out.push_back(reg);
}

void modular_suite(Rng& rng, std::vector<SelfTestResult>& out) {
  const QExpansion f = delta_qexp(2000);
  SelfTestResult hecke{"modular", "Hecke relations at prime powers", 0, 0.0, 0.0};
  SelfTestResult deligne{"modular", "Deligne bound at primes", 0, 0.0, 0.0};
  for (std::size_t p = 2; p <= f.size(); ++p) {
    bool prime = true;
    for (std::size_t d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
    if (!prime) continue;
    ++deligne.samples;
    if (std::abs(f.a(p)) > 2.0 * std::pow(static_cast<double>(p), 5.5)) deligne.worst += 1.0;
    int128 p11 = 1;
    for (int e = 0; e < 11; ++e) p11 *= static_cast<int128>(p);
    int128 prev = 1, cur = f.coeffs[p];
    for (std::size_t pr = p; pr * p <= f.size(); pr *= p) {
      int128 next = f.coeffs[p] * cur - p11 * prev;
      ++hecke.samples;
      if (f.coeffs[pr * p] != next) hecke.worst += 1.0;
      prev = cur, cur = next;
    }
  }
  out.insert(out.end(), {hecke, deligne});
  SelfTestResult inv{"modular", "Psi_f weight-k invariance", 200, 0.0, 1e-10};
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.3, 2.0);
  for (std::size_t n = 0; n < inv.samples; ++n) {
    UTBPoint z(ux(rng), uy(rng));
    UTBPoint w = mobius_act(random_word(psl2z_spec(), rng, 6).to_real(), z);
    double a = eval_psi_f(f, z);
    double b = std::norm(eval_form(f, w)) * std::pow(w.y, f.weight);
    inv.worst = std::max(inv.worst, std::abs(a - b) / (a + 1e-300));
  }
  out.push_back(inv);
}

}  // namespace

std::vector<SelfTestResult> run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SelfTestResult> out;
  algebra_suite(rng, out);
  group_suite(rng, out);
  orbit_suite(rng, out);
  special_suite(rng, out);
  shear_suite(out);
  eisenstein_suite(rng, out);
  modular_suite(rng, out);
  return out;
}

}  // namespace shearlab
