#include "shearlab/orbit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace shearlab {

namespace {

struct FormHash {
  std::size_t operator()(const IntFormVector& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto e : {v.p, v.q, v.r}) {
      h ^= static_cast<std::uint64_t>(e);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

double form_norm(const IntFormVector& v, NormKind kind) {
  FormVector f{static_cast<double>(v.p), static_cast<double>(v.q), static_cast<double>(v.r)};
  return kind == NormKind::Sup ? sup_norm(f) : euclidean_norm(f);
}

CountResult count_orbit(const OrbitQuery& query) {
  const auto start = std::chrono::steady_clock::now();
  const auto& Ts = query.T_list;
  if (Ts.empty()) throw std::invalid_argument("count_orbit: empty T list");
  for (std::size_t i = 1; i < Ts.size(); ++i)
    if (!(Ts[i] > Ts[i - 1])) throw std::invalid_argument("count_orbit: T list must be strictly increasing");
  if (query.x0.p == 0 && query.x0.q == 0 && query.x0.r == 0) throw std::invalid_argument("count_orbit: x0 = 0");
  if (query.q && *query.q < 1) throw std::invalid_argument("count_orbit: q must be >= 1");
  if (!(query.window_slack >= 1.0)) throw std::invalid_argument("count_orbit: window_slack must be >= 1");

  CountResult res;
  res.T = Ts;
  res.x0_norm = form_norm(query.x0, query.norm);
  res.q = query.q;
  const double window = query.window_slack * std::max(Ts.back(), res.x0_norm * (1.0 + 1e-12));

  auto in_window = [&](const IntGroupElement& g) {
    try {
      return form_norm(spin_cover(g, query.x0), query.norm) < window;
    } catch (const std::overflow_error&) {
      return false;
    }
  };
  WordSearchResult search = enumerate_words(query.spec, in_window, query.budget);
  res.elements_visited = search.elements.size();
  res.budget_exceeded = search.budget_exceeded;

  // Distinct orbit points, each attributed to the first element reaching it.
  struct Point {
    double norm;
    std::uint32_t depth;
    CosetLabel label;
  };
  std::vector<Point> points;
  std::unordered_set<IntFormVector, FormHash> seen;
  for (std::size_t i = 0; i < search.elements.size(); ++i) {
    const auto& g = search.elements[i];
    IntFormVector v = spin_cover(g, query.x0);
    if (!seen.insert(v).second) continue;
    CosetLabel label = query.q ? coset_label(g, *query.q) : CosetLabel{};
    if (query.coset_filter && !(label == *query.coset_filter)) continue;
    points.push_back({form_norm(v, query.norm), search.depth[i], label});
  }

  if (query.q) {
    auto image = congruence_image(query.spec, *query.q);
    res.congruence_index = image.size();
    for (const auto& l : image) res.per_coset[l] = std::vector<std::int64_t>(Ts.size(), 0);
  }
  res.counts.assign(Ts.size(), 0);
  res.saturated.assign(Ts.size(), false);
  std::vector<std::uint32_t> last_depth(Ts.size(), 0);
  for (const auto& p : points) {
    for (std::size_t t = 0; t < Ts.size(); ++t) {
      if (!(p.norm < Ts[t])) continue;
      ++res.counts[t];
      last_depth[t] = std::max(last_depth[t], p.depth);
      if (query.q) ++res.per_coset[p.label][t];
    }
  }
  for (std::size_t t = 0; t < Ts.size(); ++t) {
    // Either the pruned search exhausted its frontier, or two completed
    // layers after the last in-ball discovery brought nothing new.
    res.saturated[t] = search.saturated || search.layers_completed >= last_depth[t] + 2;
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::string to_string(CountingModel m) {
  switch (m) {
    case CountingModel::TLogTPlusT: return "TlogT+T";
    case CountingModel::LinearPlusPower: return "T+T^delta";
    case CountingModel::PurePower: return "T^delta";
    case CountingModel::Linear: return "T";
    case CountingModel::TLogT: return "TlogT";
  }
  return "?";
}

CountingModel counting_model_from_string(const std::string& s) {
  for (auto m : {CountingModel::TLogTPlusT, CountingModel::LinearPlusPower, CountingModel::PurePower,
                 CountingModel::Linear, CountingModel::TLogT})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown counting model '" + s + "'");
}

double FitResult::predict(double t) const {
  switch (model) {
    case CountingModel::TLogTPlusT: return C1 * t * std::log(t) + C2 * t;
    case CountingModel::LinearPlusPower: return C1 * t + C2 * std::pow(t, *delta);
    case CountingModel::PurePower: return C1 * std::pow(t, *delta);
    case CountingModel::Linear: return C1 * t;
    case CountingModel::TLogT: return C1 * t * std::log(t);
  }
  return 0.0;
}

double FitResult::top_octave_relative_residual() const {
  if (T.empty()) return 0.0;
  double tmax = *std::max_element(T.begin(), T.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i)
    if (T[i] >= 0.5 * tmax) worst = std::max(worst, std::abs(y[i] - fitted[i]) / std::abs(y[i]));
  return worst;
}

FitResult fit_counting_law(const std::vector<double>& T, const std::vector<double>& y, CountingModel model) {
  if (T.size() != y.size()) throw std::invalid_argument("fit_counting_law: size mismatch");
  if (T.size() < 4) throw InsufficientDataError("fit_counting_law: need at least 4 data points");
  for (double v : y)
    if (!(v > 0.0)) throw InsufficientDataError("fit_counting_law: counts must be positive");
  const std::size_t n = T.size();
  std::vector<double> w(n), t(n), tlogt(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 1.0 / y[i];
    t[i] = T[i];
    tlogt[i] = T[i] * std::log(T[i]);
  }
  auto power = [&](double e) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = std::pow(T[i], e);
    return c;
  };
  FitResult fr;
  fr.model = model;
  fr.T = T;
  fr.y = y;
  switch (model) {
    case CountingModel::TLogTPlusT: {
      auto f = weighted_least_squares({tlogt, t}, y, w);
      fr.C1 = f.coef[0];
      fr.C2 = f.coef[1];
      break;
    }
    case CountingModel::Linear: {
      fr.C1 = weighted_least_squares({t}, y, w).coef[0];
      break;
    }
    case CountingModel::TLogT: {
      fr.C1 = weighted_least_squares({tlogt}, y, w).coef[0];
      break;
    }
    case CountingModel::PurePower: {
      auto f = nested_exponent_fit([&](double e) { return std::vector<std::vector<double>>{power(e)}; }, y, w, 0.05,
                                   3.0);
      fr.C1 = f.inner.coef[0];
      fr.delta = f.exponent;
      break;
    }
    case CountingModel::LinearPlusPower: {
      auto f = nested_exponent_fit([&](double e) { return std::vector<std::vector<double>>{t, power(e)}; }, y, w,
                                   0.02, 0.98);
      fr.C1 = f.inner.coef[0];
      fr.C2 = f.inner.coef[1];
      fr.delta = f.exponent;
      break;
    }
  }
  fr.fitted.resize(n);
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fr.fitted[i] = fr.predict(T[i]);
    double r = (y[i] - fr.fitted[i]) / y[i];
    r2 += r * r;
  }
  fr.residual = std::sqrt(r2);
  return fr;
}

FitResult fit_counting_law(const CountResult& result, CountingModel model) {
  std::vector<double> T, y;
  for (std::size_t i = 0; i < result.T.size(); ++i) {
    if (!result.saturated[i] || result.T[i] < 10.0 * result.x0_norm) continue;
    T.push_back(result.T[i]);
    y.push_back(static_cast<double>(result.counts[i]));
  }
  if (T.size() < 4) throw InsufficientDataError("fit_counting_law: fewer than 4 saturated points in the fitting window");
  return fit_counting_law(T, y, model);
}

double coset_disparity(const CountResult& result) {
  if (!result.q) throw std::invalid_argument("coset_disparity: result has no coset breakdown");
  std::optional<std::size_t> idx;
  for (std::size_t i = 0; i < result.T.size(); ++i)
    if (result.saturated[i]) idx = i;
  if (!idx) throw InsufficientDataError("coset_disparity: no saturated radius");
  std::int64_t total = 0, best = 0;
  for (const auto& [label, counts] : result.per_coset) {
    total += counts[*idx];
    best = std::max(best, counts[*idx]);
  }
  if (total == 0) return 1.0;
  double mean = static_cast<double>(total) / static_cast<double>(result.congruence_index);
  return static_cast<double>(best) / mean;
}

}  // namespace shearlab
