#include "shearlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "shearlab/parallel.hpp"

namespace shearlab {

namespace {

using i128 = __int128;

std::int64_t checked(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer group element entry overflow");
  return static_cast<std::int64_t>(v);
}

std::int64_t mod(std::int64_t a, std::int64_t q) {
  std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

}  // namespace

IntGroupElement::IntGroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : m_{a, b, c, d} {
  if (static_cast<i128>(a) * d - static_cast<i128>(b) * c != 1)
    throw std::domain_error("IntGroupElement: determinant must be 1");
  if (c < 0 || (c == 0 && a < 0))
    for (auto& e : m_) e = -e;
}

GroupElement IntGroupElement::to_real() const {
  return {static_cast<double>(m_[0]), static_cast<double>(m_[1]), static_cast<double>(m_[2]),
          static_cast<double>(m_[3])};
}

std::size_t IntGroupElementHash::operator()(const IntGroupElement& g) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto e : g.entries()) {
    h ^= static_cast<std::uint64_t>(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

IntGroupElement multiply(const IntGroupElement& g, const IntGroupElement& h) {
  return {checked(static_cast<i128>(g.a()) * h.a() + static_cast<i128>(g.b()) * h.c()),
          checked(static_cast<i128>(g.a()) * h.b() + static_cast<i128>(g.b()) * h.d()),
          checked(static_cast<i128>(g.c()) * h.a() + static_cast<i128>(g.d()) * h.c()),
          checked(static_cast<i128>(g.c()) * h.b() + static_cast<i128>(g.d()) * h.d())};
}

IntGroupElement inverse(const IntGroupElement& g) { return {g.d(), -g.b(), -g.c(), g.a()}; }

IntFormVector spin_cover(const IntGroupElement& g, const IntFormVector& v) {
  const i128 a = g.a(), b = g.b(), c = g.c(), d = g.d();
  return {checked(v.p * a * a + v.q * a * c + v.r * c * c),
          checked(2 * v.p * a * b + v.q * (a * d + b * c) + 2 * v.r * c * d),
          checked(v.p * b * b + v.q * b * d + v.r * d * d)};
}

std::optional<int> GroupSpec::hecke_width() const {
  if (generators.size() != 2) return std::nullopt;
  const IntGroupElement s(0, -1, 1, 0);
  for (int i = 0; i < 2; ++i) {
    const auto& t = generators[i];
    const auto& other = generators[1 - i];
    if (other != s) continue;
    if (t.a() == 1 && t.c() == 0 && t.d() == 1 && t.b() != 0 && std::abs(t.b()) < 1000)
      return static_cast<int>(std::abs(t.b()));
  }
  return std::nullopt;
}

GroupSpec psl2z_spec() {
  GroupSpec s;
  s.name = "psl2z";
  s.generators = {IntGroupElement(1, 1, 0, 1), IntGroupElement(0, -1, 1, 0)};
  s.lattice = true;
  s.cusps = {Cusp{std::nullopt, 1.0}};
  return s;
}

GroupSpec thin4_spec() {
  GroupSpec s;
  s.name = "thin4";
  s.generators = {IntGroupElement(1, 4, 0, 1), IntGroupElement(0, -1, 1, 0)};
  s.lattice = false;
  s.cusps = {Cusp{std::nullopt, 4.0}};
  return s;
}

GroupSpec builtin_spec(const std::string& name) {
  if (name == "psl2z") return psl2z_spec();
  if (name == "thin4") return thin4_spec();
  throw std::invalid_argument("unknown built-in group '" + name + "' (expected psl2z or thin4)");
}

GroupSpec load_group_spec_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("group spec: invalid JSON: ") + e.what());
  }
  GroupSpec s;
  try {
    s.name = j.at("name").get<std::string>();
    for (const auto& g : j.at("generators")) {
      auto row0 = g.at(0), row1 = g.at(1);
      s.generators.emplace_back(row0.at(0).get<std::int64_t>(), row0.at(1).get<std::int64_t>(),
                                row1.at(0).get<std::int64_t>(), row1.at(1).get<std::int64_t>());
    }
    s.lattice = j.value("lattice", false);
    for (const auto& c : j.value("cusps", nlohmann::json::array())) {
      Cusp cusp;
      cusp.width = c.at("width").get<double>();
      if (!(cusp.width > 0.0)) throw std::invalid_argument("group spec: cusp width must be positive");
      const auto& p = c.at("point");
      if (p.is_string()) {
        if (p.get<std::string>() != "inf") throw std::invalid_argument("group spec: cusp point string must be 'inf'");
      } else if (p.is_array()) {
        cusp.point = p.at(0).get<double>() / p.at(1).get<double>();
      } else {
        cusp.point = p.get<double>();
      }
      s.cusps.push_back(cusp);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("group spec: ") + e.what());
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(std::string("group spec: ") + e.what());
  }
  if (s.generators.empty()) throw std::invalid_argument("group spec: no generators");
  return s;
}

GroupSpec load_group_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("group spec: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_group_spec_json(ss.str());
}

GroupSpec conjugate(const GroupSpec& spec, const GroupElement& h) {
  GroupSpec out = spec;
  out.frame = compose(h, spec.frame);
  for (auto& c : out.cusps) {
    if (!c.point) {
      if (h.c() != 0.0) c.point = h.a() / h.c();
    } else {
      double den = h.c() * *c.point + h.d();
      if (den == 0.0) c.point.reset();
      else c.point = (h.a() * *c.point + h.b()) / den;
    }
  }
  return out;
}

namespace {

class ShardedSet {
 public:
  bool insert(const IntGroupElement& g) {
    std::size_t h = IntGroupElementHash{}(g);
    Shard& s = shards_[h % kShards];
    std::lock_guard lock(s.mutex);
    return s.set.insert(g).second;
  }
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& s : shards_) n += s.set.size();
    return n;
  }

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    std::mutex mutex;
    std::unordered_set<IntGroupElement, IntGroupElementHash> set;
  };
  std::array<Shard, kShards> shards_;
};

}  // namespace

WordSearchResult enumerate_words(const GroupSpec& spec,
                                 const std::function<bool(const IntGroupElement&)>& predicate,
                                 const WordBudget& budget) {
  // Generators and their inverses, deduplicated modulo sign.
  std::vector<IntGroupElement> gens;
  for (const auto& g : spec.generators) {
    for (const auto& x : {g, inverse(g)})
      if (std::find(gens.begin(), gens.end(), x) == gens.end()) gens.push_back(x);
  }
  std::vector<int> inv_index(gens.size(), -1);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (gens[j] == inverse(gens[i])) inv_index[i] = static_cast<int>(j);

  WordSearchResult out;
  ShardedSet seen;
  const IntGroupElement id;
  seen.insert(id);
  struct Node {
    IntGroupElement g;
    int last;
  };
  std::vector<Node> frontier;
  if (predicate(id)) {
    out.elements.push_back(id);
    out.depth.push_back(0);
    frontier.push_back({id, -1});
    out.new_per_layer.push_back(1);
  } else {
    out.new_per_layer.push_back(0);
  }
  std::size_t visited = 1;
  std::size_t depth = 0;
  while (true) {
    if (frontier.empty()) {
      out.saturated = true;
      break;
    }
    if (depth >= budget.max_depth || visited >= budget.max_nodes) {
      out.budget_exceeded = true;
      break;
    }
    const unsigned workers = std::max(1u, std::min<unsigned>(thread_count(), static_cast<unsigned>(frontier.size())));
    std::vector<std::vector<Node>> local(workers);
    parallel_for(workers, [&](std::size_t w) {
      std::size_t lo = frontier.size() * w / workers, hi = frontier.size() * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) {
        const Node& n = frontier[i];
        for (std::size_t k = 0; k < gens.size(); ++k) {
          if (n.last >= 0 && static_cast<int>(k) == inv_index[n.last]) continue;
          IntGroupElement child = multiply(n.g, gens[k]);
          if (!predicate(child)) continue;
          if (seen.insert(child)) local[w].push_back({child, static_cast<int>(k)});
        }
      }
    });
    std::vector<Node> next;
    for (auto& l : local) next.insert(next.end(), l.begin(), l.end());
    std::sort(next.begin(), next.end(), [](const Node& x, const Node& y) { return x.g < y.g; });
    ++depth;
    out.new_per_layer.push_back(next.size());
    for (const auto& n : next) {
      out.elements.push_back(n.g);
      out.depth.push_back(static_cast<std::uint32_t>(depth));
    }
    visited += next.size();
    out.layers_completed = depth;
    frontier.swap(next);
  }
  // Two trailing empty layers certify saturation even when the budget stopped us.
  const auto& L = out.new_per_layer;
  if (!out.saturated && L.size() >= 2 && L[L.size() - 1] == 0 && L[L.size() - 2] == 0) out.saturated = true;
  return out;
}

UTBPoint reduce_point(const UTBPoint& p, int width) {
  double x = p.x, y = p.y, theta = p.theta;
  const double w = width, half = 0.5 * w;
  for (int it = 0; it < 10000; ++it) {
    double n = std::floor((x + half) / w);
    x -= n * w;
    if (x >= half) x -= w;
    double r2 = x * x + y * y;
    if (r2 < 1.0) {
      theta -= 2.0 * std::atan2(y, x);
      x = -x / r2;
      y = y / r2;
      continue;
    }
    if (r2 == 1.0 && x < 0.0) {
      theta -= 2.0 * std::atan2(y, x);
      x = -x;
    }
    return {x, y, theta};
  }
  throw std::runtime_error("reduce_to_fundamental_domain: iteration cap reached");
}

std::pair<UTBPoint, IntGroupElement> reduce_to_fundamental_domain(const UTBPoint& p, int width) {
  double x = p.x, y = p.y, theta = p.theta;
  const double w = width, half = 0.5 * w;
  // gamma = (a b; c d), accumulated as left products
  i128 a = 1, b = 0, c = 0, d = 1;
  auto apply_translation = [&](std::int64_t t) {
    a += t * c;
    b += t * d;
  };
  auto apply_inversion = [&]() {
    i128 na = -c, nb = -d;
    c = a;
    d = b;
    a = na;
    b = nb;
  };
  for (int it = 0; it < 10000; ++it) {
    double n = std::floor((x + half) / w);
    x -= n * w;
    std::int64_t shift = -static_cast<std::int64_t>(n) * width;
    if (x >= half) {
      x -= w;
      shift -= width;
    }
    if (shift) apply_translation(shift);
    double r2 = x * x + y * y;
    bool flip = r2 < 1.0 || (r2 == 1.0 && x < 0.0);
    if (flip) {
      theta -= 2.0 * std::atan2(y, x);
      if (r2 < 1.0) {
        x = -x / r2;
        y = y / r2;
      } else {
        x = -x;
      }
      apply_inversion();
      if (r2 < 1.0) continue;
    }
    IntGroupElement g(checked(a), checked(b), checked(c), checked(d));
    return {UTBPoint(x, y, theta), g};
  }
  throw std::runtime_error("reduce_to_fundamental_domain: iteration cap reached");
}

std::string CosetLabel::to_string() const {
  std::ostringstream os;
  os << entries[0] << ' ' << entries[1] << ' ' << entries[2] << ' ' << entries[3] << " mod " << q;
  return os.str();
}

namespace {
CosetLabel canonical_label(std::array<std::int64_t, 4> e, std::int64_t q) {
  CosetLabel l;
  l.q = q;
  std::array<std::int64_t, 4> neg{};
  for (int i = 0; i < 4; ++i) {
    e[i] = mod(e[i], q);
    neg[i] = mod(-e[i], q);
  }
  l.entries = std::min(e, neg);
  return l;
}
}  // namespace

CosetLabel coset_label(const IntGroupElement& g, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("coset_label: q must be >= 1");
  return canonical_label(g.entries(), q);
}

CosetLabel identity_label(std::int64_t q) { return coset_label(IntGroupElement(), q); }

CosetLabel label_product(const CosetLabel& x, const CosetLabel& y) {
  if (x.q != y.q) throw std::invalid_argument("label_product: level mismatch");
  const auto q = x.q;
  const auto& m = x.entries;
  const auto& n = y.entries;
  auto mul = [q](std::int64_t u, std::int64_t v) { return static_cast<std::int64_t>((static_cast<i128>(u) * v) % q); };
  return canonical_label({mul(m[0], n[0]) + mul(m[1], n[2]), mul(m[0], n[1]) + mul(m[1], n[3]),
                          mul(m[2], n[0]) + mul(m[3], n[2]), mul(m[2], n[1]) + mul(m[3], n[3])},
                         q);
}

std::vector<CosetLabel> congruence_image(const GroupSpec& spec, std::int64_t q) {
  std::set<CosetLabel> seen{identity_label(q)};
  std::vector<CosetLabel> queue{identity_label(q)};
  std::vector<CosetLabel> gens;
  for (const auto& g : spec.generators) {
    gens.push_back(coset_label(g, q));
    gens.push_back(coset_label(inverse(g), q));
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      auto n = label_product(queue[i], g);
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {
// Rational p/q with small denominator close to x, if any.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_approx(double x) {
  double v = x;
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int i = 0; i < 40; ++i) {
    double fl = std::floor(v);
    auto a = static_cast<std::int64_t>(fl);
    std::int64_t h2 = a * h1 + h0, k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / k1 - x) < 1e-12 * std::max(1.0, std::abs(x))) return std::make_pair(h1, k1);
    if (k1 > 1'000'000) break;
    double frac = v - fl;
    if (frac == 0.0) break;
    v = 1.0 / frac;
  }
  return std::nullopt;
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  std::int64_t x1, y1;
  std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}
}  // namespace

GroupElement cusp_normalizer(const GroupSpec& spec, std::size_t cusp_index) {
  if (cusp_index >= spec.cusps.size()) throw std::out_of_range("cusp_normalizer: bad cusp index");
  const GroupElement frame_inv = inverse(spec.frame);
  const Cusp& cusp = spec.cusps[cusp_index];
  // Cusp position before the frame conjugation.
  std::optional<double> p0;
  if (cusp.point) {
    double den = frame_inv.c() * *cusp.point + frame_inv.d();
    if (std::abs(den) > 1e-15) p0 = (frame_inv.a() * *cusp.point + frame_inv.b()) / den;
  } else if (std::abs(frame_inv.c()) > 1e-15) {
    p0 = frame_inv.a() / frame_inv.c();
  }
  GroupElement sigma0;
  if (p0) {
    if (auto r = rational_approx(*p0)) {
      // sigma0 = (x y; -c a) with x a + y c = 1 sends a/c to infinity.
      auto [num, den] = *r;
      std::int64_t x, y;
      ext_gcd(num, den, x, y);
      sigma0 = GroupElement(static_cast<double>(x), static_cast<double>(y), static_cast<double>(-den),
                            static_cast<double>(num));
    } else {
      sigma0 = compose(inversion(), unipotent(-*p0));
    }
  }
  return compose(sigma0, frame_inv);
}

}  // namespace shearlab
