#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shearlab/algebra.hpp"

namespace shearlab {

// Integer PSL(2,Z) element with the canonical sign (c > 0, or c == 0 and a > 0).
class IntGroupElement {
 public:
  IntGroupElement() = default;
  IntGroupElement(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  std::int64_t a() const { return m_[0]; }
  std::int64_t b() const { return m_[1]; }
  std::int64_t c() const { return m_[2]; }
  std::int64_t d() const { return m_[3]; }
  const std::array<std::int64_t, 4>& entries() const { return m_; }

  GroupElement to_real() const;
  auto operator<=>(const IntGroupElement&) const = default;

 private:
  std::array<std::int64_t, 4> m_{1, 0, 0, 1};
};

struct IntGroupElementHash {
  std::size_t operator()(const IntGroupElement& g) const noexcept;
};

// Throws std::overflow_error if an entry leaves the int64 range.
IntGroupElement multiply(const IntGroupElement& g, const IntGroupElement& h);
IntGroupElement inverse(const IntGroupElement& g);
IntFormVector spin_cover(const IntGroupElement& g, const IntFormVector& v);

struct Cusp {
  std::optional<double> point;  // nullopt is the cusp at infinity
  double width = 1.0;
};

struct GroupSpec {
  std::string name;
  std::vector<IntGroupElement> generators;
  bool lattice = false;
  std::vector<Cusp> cusps;
  // The group actually described is frame * <generators> * frame^{-1}.
  GroupElement frame;
  // Empirical critical exponent, filled in lazily by the counting code.
  std::optional<double> delta_hat;

  // Width w when the generators are exactly {(1 w; 0 1), S}; such groups
  // have fundamental domain |x| <= w/2, |z| >= 1 (the modular one for w = 1).
  std::optional<int> hecke_width() const;
};

GroupSpec psl2z_spec();
GroupSpec thin4_spec();  // <(1 4; 0 1), (0 -1; 1 0)>
GroupSpec builtin_spec(const std::string& name);
GroupSpec load_group_spec_json(const std::string& json_text);
GroupSpec load_group_spec_file(const std::string& path);

// Whole group conjugated by h: frame becomes h * frame and cusps move by h.
GroupSpec conjugate(const GroupSpec& spec, const GroupElement& h);

struct WordBudget {
  std::size_t max_depth = 1u << 20;
  std::size_t max_nodes = 50'000'000;
};

struct WordSearchResult {
  std::vector<IntGroupElement> elements;  // predicate-true elements, BFS order
  std::vector<std::uint32_t> depth;       // word length of each element
  std::vector<std::size_t> new_per_layer; // predicate-true discoveries per depth
  std::size_t layers_completed = 0;
  bool saturated = false;        // frontier exhausted or two empty layers
  bool budget_exceeded = false;  // depth or node cap hit first
};

// Breadth-first search of the Cayley graph from the identity. Only elements
// satisfying the predicate are reported and expanded; each element is visited
// once (exact dedup on canonical entries). Each layer is expanded in parallel
// and merged in sorted order, so the output is scheduling independent.
WordSearchResult enumerate_words(const GroupSpec& spec,
                                 const std::function<bool(const IntGroupElement&)>& predicate,
                                 const WordBudget& budget);

// Reduction into {|x| <= w/2, |z| >= 1}; w = 1 gives the PSL(2,Z) domain.
// Boundary convention: x = +w/2 is moved to -w/2, and on |z| = 1 the point
// with x < 0 is flipped to x > 0. Returns (reduced point, gamma) with
// mobius_act(gamma, p) equal to the reduced point.
std::pair<UTBPoint, IntGroupElement> reduce_to_fundamental_domain(const UTBPoint& p, int width = 1);
// Point-only variant (no matrix bookkeeping), used in hot loops.
UTBPoint reduce_point(const UTBPoint& p, int width = 1);

struct CosetLabel {
  std::int64_t q = 1;
  std::array<std::int64_t, 4> entries{0, 0, 0, 0};

  auto operator<=>(const CosetLabel&) const = default;
  std::string to_string() const;
};

CosetLabel coset_label(const IntGroupElement& g, std::int64_t q);
CosetLabel identity_label(std::int64_t q);
CosetLabel label_product(const CosetLabel& x, const CosetLabel& y);
// Image of the group in PSL(2, Z/q), closed under the generators.
std::vector<CosetLabel> congruence_image(const GroupSpec& spec, std::int64_t q);

GroupElement cusp_normalizer(const GroupSpec& spec, std::size_t cusp_index);

}  // namespace shearlab
