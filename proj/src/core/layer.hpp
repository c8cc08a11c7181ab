#pragma once

// Transition layers. A layer is a finite set of triples (source, bit, target);
// ordered-binary-decision diagrams are strings of layers, and the automata in
// this library read tuples of layers as alphabet symbols.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace odec {

struct Transition {
  uint32_t src = 0;
  uint32_t bit = 0;
  uint32_t dst = 0;
  auto operator<=>(const Transition&) const = default;
};

// Immutable sorted triple set. Two layers compare equal iff their triple sets
// are equal; a declared width bound is a constraint on where a layer may be
// used, not part of its identity, so narrow layers embed into wider alphabets
// unchanged.
class Layer {
 public:
  Layer() = default;
  explicit Layer(std::vector<Transition> triples);

  const std::vector<Transition>& triples() const { return triples_; }
  bool empty() const { return triples_.empty(); }

  uint64_t dom_mask() const { return dom_mask_; }
  uint64_t im_mask() const { return im_mask_; }
  uint32_t max_index() const { return max_index_; }

  // All source/target indices below w.
  bool fits_width(uint32_t w) const { return triples_.empty() || max_index_ < w; }
  // Exactly one transition per (source, bit) with both bits present for every
  // source in the domain.
  bool deterministic_complete() const;

  // Unique target for (q, bit), if the layer is deterministic there.
  std::optional<uint32_t> step(uint32_t q, uint32_t bit) const;

  auto operator<=>(const Layer& o) const { return triples_ <=> o.triples_; }
  bool operator==(const Layer& o) const { return triples_ == o.triples_; }

  size_t hash() const;

 private:
  std::vector<Transition> triples_;
  uint64_t dom_mask_ = 0;
  uint64_t im_mask_ = 0;
  uint32_t max_index_ = 0;
};

using LayerList = std::vector<Layer>;

inline void hash_combine(size_t& seed, size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

// Synchronized pairing: state pairs (q, q') are renamed q * w2 + q'. Sources
// are restricted to the pairs in src_mask, so consecutive pair layers chain
// domains to images exactly. The pair 0 maps to 0, so pairing preserves
// rejection exactly when both operands reject; on a final layer this computes
// the union of the two languages.
Layer layer_pair(const Layer& a, const Layer& b, uint32_t w2, uint64_t src_mask);

// Pairing with conjunctive target collapse: a target pair with either
// component zero becomes 0. Used on final layers to compute intersections.
Layer layer_pair_meet(const Layer& a, const Layer& b, uint32_t w2, uint64_t src_mask);

// Swap zero and nonzero targets: target 0 becomes 1, everything else 0.
// Applied to a final layer this complements the language.
Layer layer_negate(const Layer& a);

// Enumerate every deterministic-complete layer with domain dom_mask and
// targets in [0, w), in ascending layer order. Return false to stop early.
bool for_each_layer(uint64_t dom_mask, uint32_t w,
                    const std::function<bool(const Layer&)>& f);

// Number of layers for_each_layer would produce: w^(2 * |dom|), saturated.
double layer_count(uint64_t dom_mask, uint32_t w);

}  // namespace odec

template <>
struct std::hash<odec::Layer> {
  size_t operator()(const odec::Layer& l) const { return l.hash(); }
};
