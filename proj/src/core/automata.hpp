#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "core/layer.hpp"
#include "core/obdd.hpp"

namespace odec {

// A symbol of an arity-r automaton is an r-tuple of layers.
using TupleSymbol = std::vector<Layer>;

// Constrained enumeration: fixed coordinates point at layers, free ones are
// null. An empty vector means "all coordinates free".
using PartialSymbol = std::vector<const Layer*>;

// Structural state identity: states are equal iff their field vectors are.
// Composite automata concatenate child fields, so identity stays structural
// across products and tensors.
using NfaState = std::vector<uint64_t>;

struct NfaStateHash {
  size_t operator()(const NfaState& s) const noexcept;
};

// Sentinel cost for generators that cannot enumerate their alphabet.
inline constexpr double kInfiniteCost = 1e300;

// Sink for transition enumeration; return false to stop early.
using EdgeSink = std::function<bool(const TupleSymbol&, const NfaState&)>;

// Nondeterministic automaton over layer-tuple alphabets. Alphabets are never
// materialized: each automaton enumerates outgoing symbols on demand, honoring
// whatever coordinates the caller has already fixed. Immutable after
// construction; generators must be pure, so values can be shared freely.
class LayeredNfa {
 public:
  virtual ~LayeredNfa() = default;

  uint32_t arity() const { return uint32_t(widths_.size()); }
  const std::vector<uint32_t>& width_bounds() const { return widths_; }

  virtual std::vector<NfaState> initial_states() const = 0;
  virtual bool is_final(const NfaState& s) const = 0;

  // Enumerates (symbol, successor) pairs from s compatible with `fixed`.
  // Returns false iff the sink stopped the enumeration.
  virtual bool transitions(const NfaState& s, const PartialSymbol& fixed,
                           const EdgeSink& sink) const = 0;

  // Estimated number of edges transitions() would emit; drives which operand
  // leads in product constructions. kInfiniteCost marks a generator that must
  // not lead.
  virtual double transition_cost(const NfaState& s,
                                 const PartialSymbol& fixed) const = 0;

  // Size of the declared state set; reachable states may be fewer. Composite
  // automata report the product of their parts.
  virtual double state_count() const = 0;

 protected:
  explicit LayeredNfa(std::vector<uint32_t> widths);
  std::vector<uint32_t> widths_;
};

using NfaPtr = std::shared_ptr<const LayeredNfa>;

PartialSymbol all_free(uint32_t arity);
PartialSymbol fix_all(const TupleSymbol& symbol);

// Accepts the word iff some run from an initial to a final state reads it.
// Word symbols must match the automaton's arity.
bool accepts(const LayeredNfa& a, const std::vector<TupleSymbol>& word);

// An OBDD viewed as a word over 1-tuples.
std::vector<TupleSymbol> obdd_word(const Obdd& d);

// States are the 2^w subsets of [0,w); a layer maps its exact domain to its
// image. Initial state {0}, every state final, so the language is the set of
// all valid OBDDs plus the empty word.
class ValidityNfa final : public LayeredNfa {
 public:
  explicit ValidityNfa(uint32_t w);
  uint32_t width() const { return w_; }

  std::vector<NfaState> initial_states() const override;
  bool is_final(const NfaState& s) const override;
  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override;
  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override;
  double state_count() const override;

 private:
  uint32_t w_;
};

// Chain automaton with n+1 states whose language is exactly {d}.
class SingletonNfa final : public LayeredNfa {
 public:
  explicit SingletonNfa(Obdd d);
  const Obdd& obdd() const { return d_; }

  std::vector<NfaState> initial_states() const override;
  bool is_final(const NfaState& s) const override;
  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override;
  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override;
  double state_count() const override;

 private:
  Obdd d_;
};

// Automaton given by explicit state, initial/final and edge lists. States are
// indices below state_total.
class ExtensionalNfa final : public LayeredNfa {
 public:
  struct Edge {
    uint32_t src;
    TupleSymbol symbol;
    uint32_t dst;
  };

  ExtensionalNfa(std::vector<uint32_t> widths, uint32_t state_total,
                 std::vector<uint32_t> initial, std::vector<uint32_t> final,
                 std::vector<Edge> edges);

  uint32_t state_total() const { return state_total_; }
  const std::vector<uint32_t>& initial() const { return initial_; }
  const std::vector<uint32_t>& final_states() const { return final_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::vector<NfaState> initial_states() const override;
  bool is_final(const NfaState& s) const override;
  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override;
  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override;
  double state_count() const override;

 private:
  uint32_t state_total_;
  std::vector<uint32_t> initial_;
  std::vector<uint32_t> final_;
  std::vector<Edge> edges_;
  std::vector<std::vector<uint32_t>> by_src_;  // edge indices per source
};

NfaPtr validity_automaton(uint32_t w);
NfaPtr singleton_automaton(const Obdd& d);

// Same language, wider declared coordinate bounds. A p-layer is a w-layer for
// p <= w, so only upward changes are allowed.
NfaPtr embed_widths(NfaPtr a, std::vector<uint32_t> widths);

}  // namespace odec
