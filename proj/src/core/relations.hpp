#pragma once

#include <cstdint>
#include <vector>

#include "core/automata.hpp"
#include "core/automata_ops.hpp"

namespace odec {

// Pairs of valid words of equal length computing the same function. The only
// state is the set of jointly reachable state pairs; a pair of words is
// accepted iff no reachable endpoint splits into one accepting and one
// rejecting state. Requires w1 * w2 <= 64.
class EqualityNfa final : public LayeredNfa {
 public:
  EqualityNfa(uint32_t w1, uint32_t w2);

  std::vector<NfaState> initial_states() const override;
  bool is_final(const NfaState& s) const override;
  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override;
  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override;
  double state_count() const override;
};

// Pairs of syntactically identical valid words. Every layer must fit the
// smaller coordinate bound, so the language is symmetric in the two widths.
class IdentityNfa final : public LayeredNfa {
 public:
  IdentityNfa(uint32_t w1, uint32_t w2);

  std::vector<NfaState> initial_states() const override;
  bool is_final(const NfaState& s) const override;
  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override;
  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override;
  double state_count() const override;
};

NfaPtr equality_automaton(uint32_t w1, uint32_t w2);
NfaPtr identity_automaton(uint32_t w1, uint32_t w2);

// Gate relations. For and_op and or_op the result has arity 3 over widths
// (w1, w2, w3) and accepts (a, b, c) iff c computes the conjunction
// (disjunction) of a and b. For not_op it has arity 2 over (w1, w2), w3 must
// be 0, and it accepts (a, b) iff a computes the complement of b; the empty
// pair is excluded, since every empty word rejects and so none complements
// another. Built by composing a product automaton with an equality selector.
NfaPtr build_relation(BoolOp op, uint32_t w1, uint32_t w2, uint32_t w3 = 0);

// Same languages, computed by joint reachability over state tuples instead
// of by composition. Kept as a cross-check; requires the product of the
// widths to stay within 64.
NfaPtr build_relation_direct(BoolOp op, uint32_t w1, uint32_t w2,
                             uint32_t w3 = 0);

// Constrains host coordinates to spell a word of a relation. Positions are
// 1-based host coordinates, one per relation coordinate, distinct, with
// matching width bounds.
struct Selector {
  NfaPtr relation;
  std::vector<uint32_t> positions;
};

NfaPtr selector_select(NfaPtr host, const Selector& sel);

// Valid width-p words equivalent to some word of a (arity 1). Returns a
// itself when a is already the width-p validity automaton, which is closed.
NfaPtr equivalence_closure(NfaPtr a, uint32_t p);

}  // namespace odec
