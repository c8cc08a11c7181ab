#pragma once

#include <optional>

#include "core/automata.hpp"

namespace odec {

// L(result) = L(a) ∩ L(b). Arity and width bounds must agree. Transitions are
// enumerated by whichever side reports the smaller cost; the other side
// filters.
NfaPtr product_intersect(NfaPtr a, NfaPtr b);

// L(result) = { u ⊗ v : u ∈ L(a), v ∈ L(b), |u| = |v| }, arity r_a + r_b.
NfaPtr tensor(NfaPtr a, NfaPtr b);

enum class MapMode { forward, inverse };

// Coordinate extraction map m_S between a host tuple and a sub-tuple at the
// 1-based `positions`.
//   forward: host = a itself; L(result) = positions-extraction of L(a).
//   inverse: a has arity |positions|; L(result) = all host words whose
//            extraction lies in L(a); host arity/widths must be supplied.
// Both directions keep the state set unchanged.
NfaPtr map_alphabet(NfaPtr a, MapMode mode, std::vector<uint32_t> positions,
                    std::vector<uint32_t> host_widths = {});

struct SearchStats {
  uint64_t states_explored = 0;
  uint32_t levels = 0;
  // First level whose frontier came up empty; -1 if none did.
  int64_t died_level = -1;
};

// Some accepted word of length exactly n, or absent. Layered forward
// reachability with predecessor links; each (state, level) is visited once.
std::optional<std::vector<TupleSymbol>> nonempty_at_length(const LayeredNfa& a,
                                                           uint32_t n,
                                                           SearchStats* stats = nullptr);

// Enumerates every accepted word of length n in ascending lexicographic order
// (symbols compared coordinate-wise by their sorted triple lists). Returns
// false iff the callback stopped the enumeration.
bool for_each_accepted(const LayeredNfa& a, uint32_t n,
                       const std::function<bool(const std::vector<TupleSymbol>&)>& f,
                       SearchStats* stats = nullptr);

// Lexicographically least accepted word of length n, or absent.
std::optional<std::vector<TupleSymbol>> first_accepted(const LayeredNfa& a, uint32_t n,
                                                       SearchStats* stats = nullptr);

// Number of accepted words of length n, counting at most `cap`.
uint64_t count_accepted(const LayeredNfa& a, uint32_t n,
                        uint64_t cap = UINT64_MAX);

// All 2^(2w²) layers over index set [0,w), valid or not, ascending by triple
// set. Only enumerable for w ≤ 2.
bool for_each_any_layer(uint32_t w, const std::function<bool(const Layer&)>& f);

}  // namespace odec
