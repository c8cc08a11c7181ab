#pragma once

// Shared test utilities. The reference implementations here are deliberately
// naive and structured differently from the library so that agreement between
// the two is meaningful.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core/automata.hpp"
#include "core/circuit.hpp"
#include "core/layer.hpp"
#include "core/obdd.hpp"
#include "core/truth_table.hpp"

namespace odec::test {

// Independent OBDD evaluation: scan the triple list of each layer directly.
inline bool naive_eval(const Obdd& d, uint64_t x) {
  uint32_t state = 0;
  for (uint32_t i = 1; i <= d.length(); ++i) {
    uint32_t bit = uint32_t((x >> (d.length() - i)) & 1);
    bool moved = false;
    for (const Transition& t : d.layer(i).triples()) {
      if (t.src == state && t.bit == bit) {
        state = t.dst;
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  return state != 0;
}

// NFA acceptance by depth-first path search, no subset construction.
inline bool naive_nfa_accepts(const LayeredNfa& a,
                              const std::vector<TupleSymbol>& word,
                              const NfaState& state, size_t pos) {
  if (pos == word.size()) return a.is_final(state);
  bool found = false;
  a.transitions(state, fix_all(word[pos]),
                [&](const TupleSymbol&, const NfaState& next) {
                  if (naive_nfa_accepts(a, word, next, pos + 1)) {
                    found = true;
                    return false;
                  }
                  return true;
                });
  return found;
}

inline bool naive_nfa_accepts(const LayeredNfa& a,
                              const std::vector<TupleSymbol>& word) {
  for (const NfaState& s : a.initial_states())
    if (naive_nfa_accepts(a, word, s, 0)) return true;
  return false;
}

// Random valid OBDD: each level picks uniform successors for both bits of
// every live state.
inline Obdd random_obdd(std::mt19937_64& rng, uint32_t w, uint32_t n) {
  std::uniform_int_distribution<uint32_t> pick(0, w - 1);
  LayerList layers;
  std::vector<uint32_t> dom{0};
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<Transition> triples;
    std::vector<uint32_t> im;
    for (uint32_t s : dom) {
      for (uint32_t b = 0; b < 2; ++b) {
        uint32_t t = pick(rng);
        triples.push_back({s, b, t});
        bool fresh = true;
        for (uint32_t u : im) fresh = fresh && u != t;
        if (fresh) im.push_back(t);
      }
    }
    layers.push_back(Layer(std::move(triples)));
    dom = std::move(im);
  }
  return Obdd::validate(std::move(layers), w);
}

// Random valid circuit over k inputs: repeatedly combines two not yet
// consumed gates (or negates one) until a single output remains.
inline Circuit random_circuit(std::mt19937_64& rng, uint32_t k,
                              uint32_t extra_nots = 0) {
  std::vector<Gate> gates;
  std::vector<uint32_t> open;
  for (uint32_t v = 1; v <= k; ++v) {
    gates.push_back(gate_input(v));
    open.push_back(v);
  }
  std::uniform_int_distribution<uint32_t> coin(0, 1);
  for (uint32_t i = 0; i < extra_nots; ++i) {
    std::uniform_int_distribution<size_t> at(0, open.size() - 1);
    size_t pos = at(rng);
    gates.push_back(gate_not(open[pos]));
    open[pos] = uint32_t(gates.size());
  }
  while (open.size() > 1) {
    std::uniform_int_distribution<size_t> at(0, open.size() - 1);
    size_t i = at(rng);
    std::swap(open[i], open.back());
    uint32_t a = open.back();
    open.pop_back();
    std::uniform_int_distribution<size_t> at2(0, open.size() - 1);
    size_t j = at2(rng);
    uint32_t b = open[j];
    gates.push_back(coin(rng) != 0 ? gate_and(a, b) : gate_or(a, b));
    open[j] = uint32_t(gates.size());
  }
  return Circuit::validate(std::move(gates), k);
}

// Recursive gate evaluation with the same MSB-first input convention as the
// truth-table helpers: variable v is bit k-v of x.
inline bool naive_gate_value(const Circuit& c, uint32_t g, uint64_t x) {
  const Gate& gate = c.gate(g);
  switch (gate.kind) {
    case GateKind::input:
      return ((x >> (c.inputs() - gate.a)) & 1) != 0;
    case GateKind::gnot:
      return !naive_gate_value(c, gate.a, x);
    case GateKind::gand:
      return naive_gate_value(c, gate.a, x) && naive_gate_value(c, gate.b, x);
    case GateKind::gor:
      return naive_gate_value(c, gate.a, x) || naive_gate_value(c, gate.b, x);
  }
  return false;
}

inline bool naive_circuit_eval(const Circuit& c, uint64_t x) {
  return naive_gate_value(c, c.size(), x);
}

// Number of valid width-<=w OBDDs of length n, from the recurrence over image
// sizes: a layer with domain size s and a fixed image set of size t is an
// onto function from the 2s (state, bit) pairs to that set.
inline uint64_t counted_obdds(uint32_t w, uint32_t n) {
  auto binom = [](uint32_t a, uint32_t b) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  auto onto = [&](uint32_t m, uint32_t t) {
    int64_t total = 0;
    for (uint32_t j = 0; j <= t; ++j) {
      int64_t term = int64_t(binom(t, j));
      uint64_t pw = 1;
      for (uint32_t i = 0; i < m; ++i) pw *= t - j;
      term *= int64_t(pw);
      total += (j % 2 == 0) ? term : -term;
    }
    return uint64_t(total);
  };
  // count[t] = number of length-i prefixes whose image has size t, summed
  // over all actual image sets.
  std::vector<uint64_t> count(w + 1, 0);
  for (uint32_t t = 1; t <= w; ++t) count[t] = binom(w, t) * onto(2, t);
  for (uint32_t i = 1; i < n; ++i) {
    std::vector<uint64_t> next(w + 1, 0);
    for (uint32_t t = 1; t <= w; ++t) {
      uint64_t sum = 0;
      for (uint32_t s = 1; s <= w; ++s) sum += count[s] * onto(2 * s, t);
      next[t] = binom(w, t) * sum;
    }
    count = std::move(next);
  }
  uint64_t total = 0;
  for (uint32_t t = 1; t <= w; ++t) total += count[t];
  return total;
}

// Relabels internal states by random per-level permutations; level 0 and the
// zero state on the last level stay put so acceptance is untouched.
inline Obdd relabel_obdd(std::mt19937_64& rng, const Obdd& d) {
  uint32_t w = d.width_bound();
  std::vector<uint32_t> before(w);  // permutation applied to source states
  for (uint32_t i = 0; i < w; ++i) before[i] = i;
  LayerList layers;
  for (uint32_t i = 1; i <= d.length(); ++i) {
    std::vector<uint32_t> after(w);
    for (uint32_t j = 0; j < w; ++j) after[j] = j;
    if (i < d.length()) {
      std::shuffle(after.begin(), after.end(), rng);
    } else {
      std::shuffle(after.begin() + 1, after.end(), rng);  // keep 0 rejecting
    }
    std::vector<Transition> triples;
    for (const Transition& t : d.layer(i).triples())
      triples.push_back({before[t.src], t.bit, after[t.dst]});
    layers.push_back(Layer(std::move(triples)));
    before = std::move(after);
  }
  return Obdd::validate(std::move(layers), w);
}

// Splits one live state on an interior level into two copies with identical
// behavior; the width bound grows by one to make room. Needs a state with at
// least two incoming edges so both copies stay reachable; if no interior
// level has one, only the bound is widened.
inline Obdd duplicate_state(std::mt19937_64& rng, const Obdd& d) {
  uint32_t w = d.width_bound();
  std::vector<std::pair<uint32_t, uint32_t>> candidates;  // (level, state)
  for (uint32_t i = 1; i < d.length(); ++i) {
    std::vector<uint32_t> indeg(64, 0);
    for (const Transition& t : d.layer(i).triples()) ++indeg[t.dst];
    for (uint32_t s = 0; s < 64; ++s)
      if (indeg[s] >= 2) candidates.push_back({i, s});
  }
  if (candidates.empty()) return Obdd::validate(d.layers(), w + 1);
  std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
  auto [at, victim] = candidates[pick(rng)];
  uint32_t clone = w;  // fresh index
  std::uniform_int_distribution<uint32_t> coin(0, 1);
  LayerList layers;
  for (uint32_t i = 1; i <= d.length(); ++i) {
    std::vector<Transition> triples;
    uint32_t seen = 0;
    for (const Transition& t : d.layer(i).triples()) {
      if (i == at && t.dst == victim) {
        // first edge keeps the original, second feeds the copy, the rest of
        // the split is random
        uint32_t dst = seen == 0 ? victim
                                 : (seen == 1 || coin(rng) != 0 ? clone
                                                                : victim);
        ++seen;
        triples.push_back({t.src, t.bit, dst});
      } else {
        triples.push_back(t);
      }
    }
    if (i == at + 1) {
      std::vector<Transition> extra;
      for (const Transition& t : triples)
        if (t.src == victim) extra.push_back({clone, t.bit, t.dst});
      for (const Transition& t : extra) triples.push_back(t);
    }
    layers.push_back(Layer(std::move(triples)));
  }
  return Obdd::validate(std::move(layers), w + 1);
}

// Function of exactly the two variables i < j (1-based), reaching level j
// with only x_i remembered; width stays at 2. g2 maps (x_i, x_j) pairs
// through the 4-bit mask: bit 2a+b holds g(a, b).
inline Obdd planted_junta_obdd(uint32_t n, uint32_t i, uint32_t j,
                               uint32_t mask) {
  LayerList layers;
  auto g = [mask](uint32_t a, uint32_t b) {
    return (mask >> (2 * a + b)) & 1;
  };
  std::vector<uint32_t> dom{0};
  for (uint32_t v = 1; v <= n; ++v) {
    std::vector<Transition> triples;
    std::vector<uint32_t> im;
    for (uint32_t s : dom) {
      for (uint32_t b = 0; b < 2; ++b) {
        uint32_t t;
        if (v < i)
          t = 0;
        else if (v == i)
          t = b;
        else if (v < j)
          t = s;
        else if (v == j)
          t = g(s, b);
        else
          t = s;
        triples.push_back({s, b, t});
        bool fresh = true;
        for (uint32_t u : im) fresh = fresh && u != t;
        if (fresh) im.push_back(t);
      }
    }
    layers.push_back(Layer(std::move(triples)));
    dom = std::move(im);
  }
  return Obdd::validate(std::move(layers), 2);
}

// Splits a word of m-tuples back into m OBDDs, validating each.
inline std::vector<Obdd> decode_tuple_word(
    const std::vector<TupleSymbol>& word, uint32_t arity, uint32_t w) {
  std::vector<Obdd> out;
  for (uint32_t c = 0; c < arity; ++c) {
    LayerList layers;
    for (const TupleSymbol& sym : word) layers.push_back(sym[c]);
    out.push_back(Obdd::validate(std::move(layers), w));
  }
  return out;
}

// Largest level image of an encoding, counted straight off the triples.
inline uint32_t naive_encoding_width(const Obdd& d) {
  uint32_t best = 0;
  for (uint32_t i = 1; i <= d.length(); ++i) {
    uint32_t live = uint32_t(__builtin_popcountll(d.layer(i).im_mask()));
    best = best < live ? live : best;
  }
  return best;
}

// Minimum width of any encoding of the table: the largest number of distinct
// residual functions over all levels.
inline uint32_t naive_canonical_width(const std::vector<uint8_t>& table,
                                      uint32_t n) {
  uint32_t best = 0;
  for (uint32_t i = 1; i <= n; ++i) {
    uint64_t prefixes = uint64_t(1) << i;
    uint64_t span = uint64_t(1) << (n - i);
    std::vector<std::vector<uint8_t>> seen;
    for (uint64_t q = 0; q < prefixes; ++q) {
      std::vector<uint8_t> slice(table.begin() + ptrdiff_t(q * span),
                                 table.begin() + ptrdiff_t((q + 1) * span));
      bool fresh = true;
      for (const std::vector<uint8_t>& s : seen) fresh = fresh && s != slice;
      if (fresh) seen.push_back(std::move(slice));
    }
    best = best < seen.size() ? uint32_t(seen.size()) : best;
  }
  return best;
}

inline std::vector<uint8_t> naive_table(const Obdd& d) {
  std::vector<uint8_t> t(uint64_t(1) << d.length());
  for (uint64_t x = 0; x < t.size(); ++x) t[x] = naive_eval(d, x) ? 1 : 0;
  return t;
}

// Pointwise gate tables computed from the input coordinates alone.
inline std::vector<std::vector<uint8_t>> naive_gate_tables(
    const Circuit& c, const std::vector<std::vector<uint8_t>>& inputs,
    uint32_t n) {
  uint64_t points = uint64_t(1) << n;
  std::vector<std::vector<uint8_t>> at(c.size());
  for (uint32_t g = 1; g <= c.size(); ++g) {
    const Gate& gate = c.gate(g);
    std::vector<uint8_t> t(points);
    for (uint64_t x = 0; x < points; ++x) {
      switch (gate.kind) {
        case GateKind::input:
          t[x] = inputs[gate.a - 1][x];
          break;
        case GateKind::gnot:
          t[x] = at[gate.a - 1][x] ^ 1;
          break;
        case GateKind::gand:
          t[x] = at[gate.a - 1][x] & at[gate.b - 1][x];
          break;
        case GateKind::gor:
          t[x] = at[gate.a - 1][x] | at[gate.b - 1][x];
          break;
      }
    }
    at[g - 1] = std::move(t);
  }
  return at;
}

// Definition-level membership in the consistent-tuple language: all
// coordinates are valid OBDDs of encoding width <= w and every internal
// gate's coordinate computes its operation applied to the argument
// coordinates.
inline bool in_con(const std::vector<Obdd>& tuple, uint32_t w,
                   const Circuit& c) {
  for (const Obdd& d : tuple)
    if (naive_encoding_width(d) > w) return false;
  std::vector<std::vector<uint8_t>> tabs;
  for (const Obdd& d : tuple) tabs.push_back(naive_table(d));
  for (uint32_t g = 1; g <= c.size(); ++g) {
    const Gate& gate = c.gate(g);
    if (gate.kind == GateKind::input) continue;
    for (uint64_t x = 0; x < tabs[0].size(); ++x) {
      uint8_t want = gate.kind == GateKind::gnot
                         ? tabs[gate.a - 1][x] ^ 1
                         : (gate.kind == GateKind::gand
                                ? tabs[gate.a - 1][x] & tabs[gate.b - 1][x]
                                : tabs[gate.a - 1][x] | tabs[gate.b - 1][x]);
      if (tabs[g - 1][x] != want) return false;
    }
  }
  return true;
}

// Definition-level membership in the solution language: the gate functions
// over the inputs are all encodable within width w and the output equals the
// target. The completion to a full consistent tuple is semantically forced,
// so width-w encodings of it exist exactly when every gate function's
// minimum width fits.
inline bool in_sol(const std::vector<Obdd>& inputs, uint32_t w, const Obdd& d,
                   const Circuit& c) {
  for (const Obdd& f : inputs)
    if (naive_encoding_width(f) > w || f.length() != d.length()) return false;
  std::vector<std::vector<uint8_t>> in_tabs;
  for (const Obdd& f : inputs) in_tabs.push_back(naive_table(f));
  std::vector<std::vector<uint8_t>> gates =
      naive_gate_tables(c, in_tabs, d.length());
  for (const std::vector<uint8_t>& g : gates)
    if (naive_canonical_width(g, d.length()) > w) return false;
  return gates.back() == naive_table(d);
}

}  // namespace odec::test
