#include "core/reconfig.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "core/automata_ops.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/relations.hpp"
#include "core/truth_table.hpp"

namespace odec {

namespace {

constexpr uint64_t kPowCap = uint64_t(1) << 32;

// p^k saturated at kPowCap; the cap only needs to exceed every usable bound.
uint64_t pow_sat(uint64_t p, uint32_t k) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < k; ++i) {
    if (p > 1 && r > kPowCap / p) return kPowCap;
    r *= p;
  }
  return std::min(r, kPowCap);
}

// Joint forward simulation of k candidate factors against the canonical
// target. A code packs a joint state (q_1,...,q_k,q_D) in base p with the
// target's state on top; a state is the level plus the set of codes, kept as
// one bitmask when every code fits below 64 and as a sorted list otherwise.
// Because every factor layer is deterministic and complete on its domain, the
// code set is exactly the set of joint states reachable over all inputs of
// the given length, so acceptance only has to check the table condition per
// code.
class SolutionNfa final : public LayeredNfa {
 public:
  SolutionNfa(Obdd canon_target, const Circuit& c, uint32_t p)
      : LayeredNfa(std::vector<uint32_t>(c.inputs(), p)),
        d_(std::move(canon_target)),
        tbl_(circuit_table(c)),
        p_(p),
        k_(c.inputs()),
        pk_(pow_sat(p, c.inputs())),
        compact_(pk_ <= 64 &&
                 pk_ * std::max<uint64_t>(d_.width_bound(), 1) <= 64) {}

  std::vector<NfaState> initial_states() const override {
    return {compact_ ? NfaState{0, 1} : NfaState{0, 0}};
  }

  bool is_final(const NfaState& s) const override {
    if (s[0] != d_.length()) return false;
    bool ok = true;
    each_code(s, [&](uint64_t code) {
      uint64_t inputs = 0;
      for (uint32_t v = 1; v <= k_; ++v) {
        if (code % p_ != 0) inputs |= uint64_t(1) << (k_ - v);
        code /= p_;
      }
      if (tbl_.at(inputs) != (code != 0)) ok = false;  // code: target state
    });
    return ok;
  }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    uint32_t level = uint32_t(s[0]);
    if (level >= d_.length()) return true;
    const Layer& dl = d_.layer(level + 1);

    std::vector<uint64_t> codes;
    each_code(s, [&](uint64_t c) { codes.push_back(c); });
    size_t nc = codes.size();

    // Decode once: q[v*nc+c] is coordinate v of code c (v = k_ is the
    // target's state); dom[v] projects the code set onto coordinate v.
    std::vector<uint8_t> q((k_ + 1) * nc);
    std::vector<uint64_t> dom(k_, 0);
    for (size_t c = 0; c < nc; ++c) {
      uint64_t code = codes[c];
      for (uint32_t v = 0; v < k_; ++v) {
        uint8_t st = uint8_t(code % p_);
        q[v * nc + c] = st;
        dom[v] |= uint64_t(1) << st;
        code /= p_;
      }
      q[k_ * nc + c] = uint8_t(code);
    }

    // acc row v holds the partial successor codes (per code, per bit) with
    // the target layer and coordinates below v already added in.
    std::vector<uint64_t> acc((k_ + 1) * 2 * nc);
    for (size_t c = 0; c < nc; ++c)
      for (uint32_t b = 0; b < 2; ++b)
        acc[2 * c + b] = pk_ * uint64_t(*dl.step(q[k_ * nc + c], b));
    std::vector<uint64_t> mul(k_);
    for (uint32_t v = 0; v < k_; ++v) mul[v] = v ? mul[v - 1] * p_ : 1;

    TupleSymbol sym(k_);
    NfaState next;
    uint8_t step[128];  // dense (state, bit) -> target for the chosen layer
    auto coord = [&](uint32_t v, auto&& self) -> bool {
      const Layer* fix = fixed.empty() ? nullptr : fixed[v];
      const uint64_t* in = &acc[v * 2 * nc];
      uint64_t* out = &acc[(v + 1) * 2 * nc];
      auto use = [&](const Layer& l) {
        for (const Transition& t : l.triples())
          step[t.src * 2 + t.bit] = uint8_t(t.dst);
        for (size_t c = 0; c < nc; ++c) {
          out[2 * c] = in[2 * c] + mul[v] * step[q[v * nc + c] * 2];
          out[2 * c + 1] = in[2 * c + 1] + mul[v] * step[q[v * nc + c] * 2 + 1];
        }
        sym[v] = l;
        if (v + 1 < k_) return self(v + 1, self);
        next.clear();
        next.push_back(level + 1);
        if (compact_) {
          uint64_t m = 0;
          for (size_t j = 0; j < 2 * nc; ++j) m |= uint64_t(1) << out[j];
          next.push_back(m);
        } else {
          next.insert(next.end(), out, out + 2 * nc);
          std::sort(next.begin() + 1, next.end());
          next.erase(std::unique(next.begin() + 1, next.end()), next.end());
        }
        return sink(sym, next);
      };
      if (fix) {
        if (fix->dom_mask() != dom[v] || !fix->fits_width(p_) ||
            !fix->deterministic_complete())
          return true;
        return use(*fix);
      }
      return for_each_layer(dom[v], p_, use);
    };
    return coord(0, coord);
  }

  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override {
    if (s[0] >= d_.length()) return 0;
    std::vector<uint64_t> dom(k_, 0);
    each_code(s, [&](uint64_t code) {
      for (uint32_t v = 0; v < k_; ++v) {
        dom[v] |= uint64_t(1) << (code % p_);
        code /= p_;
      }
    });
    double c = 1;
    for (uint32_t v = 0; v < k_; ++v)
      if (fixed.empty() || !fixed[v])
        c = std::min(c * layer_count(dom[v], p_), kInfiniteCost);
    return c;
  }

  double state_count() const override {
    double codes = double(pk_) * d_.width_bound();
    if (codes > 1000) return kInfiniteCost;
    return std::min((d_.length() + 1) * std::ldexp(1.0, int(codes)),
                    kInfiniteCost);
  }

 private:
  template <typename F>
  void each_code(const NfaState& s, F f) const {
    if (compact_) {
      for (uint64_t m = s[1]; m != 0; m &= m - 1)
        f(uint64_t(std::countr_zero(m)));
    } else {
      for (size_t i = 1; i < s.size(); ++i) f(s[i]);
    }
  }

  Obdd d_;
  TruthTable tbl_;
  uint32_t p_;
  uint32_t k_;
  uint64_t pk_;
  bool compact_;
};

// Per-factor class constraints at width p, or empty when every factor is
// unconstrained. A single automaton is replicated across all factors.
std::vector<NfaPtr> prepare_classes(const Circuit& c, uint32_t p,
                                    const std::vector<NfaPtr>& raw,
                                    bool syntactic) {
  uint32_t k = c.inputs();
  if (raw.empty()) return {};
  std::vector<NfaPtr> src = raw;
  if (src.size() == 1) src.assign(k, raw[0]);
  if (src.size() != k)
    fail(errc::arity_mismatch,
         "need one class automaton, or one per circuit input");
  std::vector<NfaPtr> out(k);
  bool constrained = false;
  for (uint32_t i = 0; i < k; ++i) {
    const NfaPtr& a = src[i];
    if (!a) fail(errc::invalid_parameters, "class automaton is null");
    if (a->arity() != 1)
      fail(errc::arity_mismatch, "class automata must have arity 1");
    uint32_t wa = a->width_bounds()[0];
    if (wa > p)
      fail(errc::invalid_parameters,
           "class automaton width exceeds the factor width");
    const auto* v = dynamic_cast<const ValidityNfa*>(a.get());
    if (v && v->width() == p) continue;  // nothing beyond validity
    constrained = true;
    if (syntactic) {
      NfaPtr at_p = wa == p ? a : embed_widths(a, {p});
      out[i] = product_intersect(at_p, validity_automaton(p));
    } else {
      out[i] = equivalence_closure(a, p);
    }
  }
  if (!constrained) return {};
  for (NfaPtr& x : out)
    if (!x) x = validity_automaton(p);
  return out;
}

NfaPtr engine_language(const Obdd& canon, const Circuit& c, uint32_t p,
                       const std::vector<NfaPtr>& prepared) {
  NfaPtr lang = std::make_shared<SolutionNfa>(canon, c, p);
  if (prepared.empty()) return lang;
  NfaPtr cls = prepared[0];
  for (size_t i = 1; i < prepared.size(); ++i) cls = tensor(cls, prepared[i]);
  return product_intersect(std::move(lang), std::move(cls));
}

std::vector<Obdd> word_factors(const std::vector<TupleSymbol>& word, uint32_t k,
                               uint32_t p) {
  std::vector<Obdd> out;
  out.reserve(k);
  for (uint32_t i = 0; i < k; ++i) {
    LayerList layers;
    layers.reserve(word.size());
    for (const TupleSymbol& sym : word) layers.push_back(sym[i]);
    out.push_back(Obdd::validate(std::move(layers), p));
  }
  return out;
}

Witness make_witness(std::vector<Obdd> factors, const ProblemInstance& inst,
                     const Obdd& canon, const std::vector<NfaPtr>& prepared) {
  Witness w;
  w.factors = std::move(factors);
  w.per_gate = gate_functions(inst.circuit, w.factors);
  for (const Obdd& g : w.per_gate)
    w.reconfig_width = std::max(w.reconfig_width, g.width());

  VerificationReport& r = w.verified;
  uint32_t p = inst.factor_width;
  uint32_t k = inst.circuit.inputs();
  uint32_t n = canon.length();

  r.widths_ok = true;
  for (const Obdd& f : w.factors)
    if (f.width() > p) r.widths_ok = false;
  if (inst.reconfig_bound && w.reconfig_width > *inst.reconfig_bound)
    r.widths_ok = false;

  if (n <= 20) {
    TruthTable tbl = circuit_table(inst.circuit);
    r.pointwise_ok = true;
    r.inputs_checked = uint64_t(1) << n;
    for (uint64_t x = 0; x < (uint64_t(1) << n); ++x) {
      uint64_t inputs = 0;
      for (uint32_t v = 1; v <= k; ++v)
        if (w.factors[v - 1].evaluate_index(x))
          inputs |= uint64_t(1) << (k - v);
      if (tbl.at(inputs) != canon.evaluate_index(x)) {
        r.pointwise_ok = false;
        break;
      }
    }
  } else {
    r.pointwise_ok = true;  // covered by the canonical-equality check
  }

  r.canonical_ok = equivalent(w.per_gate.back(), canon);

  r.class_ok = true;
  if (!prepared.empty())
    for (uint32_t i = 0; i < k; ++i)
      if (!accepts(*prepared[i], obdd_word(w.factors[i]))) r.class_ok = false;
  return w;
}

void fill_stats(SolveStats* stats, const SearchStats& ss, uint64_t scanned) {
  if (!stats) return;
  stats->states_explored = ss.states_explored;
  stats->levels = ss.levels;
  stats->died_level = ss.died_level;
  stats->scanned_candidates = scanned;
}

}  // namespace

NfaPtr con_language(uint32_t w, const Circuit& c) {
  if (w < 1) fail(errc::invalid_parameters, "width must be at least 1");
  uint32_t m = uint32_t(c.gates().size());
  NfaPtr acc = validity_automaton(w);
  for (uint32_t i = 2; i <= m; ++i) acc = tensor(acc, validity_automaton(w));
  for (uint32_t i = 1; i <= m; ++i) {
    const Gate& g = c.gates()[i - 1];
    switch (g.kind) {
      case GateKind::input:
        break;
      case GateKind::gnot:
        acc = selector_select(
            acc, {build_relation(BoolOp::not_op, w, w), {i, g.a}});
        break;
      case GateKind::gand:
        acc = selector_select(
            acc, {build_relation(BoolOp::and_op, w, w, w), {g.a, g.b, i}});
        break;
      case GateKind::gor:
        acc = selector_select(
            acc, {build_relation(BoolOp::or_op, w, w, w), {g.a, g.b, i}});
        break;
    }
  }
  return acc;
}

NfaPtr sol_language(uint32_t w, const Obdd& d, const Circuit& c) {
  uint32_t m = uint32_t(c.gates().size());
  NfaPtr host = tensor(con_language(w, c), singleton_automaton(d));
  host = selector_select(
      host, {equality_automaton(w, d.width_bound()), {m, m + 1}});
  return map_alphabet(std::move(host), MapMode::forward, c.input_positions());
}

NfaPtr sol_constrained(const ProblemInstance& inst, const SolveOptions& opts) {
  if (inst.factor_width < 1)
    fail(errc::invalid_parameters, "factor width must be at least 1");
  uint32_t p = inst.factor_width;
  uint32_t k = inst.circuit.inputs();
  uint32_t w;
  if (inst.reconfig_bound) {
    w = *inst.reconfig_bound;
    if (p >= w)
      fail(errc::invalid_parameters,
           "factor width must be strictly below the reconfiguration bound");
  } else {
    uint64_t pk = pow_sat(p, k);
    if (pk > opts.max_width)
      fail(errc::resource_limit,
           "implied gate width bound exceeds the configured ceiling");
    w = uint32_t(pk);
  }
  NfaPtr acc = sol_language(w, inst.target, inst.circuit);
  std::vector<NfaPtr> prepared =
      prepare_classes(inst.circuit, p, inst.class_automata,
                      opts.syntactic_class);
  NfaPtr fold;
  for (uint32_t i = 0; i < k; ++i) {
    NfaPtr ci = prepared.empty() ? validity_automaton(p) : prepared[i];
    if (ci->width_bounds()[0] < w) ci = embed_widths(ci, {w});
    fold = fold ? tensor(std::move(fold), std::move(ci)) : ci;
  }
  return product_intersect(std::move(acc), std::move(fold));
}

std::optional<Witness> decide_decomposition(const ProblemInstance& inst,
                                            const SolveOptions& opts,
                                            SolveStats* stats) {
  if (inst.reconfig_bound)
    fail(errc::invalid_parameters,
         "decomposition takes no reconfiguration bound");
  if (inst.factor_width < 1)
    fail(errc::invalid_parameters, "factor width must be at least 1");
  uint32_t p = inst.factor_width;
  uint32_t k = inst.circuit.inputs();
  if (pow_sat(p, k) > opts.max_width)
    fail(errc::resource_limit,
         "implied gate width bound exceeds the configured ceiling");
  Obdd canon = canonicalize(inst.target);
  std::vector<NfaPtr> prepared =
      prepare_classes(inst.circuit, p, inst.class_automata,
                      opts.syntactic_class);
  NfaPtr lang = engine_language(canon, inst.circuit, p, prepared);
  SearchStats ss;
  auto word = first_accepted(*lang, canon.length(), &ss);
  fill_stats(stats, ss, 0);
  if (!word) return std::nullopt;
  return make_witness(word_factors(*word, k, p), inst, canon, prepared);
}

std::optional<Witness> decide_reconfiguration(const ProblemInstance& inst,
                                              const SolveOptions& opts,
                                              SolveStats* stats) {
  if (!inst.reconfig_bound)
    fail(errc::invalid_parameters, "reconfiguration needs a width bound");
  if (inst.factor_width < 1)
    fail(errc::invalid_parameters, "factor width must be at least 1");
  uint32_t w = *inst.reconfig_bound;
  uint32_t p = inst.factor_width;
  uint32_t k = inst.circuit.inputs();
  if (p >= w)
    fail(errc::invalid_parameters,
         "factor width must be strictly below the reconfiguration bound");
  if (stats) *stats = {};
  Obdd canon = canonicalize(inst.target);
  // The output gate computes the target, so no tuple beats its width.
  if (canon.width() > w) return std::nullopt;
  std::vector<NfaPtr> prepared =
      prepare_classes(inst.circuit, p, inst.class_automata,
                      opts.syntactic_class);
  NfaPtr lang = engine_language(canon, inst.circuit, p, prepared);
  uint32_t n = canon.length();
  SearchStats ss;

  if (uint64_t(w) >= pow_sat(p, k)) {  // every gate fits under the bound
    auto word = first_accepted(*lang, n, &ss);
    fill_stats(stats, ss, 0);
    if (!word) return std::nullopt;
    return make_witness(word_factors(*word, k, p), inst, canon, prepared);
  }

  // Bounded search: walk decompositions in order and keep the first whose
  // gate widths fit. Widths depend only on the factor functions, so they are
  // memoized per canonical tuple.
  std::map<std::string, uint32_t> width_memo;
  std::optional<std::vector<TupleSymbol>> hit;
  uint64_t scanned = 0;
  bool over = false;
  for_each_accepted(
      *lang, n,
      [&](const std::vector<TupleSymbol>& word) {
        if (++scanned > opts.scan_limit) {
          over = true;
          return false;
        }
        std::vector<Obdd> factors = word_factors(word, k, p);
        std::string key;
        for (const Obdd& f : factors) {
          key += io::format_obdd(canonicalize(f));
          key += '\n';
        }
        auto it = width_memo.find(key);
        uint32_t rw = it != width_memo.end()
                          ? it->second
                          : (width_memo[key] =
                                 reconfiguration_width(inst.circuit, factors));
        if (rw <= w) {
          hit = word;
          return false;
        }
        return true;
      },
      &ss);
  fill_stats(stats, ss, scanned);
  if (over)
    fail(errc::resource_limit, "candidate scan exceeded the configured limit");
  if (!hit) return std::nullopt;
  return make_witness(word_factors(*hit, k, p), inst, canon, prepared);
}

std::optional<JuntaResult> decide_generalized_junta(
    const Obdd& target, uint32_t k, uint32_t p, uint32_t m_max,
    const std::vector<NfaPtr>& classes, const SolveOptions& opts,
    SolveStats* stats) {
  Obdd canon = canonicalize(target);
  std::optional<JuntaResult> out;
  SolveStats agg;
  // Circuits computing a table already seen would reproduce an earlier
  // outcome, so they are skipped whenever the deduplication guard allows.
  for_each_circuit(
      k, m_max,
      [&](const Circuit& c) {
        ProblemInstance inst{canon, c, p, std::nullopt, classes};
        SolveStats st;
        auto wit = decide_decomposition(inst, opts, &st);
        agg.states_explored += st.states_explored;
        agg.levels = st.levels;
        agg.died_level = st.died_level;
        if (wit) {
          out = JuntaResult{c, std::move(*wit)};
          return false;
        }
        return true;
      },
      k <= 6);
  if (stats) *stats = agg;
  return out;
}

std::optional<std::vector<Obdd>> factorize_obdd(const Obdd& d, uint32_t k,
                                                const SolveOptions& opts,
                                                SolveStats* stats) {
  Obdd canon = canonicalize(d);
  uint32_t w = canon.width();
  if (w < 2 || k < 2)
    fail(errc::invalid_parameters,
         "factorization needs target width >= 2 and at least two factors");
  std::vector<Gate> gates;
  for (uint32_t v = 1; v <= k; ++v) gates.push_back(gate_input(v));
  uint32_t prev = 1;
  for (uint32_t j = 2; j <= k; ++j) {
    gates.push_back(gate_and(prev, j));
    prev = k + j - 1;
  }
  Circuit c = Circuit::validate(std::move(gates), k);
  ProblemInstance inst{canon, c, w - 1, std::nullopt, {}};
  auto wit = decide_decomposition(inst, opts, stats);
  if (!wit) return std::nullopt;
  return std::move(wit->factors);
}

}  // namespace odec
