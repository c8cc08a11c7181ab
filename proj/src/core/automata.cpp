#include "core/automata.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "core/errors.hpp"

namespace odec {

size_t NfaStateHash::operator()(const NfaState& s) const noexcept {
  uint64_t h = 1469598103934665603ull;
  for (uint64_t v : s) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return size_t(h);
}

LayeredNfa::LayeredNfa(std::vector<uint32_t> widths) : widths_(std::move(widths)) {
  if (widths_.empty()) fail(errc::invalid_parameters, "automaton arity must be positive");
  for (uint32_t w : widths_)
    if (w == 0 || w > 64) fail(errc::invalid_parameters, "width bound out of range");
}

PartialSymbol all_free(uint32_t arity) { return PartialSymbol(arity, nullptr); }

PartialSymbol fix_all(const TupleSymbol& symbol) {
  PartialSymbol p(symbol.size());
  for (size_t i = 0; i < symbol.size(); ++i) p[i] = &symbol[i];
  return p;
}

bool accepts(const LayeredNfa& a, const std::vector<TupleSymbol>& word) {
  for (const TupleSymbol& sym : word)
    if (sym.size() != a.arity())
      fail(errc::arity_mismatch, "word symbol arity does not match automaton");
  std::unordered_set<NfaState, NfaStateHash> frontier;
  for (NfaState& s : a.initial_states()) frontier.insert(std::move(s));
  for (const TupleSymbol& sym : word) {
    if (frontier.empty()) return false;
    std::unordered_set<NfaState, NfaStateHash> next;
    PartialSymbol fixed = fix_all(sym);
    for (const NfaState& s : frontier)
      a.transitions(s, fixed, [&](const TupleSymbol&, const NfaState& t) {
        next.insert(t);
        return true;
      });
    frontier = std::move(next);
  }
  for (const NfaState& s : frontier)
    if (a.is_final(s)) return true;
  return false;
}

std::vector<TupleSymbol> obdd_word(const Obdd& d) {
  std::vector<TupleSymbol> word;
  word.reserve(d.length());
  for (const Layer& l : d.layers()) word.push_back(TupleSymbol{l});
  return word;
}

// ---- ValidityNfa ----

ValidityNfa::ValidityNfa(uint32_t w) : LayeredNfa({w}), w_(w) {}

std::vector<NfaState> ValidityNfa::initial_states() const { return {NfaState{1}}; }

bool ValidityNfa::is_final(const NfaState&) const { return true; }

bool ValidityNfa::transitions(const NfaState& s, const PartialSymbol& fixed,
                              const EdgeSink& sink) const {
  uint64_t dom = s[0];
  const Layer* f = fixed.empty() ? nullptr : fixed[0];
  if (f) {
    if (f->dom_mask() == dom && f->fits_width(w_) && f->deterministic_complete())
      return sink(TupleSymbol{*f}, NfaState{f->im_mask()});
    return true;
  }
  TupleSymbol sym(1);
  NfaState st(1);
  return for_each_layer(dom, w_, [&](const Layer& l) {
    sym[0] = l;
    st[0] = l.im_mask();
    return sink(sym, st);
  });
}

double ValidityNfa::transition_cost(const NfaState& s, const PartialSymbol& fixed) const {
  if (!fixed.empty() && fixed[0]) return 1.0;
  return layer_count(s[0], w_);
}

double ValidityNfa::state_count() const { return std::ldexp(1.0, int(w_)); }

// ---- SingletonNfa ----

SingletonNfa::SingletonNfa(Obdd d) : LayeredNfa({d.width_bound()}), d_(std::move(d)) {}

std::vector<NfaState> SingletonNfa::initial_states() const { return {NfaState{0}}; }

bool SingletonNfa::is_final(const NfaState& s) const { return s[0] == d_.length(); }

bool SingletonNfa::transitions(const NfaState& s, const PartialSymbol& fixed,
                               const EdgeSink& sink) const {
  uint32_t level = uint32_t(s[0]);
  if (level >= d_.length()) return true;
  const Layer& l = d_.layer(level + 1);
  if (!fixed.empty() && fixed[0] && !(*fixed[0] == l)) return true;
  return sink(TupleSymbol{l}, NfaState{level + 1});
}

double SingletonNfa::transition_cost(const NfaState&, const PartialSymbol&) const {
  return 1.0;
}

double SingletonNfa::state_count() const { return double(d_.length()) + 1.0; }

// ---- ExtensionalNfa ----

ExtensionalNfa::ExtensionalNfa(std::vector<uint32_t> widths, uint32_t state_total,
                               std::vector<uint32_t> initial,
                               std::vector<uint32_t> final, std::vector<Edge> edges)
    : LayeredNfa(std::move(widths)),
      state_total_(state_total),
      initial_(std::move(initial)),
      final_(std::move(final)),
      edges_(std::move(edges)) {
  if (state_total_ == 0) fail(errc::invalid_parameters, "automaton needs at least one state");
  for (uint32_t q : initial_)
    if (q >= state_total_) fail(errc::index_out_of_range, "initial state out of range", q);
  for (uint32_t q : final_)
    if (q >= state_total_) fail(errc::index_out_of_range, "final state out of range", q);
  by_src_.resize(state_total_);
  for (size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.src >= state_total_ || e.dst >= state_total_)
      fail(errc::index_out_of_range, "edge endpoint out of range", int64_t(i));
    if (e.symbol.size() != arity())
      fail(errc::arity_mismatch, "edge symbol arity does not match automaton", int64_t(i));
    for (size_t c = 0; c < e.symbol.size(); ++c)
      if (!e.symbol[c].fits_width(widths_[c]))
        fail(errc::invalid_parameters, "edge symbol exceeds width bound", int64_t(i));
    by_src_[e.src].push_back(uint32_t(i));
  }
}

std::vector<NfaState> ExtensionalNfa::initial_states() const {
  std::vector<NfaState> out;
  out.reserve(initial_.size());
  for (uint32_t q : initial_) out.push_back(NfaState{q});
  return out;
}

bool ExtensionalNfa::is_final(const NfaState& s) const {
  return std::find(final_.begin(), final_.end(), uint32_t(s[0])) != final_.end();
}

bool ExtensionalNfa::transitions(const NfaState& s, const PartialSymbol& fixed,
                                 const EdgeSink& sink) const {
  for (uint32_t idx : by_src_[size_t(s[0])]) {
    const Edge& e = edges_[idx];
    bool match = true;
    for (size_t c = 0; c < e.symbol.size() && match; ++c)
      if (c < fixed.size() && fixed[c] && !(*fixed[c] == e.symbol[c])) match = false;
    if (match && !sink(e.symbol, NfaState{e.dst})) return false;
  }
  return true;
}

double ExtensionalNfa::transition_cost(const NfaState& s, const PartialSymbol&) const {
  return double(by_src_[size_t(s[0])].size());
}

double ExtensionalNfa::state_count() const { return double(state_total_); }

// ---- factories ----

NfaPtr validity_automaton(uint32_t w) { return std::make_shared<ValidityNfa>(w); }

NfaPtr singleton_automaton(const Obdd& d) { return std::make_shared<SingletonNfa>(d); }

namespace {

class EmbedNfa final : public LayeredNfa {
 public:
  EmbedNfa(NfaPtr inner, std::vector<uint32_t> widths)
      : LayeredNfa(std::move(widths)), inner_(std::move(inner)) {}

  std::vector<NfaState> initial_states() const override { return inner_->initial_states(); }
  bool is_final(const NfaState& s) const override { return inner_->is_final(s); }
  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    return inner_->transitions(s, fixed, sink);
  }
  double transition_cost(const NfaState& s, const PartialSymbol& fixed) const override {
    return inner_->transition_cost(s, fixed);
  }
  double state_count() const override { return inner_->state_count(); }

 private:
  NfaPtr inner_;
};

}  // namespace

NfaPtr embed_widths(NfaPtr a, std::vector<uint32_t> widths) {
  if (widths.size() != a->arity())
    fail(errc::arity_mismatch, "embedding must preserve arity");
  for (size_t i = 0; i < widths.size(); ++i)
    if (widths[i] < a->width_bounds()[i])
      fail(errc::invalid_parameters, "embedding can only widen coordinate bounds");
  if (widths == a->width_bounds()) return a;
  return std::make_shared<EmbedNfa>(std::move(a), std::move(widths));
}

}  // namespace odec
