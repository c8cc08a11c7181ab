#include "core/automata_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "core/errors.hpp"

namespace odec {

namespace {

// Child states are concatenated behind a length prefix so composite identities
// stay structural.
NfaState combine(const NfaState& a, const NfaState& b) {
  NfaState out;
  out.reserve(1 + a.size() + b.size());
  out.push_back(a.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::pair<NfaState, NfaState> split(const NfaState& s) {
  size_t la = size_t(s[0]);
  return {NfaState(s.begin() + 1, s.begin() + 1 + la),
          NfaState(s.begin() + 1 + la, s.end())};
}

class ProductNfa final : public LayeredNfa {
 public:
  ProductNfa(NfaPtr a, NfaPtr b)
      : LayeredNfa(a->width_bounds()), a_(std::move(a)), b_(std::move(b)) {
    if (a_->arity() != b_->arity() || a_->width_bounds() != b_->width_bounds())
      fail(errc::arity_mismatch, "product operands must share arity and width bounds");
  }

  std::vector<NfaState> initial_states() const override {
    std::vector<NfaState> out;
    for (const NfaState& sa : a_->initial_states())
      for (const NfaState& sb : b_->initial_states()) out.push_back(combine(sa, sb));
    return out;
  }

  bool is_final(const NfaState& s) const override {
    auto [sa, sb] = split(s);
    return a_->is_final(sa) && b_->is_final(sb);
  }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    auto [sa, sb] = split(s);
    double ca = a_->transition_cost(sa, fixed);
    double cb = b_->transition_cost(sb, fixed);
    if (ca >= kInfiniteCost && cb >= kInfiniteCost)
      fail(errc::resource_limit, "no enumerable operand in product");
    const LayeredNfa* drv = ca <= cb ? a_.get() : b_.get();
    const LayeredNfa* flt = ca <= cb ? b_.get() : a_.get();
    const NfaState& sd = ca <= cb ? sa : sb;
    const NfaState& sf = ca <= cb ? sb : sa;
    bool a_drives = ca <= cb;
    bool cont = true;
    PartialSymbol whole(arity());
    drv->transitions(sd, fixed, [&](const TupleSymbol& sym, const NfaState& td) {
      for (uint32_t i = 0; i < arity(); ++i) whole[i] = &sym[i];
      flt->transitions(sf, whole, [&](const TupleSymbol&, const NfaState& tf) {
        cont = sink(sym, a_drives ? combine(td, tf) : combine(tf, td));
        return cont;
      });
      return cont;
    });
    return cont;
  }

  double transition_cost(const NfaState& s, const PartialSymbol& fixed) const override {
    auto [sa, sb] = split(s);
    return std::min(a_->transition_cost(sa, fixed), b_->transition_cost(sb, fixed));
  }

  double state_count() const override { return a_->state_count() * b_->state_count(); }

 private:
  NfaPtr a_;
  NfaPtr b_;
};

class TensorNfa final : public LayeredNfa {
 public:
  TensorNfa(NfaPtr a, NfaPtr b)
      : LayeredNfa([&] {
          std::vector<uint32_t> w = a->width_bounds();
          w.insert(w.end(), b->width_bounds().begin(), b->width_bounds().end());
          return w;
        }()),
        a_(std::move(a)),
        b_(std::move(b)) {}

  std::vector<NfaState> initial_states() const override {
    std::vector<NfaState> out;
    for (const NfaState& sa : a_->initial_states())
      for (const NfaState& sb : b_->initial_states()) out.push_back(combine(sa, sb));
    return out;
  }

  bool is_final(const NfaState& s) const override {
    auto [sa, sb] = split(s);
    return a_->is_final(sa) && b_->is_final(sb);
  }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    auto [sa, sb] = split(s);
    auto [fa, fb] = split_partial(fixed);
    bool cont = true;
    TupleSymbol sym(arity());
    const uint32_t ra = a_->arity();
    a_->transitions(sa, fa, [&](const TupleSymbol& syma, const NfaState& ta) {
      for (uint32_t i = 0; i < ra; ++i) sym[i] = syma[i];
      b_->transitions(sb, fb, [&](const TupleSymbol& symb, const NfaState& tb) {
        for (uint32_t i = ra; i < arity(); ++i) sym[i] = symb[i - ra];
        cont = sink(sym, combine(ta, tb));
        return cont;
      });
      return cont;
    });
    return cont;
  }

  double transition_cost(const NfaState& s, const PartialSymbol& fixed) const override {
    auto [sa, sb] = split(s);
    auto [fa, fb] = split_partial(fixed);
    double c = a_->transition_cost(sa, fa) * b_->transition_cost(sb, fb);
    return std::min(c, kInfiniteCost);
  }

  double state_count() const override { return a_->state_count() * b_->state_count(); }

 private:
  std::pair<PartialSymbol, PartialSymbol> split_partial(const PartialSymbol& fixed) const {
    if (fixed.empty()) return {all_free(a_->arity()), all_free(b_->arity())};
    return {PartialSymbol(fixed.begin(), fixed.begin() + a_->arity()),
            PartialSymbol(fixed.begin() + a_->arity(), fixed.end())};
  }

  NfaPtr a_;
  NfaPtr b_;
};

// Forward extraction map: output coordinate i is inner coordinate keep[i].
class ProjectNfa final : public LayeredNfa {
 public:
  ProjectNfa(NfaPtr inner, std::vector<uint32_t> keep)
      : LayeredNfa([&] {
          std::vector<uint32_t> w;
          for (uint32_t p : keep) w.push_back(inner->width_bounds().at(p - 1));
          return w;
        }()),
        inner_(std::move(inner)),
        keep_(std::move(keep)) {}

  std::vector<NfaState> initial_states() const override { return inner_->initial_states(); }
  bool is_final(const NfaState& s) const override { return inner_->is_final(s); }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    bool cont = true;
    inner_->transitions(s, inner_partial(fixed),
                        [&](const TupleSymbol& sym, const NfaState& t) {
                          TupleSymbol out;
                          out.reserve(keep_.size());
                          for (uint32_t p : keep_) out.push_back(sym[p - 1]);
                          cont = sink(out, t);
                          return cont;
                        });
    return cont;
  }

  double transition_cost(const NfaState& s, const PartialSymbol& fixed) const override {
    return inner_->transition_cost(s, inner_partial(fixed));
  }

  double state_count() const override { return inner_->state_count(); }

 private:
  PartialSymbol inner_partial(const PartialSymbol& fixed) const {
    PartialSymbol ip = all_free(inner_->arity());
    for (size_t i = 0; i < keep_.size(); ++i)
      if (i < fixed.size() && fixed[i]) ip[keep_[i] - 1] = fixed[i];
    return ip;
  }

  NfaPtr inner_;
  std::vector<uint32_t> keep_;
};

// Inverse extraction map: host words whose sub-tuple at `positions` is
// accepted by the inner automaton. Host coordinates outside `positions` are
// unconstrained, so enumerating them needs the full layer alphabet.
class InverseNfa final : public LayeredNfa {
 public:
  InverseNfa(NfaPtr inner, std::vector<uint32_t> positions, std::vector<uint32_t> host_widths)
      : LayeredNfa(std::move(host_widths)), inner_(std::move(inner)), pos_(std::move(positions)) {
    if (pos_.size() != inner_->arity())
      fail(errc::arity_mismatch, "selector position count must match relation arity");
    for (size_t i = 0; i < pos_.size(); ++i) {
      if (pos_[i] == 0 || pos_[i] > arity())
        fail(errc::position_out_of_range, "selector position outside host arity", int64_t(pos_[i]));
      if (widths_[pos_[i] - 1] != inner_->width_bounds()[i])
        fail(errc::arity_mismatch, "relation width must match host coordinate width");
    }
    std::vector<uint32_t> sorted = pos_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(errc::position_out_of_range, "selector positions must be distinct");
  }

  std::vector<NfaState> initial_states() const override { return inner_->initial_states(); }
  bool is_final(const NfaState& s) const override { return inner_->is_final(s); }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    PartialSymbol ip(inner_->arity(), nullptr);
    for (size_t i = 0; i < pos_.size(); ++i)
      if (!fixed.empty() && fixed[pos_[i] - 1]) ip[i] = fixed[pos_[i] - 1];
    std::vector<uint32_t> free_rest;
    for (uint32_t c = 1; c <= arity(); ++c) {
      if (std::find(pos_.begin(), pos_.end(), c) != pos_.end()) continue;
      if (fixed.empty() || !fixed[c - 1]) free_rest.push_back(c);
    }
    bool cont = true;
    inner_->transitions(s, ip, [&](const TupleSymbol& isym, const NfaState& t) {
      TupleSymbol host(arity());
      for (uint32_t c = 1; c <= arity(); ++c)
        if (!fixed.empty() && fixed[c - 1]) host[c - 1] = *fixed[c - 1];
      for (size_t i = 0; i < pos_.size(); ++i) host[pos_[i] - 1] = isym[i];
      fill_free(host, free_rest, 0, t, sink, cont);
      return cont;
    });
    return cont;
  }

  double transition_cost(const NfaState& s, const PartialSymbol& fixed) const override {
    PartialSymbol ip(inner_->arity(), nullptr);
    double c = 1.0;
    for (size_t i = 0; i < pos_.size(); ++i)
      if (!fixed.empty() && fixed[pos_[i] - 1]) ip[i] = fixed[pos_[i] - 1];
    for (uint32_t coord = 1; coord <= arity(); ++coord) {
      if (std::find(pos_.begin(), pos_.end(), coord) != pos_.end()) continue;
      if (!fixed.empty() && fixed[coord - 1]) continue;
      uint32_t w = widths_[coord - 1];
      if (w > 2) return kInfiniteCost;
      c *= std::ldexp(1.0, int(2 * w * w));
    }
    return std::min(c * inner_->transition_cost(s, ip), kInfiniteCost);
  }

  double state_count() const override { return inner_->state_count(); }

 private:
  void fill_free(TupleSymbol& host, const std::vector<uint32_t>& free_rest, size_t idx,
                 const NfaState& t, const EdgeSink& sink, bool& cont) const {
    if (!cont) return;
    if (idx == free_rest.size()) {
      cont = sink(host, t);
      return;
    }
    uint32_t c = free_rest[idx];
    for_each_any_layer(widths_[c - 1], [&](const Layer& l) {
      host[c - 1] = l;
      fill_free(host, free_rest, idx + 1, t, sink, cont);
      return cont;
    });
  }

  NfaPtr inner_;
  std::vector<uint32_t> pos_;
};

}  // namespace

NfaPtr product_intersect(NfaPtr a, NfaPtr b) {
  return std::make_shared<ProductNfa>(std::move(a), std::move(b));
}

NfaPtr tensor(NfaPtr a, NfaPtr b) {
  return std::make_shared<TensorNfa>(std::move(a), std::move(b));
}

NfaPtr map_alphabet(NfaPtr a, MapMode mode, std::vector<uint32_t> positions,
                    std::vector<uint32_t> host_widths) {
  if (mode == MapMode::forward) {
    for (uint32_t p : positions)
      if (p == 0 || p > a->arity())
        fail(errc::position_out_of_range, "projection position outside arity", int64_t(p));
    return std::make_shared<ProjectNfa>(std::move(a), std::move(positions));
  }
  return std::make_shared<InverseNfa>(std::move(a), std::move(positions),
                                      std::move(host_widths));
}

std::optional<std::vector<TupleSymbol>> nonempty_at_length(const LayeredNfa& a, uint32_t n,
                                                           SearchStats* stats) {
  struct Node {
    NfaState s;
    int64_t parent;
    TupleSymbol via;
  };
  std::vector<std::vector<Node>> levels(1);
  std::unordered_map<NfaState, uint32_t, NfaStateHash> seen;
  for (NfaState& s : a.initial_states())
    if (seen.emplace(s, uint32_t(levels[0].size())).second)
      levels[0].push_back({std::move(s), -1, {}});
  uint64_t explored = levels[0].size();
  if (stats) *stats = {explored, n, -1};
  PartialSymbol nofix = all_free(a.arity());
  for (uint32_t i = 1; i <= n; ++i) {
    levels.emplace_back();
    seen.clear();
    for (size_t p = 0; p < levels[i - 1].size(); ++p)
      a.transitions(levels[i - 1][p].s, nofix,
                    [&](const TupleSymbol& sym, const NfaState& t) {
                      if (seen.emplace(t, uint32_t(levels[i].size())).second)
                        levels[i].push_back({t, int64_t(p), sym});
                      return true;
                    });
    explored += levels[i].size();
    if (stats) stats->states_explored = explored;
    if (levels[i].empty()) {
      if (stats) stats->died_level = int64_t(i);
      return std::nullopt;
    }
  }
  for (const Node& node : levels[n]) {
    if (!a.is_final(node.s)) continue;
    std::vector<TupleSymbol> word;
    const Node* cur = &node;
    for (uint32_t i = n; i >= 1; --i) {
      word.push_back(cur->via);
      cur = &levels[i - 1][size_t(cur->parent)];
    }
    std::reverse(word.begin(), word.end());
    return word;
  }
  return std::nullopt;
}

bool for_each_accepted(const LayeredNfa& a, uint32_t n,
                       const std::function<bool(const std::vector<TupleSymbol>&)>& f,
                       SearchStats* stats) {
  // Forward pass: intern states per level and keep deduplicated successor
  // ids, so aliveness can be decided on the index graph instead of by a
  // second transition sweep.
  std::vector<std::vector<NfaState>> states(n + 1);
  std::vector<std::unordered_map<NfaState, uint32_t, NfaStateHash>> index(n + 1);
  std::vector<std::vector<std::vector<uint32_t>>> succ(n);
  for (NfaState& s : a.initial_states())
    if (index[0].emplace(s, uint32_t(states[0].size())).second)
      states[0].push_back(std::move(s));
  uint64_t explored = states[0].size();
  if (stats) *stats = {explored, n, -1};
  if (states[0].empty()) return true;
  PartialSymbol nofix = all_free(a.arity());
  for (uint32_t i = 0; i < n; ++i) {
    succ[i].resize(states[i].size());
    auto& idx = index[i + 1];
    auto& next = states[i + 1];
    for (size_t p = 0; p < states[i].size(); ++p) {
      std::vector<uint32_t>& out = succ[i][p];
      a.transitions(states[i][p], nofix,
                    [&](const TupleSymbol&, const NfaState& t) {
                      auto [it, fresh] = idx.emplace(t, uint32_t(next.size()));
                      if (fresh) next.push_back(t);
                      out.push_back(it->second);
                      return true;
                    });
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    explored += next.size();
    if (stats) stats->states_explored = explored;
    if (next.empty()) {
      if (stats) stats->died_level = int64_t(i) + 1;
      return true;
    }
  }

  std::vector<std::vector<char>> alive(n + 1);
  alive[n].assign(states[n].size(), 0);
  bool any = false;
  for (size_t j = 0; j < states[n].size(); ++j)
    if (a.is_final(states[n][j])) alive[n][j] = 1, any = true;
  if (!any) return true;
  for (uint32_t i = n; i-- > 0;) {
    alive[i].assign(states[i].size(), 0);
    any = false;
    for (size_t p = 0; p < states[i].size(); ++p)
      for (uint32_t t : succ[i][p])
        if (alive[i + 1][t]) {
          alive[i][p] = 1;
          any = true;
          break;
        }
    if (!any) return true;
  }

  // Lexicographic DFS over alive branches only.
  std::vector<TupleSymbol> word(n);
  std::function<bool(uint32_t, const std::vector<uint32_t>&)> rec =
      [&](uint32_t i, const std::vector<uint32_t>& cur) -> bool {
    if (i == n) return f(word);
    std::map<TupleSymbol, std::vector<uint32_t>> branches;
    for (uint32_t p : cur)
      a.transitions(states[i][p], nofix,
                    [&](const TupleSymbol& sym, const NfaState& t) {
                      uint32_t tid = index[i + 1].find(t)->second;
                      if (alive[i + 1][tid]) branches[sym].push_back(tid);
                      return true;
                    });
    for (auto& [sym, targets] : branches) {
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      word[i] = sym;
      if (!rec(i + 1, targets)) return false;
    }
    return true;
  };
  std::vector<uint32_t> start;
  for (size_t p = 0; p < states[0].size(); ++p)
    if (alive[0][p]) start.push_back(uint32_t(p));
  return rec(0, start);
}

std::optional<std::vector<TupleSymbol>> first_accepted(const LayeredNfa& a, uint32_t n,
                                                       SearchStats* stats) {
  std::optional<std::vector<TupleSymbol>> out;
  for_each_accepted(
      a, n,
      [&](const std::vector<TupleSymbol>& w) {
        out = w;
        return false;
      },
      stats);
  return out;
}

uint64_t count_accepted(const LayeredNfa& a, uint32_t n, uint64_t cap) {
  uint64_t count = 0;
  for_each_accepted(a, n, [&](const std::vector<TupleSymbol>&) {
    ++count;
    return count < cap;
  });
  return count;
}

bool for_each_any_layer(uint32_t w, const std::function<bool(const Layer&)>& f) {
  if (w > 2) fail(errc::resource_limit, "full layer alphabet enumerable only for width <= 2");
  uint32_t bits = 2 * w * w;
  std::vector<Layer> all;
  all.reserve(size_t(1) << bits);
  for (uint64_t mask = 0; mask < (uint64_t(1) << bits); ++mask) {
    std::vector<Transition> triples;
    for (uint32_t b = 0; b < bits; ++b)
      if (mask >> b & 1) {
        uint32_t q = b / (2 * w), rem = b % (2 * w);
        triples.push_back({q, rem / w, rem % w});
      }
    all.emplace_back(std::move(triples));
  }
  std::sort(all.begin(), all.end());
  for (const Layer& l : all)
    if (!f(l)) return false;
  return true;
}

}  // namespace odec
