#include "core/relations.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <utility>

#include "core/errors.hpp"

namespace odec {
namespace {

constexpr uint64_t kStart = 0;
constexpr uint64_t kRun = 1;
constexpr uint64_t kDone = 2;

const Layer* fixed_at(const PartialSymbol& fixed, size_t i) {
  return fixed.empty() ? nullptr : fixed[i];
}

// First and second components of a set of pairs coded q1 * w2 + q2.
uint64_t proj_first(uint64_t pairs, uint32_t w2) {
  uint64_t m = 0;
  for (uint64_t t = pairs; t; t &= t - 1)
    m |= uint64_t(1) << (uint32_t(std::countr_zero(t)) / w2);
  return m;
}

uint64_t proj_second(uint64_t pairs, uint32_t w2) {
  uint64_t m = 0;
  for (uint64_t t = pairs; t; t &= t - 1)
    m |= uint64_t(1) << (uint32_t(std::countr_zero(t)) % w2);
  return m;
}

// Runs f over the layers admissible at one coordinate: the fixed layer when
// given, skipped unless it carries exactly the required domain, else every
// deterministic-complete layer with that domain.
bool coord_candidates(const Layer* fixed, uint64_t dom, uint32_t w,
                      const std::function<bool(const Layer&)>& f) {
  if (!fixed) return for_each_layer(dom, w, f);
  if (fixed->dom_mask() != dom || !fixed->fits_width(w) ||
      !fixed->deterministic_complete())
    return true;
  return f(*fixed);
}

std::vector<uint32_t> paired_widths(uint32_t w1, uint32_t w2, uint32_t w3) {
  if (uint64_t(w1) * w2 > 64)
    fail(errc::resource_limit,
         "state pairs exceed the supported 64-state bound");
  return {w1, w2, w1 * w2, w3};
}

// Inner automaton behind the binary gate relations. Coordinates: the two
// operands, their synchronized pairing, and a free carrier for the result.
// The pairing coordinate is derived from the operands, so it never multiplies
// enumeration cost. For a conjunction the final layer must collapse pairs
// with a rejecting component, so the automaton guesses the last symbol and
// moves to a terminal phase; for a disjunction the plain pairing is already
// right at every position and every state is final.
class GammaNfa final : public LayeredNfa {
 public:
  GammaNfa(BoolOp op, uint32_t w1, uint32_t w2, uint32_t w3)
      : LayeredNfa(paired_widths(w1, w2, w3)), op_(op) {}

  std::vector<NfaState> initial_states() const override {
    return {NfaState{kStart, 1, 1}};
  }

  bool is_final(const NfaState& s) const override {
    return op_ == BoolOp::or_op || s[0] != kRun;
  }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    if (s[0] == kDone) return true;
    uint32_t w1 = widths_[0], w2 = widths_[1], w3 = widths_[3];
    uint64_t pairs = s[1], dom4 = s[2];
    return coord_candidates(
        fixed_at(fixed, 0), proj_first(pairs, w2), w1, [&](const Layer& l1) {
          return coord_candidates(
              fixed_at(fixed, 1), proj_second(pairs, w2), w2,
              [&](const Layer& l2) {
                for (int last = 0; last < 2; ++last) {
                  if (last && op_ != BoolOp::and_op) break;
                  Layer l3 = last ? layer_pair_meet(l1, l2, w2, pairs)
                                  : layer_pair(l1, l2, w2, pairs);
                  if (fixed_at(fixed, 2) && !(*fixed_at(fixed, 2) == l3))
                    continue;
                  uint64_t phase = last ? kDone : kRun;
                  bool go = coord_candidates(
                      fixed_at(fixed, 3), dom4, w3, [&](const Layer& l4) {
                        return sink(
                            TupleSymbol{l1, l2, l3, l4},
                            NfaState{phase, l3.im_mask(), l4.im_mask()});
                      });
                  if (!go) return false;
                }
                return true;
              });
        });
  }

  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override {
    if (s[0] == kDone) return 0;
    double c = op_ == BoolOp::and_op ? 2 : 1;
    if (!fixed_at(fixed, 0))
      c *= layer_count(proj_first(s[1], widths_[1]), widths_[0]);
    if (!fixed_at(fixed, 1))
      c *= layer_count(proj_second(s[1], widths_[1]), widths_[1]);
    if (!fixed_at(fixed, 3)) c *= layer_count(s[2], widths_[3]);
    return std::min(c, kInfiniteCost);
  }

  double state_count() const override {
    return 3.0 * std::ldexp(1.0, int(widths_[2])) *
           std::ldexp(1.0, int(widths_[3]));
  }

 private:
  BoolOp op_;
};

// Inner automaton behind the complement relation. Coordinates: the input, a
// derived copy whose guessed last layer is negated, and a free carrier for
// the result. Only the terminal phase is final: the empty word complements
// nothing, because every empty word rejects.
class NotGammaNfa final : public LayeredNfa {
 public:
  NotGammaNfa(uint32_t w1, uint32_t w2)
      : LayeredNfa({w2, std::max(w2, 2u), w1}) {}

  std::vector<NfaState> initial_states() const override {
    return {NfaState{kStart, 1, 1}};
  }

  bool is_final(const NfaState& s) const override { return s[0] == kDone; }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    if (s[0] == kDone) return true;
    uint64_t doma = s[1], domb = s[2];
    return coord_candidates(
        fixed_at(fixed, 0), doma, widths_[0], [&](const Layer& la) {
          for (int last = 0; last < 2; ++last) {
            Layer ln = last ? layer_negate(la) : la;
            if (fixed_at(fixed, 1) && !(*fixed_at(fixed, 1) == ln)) continue;
            uint64_t phase = last ? kDone : kRun;
            bool go = coord_candidates(
                fixed_at(fixed, 2), domb, widths_[2], [&](const Layer& lb) {
                  return sink(TupleSymbol{la, ln, lb},
                              NfaState{phase, la.im_mask(), lb.im_mask()});
                });
            if (!go) return false;
          }
          return true;
        });
  }

  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override {
    if (s[0] == kDone) return 0;
    double c = 2;
    if (!fixed_at(fixed, 0)) c *= layer_count(s[1], widths_[0]);
    if (!fixed_at(fixed, 2)) c *= layer_count(s[2], widths_[2]);
    return std::min(c, kInfiniteCost);
  }

  double state_count() const override {
    return 3.0 * std::ldexp(1.0, int(widths_[0])) *
           std::ldexp(1.0, int(widths_[2]));
  }
};

std::vector<uint32_t> checked_direct_widths(std::vector<uint32_t> widths) {
  uint64_t prod = 1;
  for (uint32_t w : widths) {
    prod *= w;
    if (prod > 64)
      fail(errc::resource_limit,
           "state tuples exceed the supported 64-state bound");
  }
  return widths;
}

// Joint reachability over state tuples, coded most-significant-first. The
// last coordinate carries the would-be gate output; finality checks that
// every reachable endpoint tuple satisfies the gate's truth condition.
class DirectRelationNfa final : public LayeredNfa {
 public:
  DirectRelationNfa(BoolOp op, std::vector<uint32_t> widths)
      : LayeredNfa(checked_direct_widths(std::move(widths))), op_(op) {}

  std::vector<NfaState> initial_states() const override {
    return {NfaState{1}};
  }

  bool is_final(const NfaState& s) const override {
    std::vector<uint32_t> q(arity());
    for (uint64_t t = s[0]; t; t &= t - 1) {
      decode(uint32_t(std::countr_zero(t)), q);
      bool ok;
      switch (op_) {
        case BoolOp::and_op:
          ok = (q[2] != 0) == (q[0] != 0 && q[1] != 0);
          break;
        case BoolOp::or_op:
          ok = (q[2] != 0) == (q[0] != 0 || q[1] != 0);
          break;
        default:
          ok = (q[0] != 0) == (q[1] == 0);
          break;
      }
      if (!ok) return false;
    }
    return true;
  }

  bool transitions(const NfaState& s, const PartialSymbol& fixed,
                   const EdgeSink& sink) const override {
    uint32_t r = arity();
    std::vector<uint64_t> doms(r, 0);
    std::vector<uint32_t> q(r);
    for (uint64_t t = s[0]; t; t &= t - 1) {
      decode(uint32_t(std::countr_zero(t)), q);
      for (uint32_t i = 0; i < r; ++i) doms[i] |= uint64_t(1) << q[i];
    }
    TupleSymbol sym(r);
    std::function<bool(uint32_t)> fill = [&](uint32_t i) -> bool {
      if (i == r) {
        uint64_t nxt = 0;
        for (uint64_t t = s[0]; t; t &= t - 1) {
          decode(uint32_t(std::countr_zero(t)), q);
          for (uint32_t b = 0; b < 2; ++b) {
            uint64_t code = 0;
            for (uint32_t j = 0; j < r; ++j)
              code = code * widths_[j] + *sym[j].step(q[j], b);
            nxt |= uint64_t(1) << code;
          }
        }
        return sink(sym, NfaState{nxt});
      }
      return coord_candidates(fixed_at(fixed, i), doms[i], widths_[i],
                              [&](const Layer& l) {
                                sym[i] = l;
                                return fill(i + 1);
                              });
    };
    return fill(0);
  }

  double transition_cost(const NfaState& s,
                         const PartialSymbol& fixed) const override {
    uint32_t r = arity();
    std::vector<uint64_t> doms(r, 0);
    std::vector<uint32_t> q(r);
    for (uint64_t t = s[0]; t; t &= t - 1) {
      decode(uint32_t(std::countr_zero(t)), q);
      for (uint32_t i = 0; i < r; ++i) doms[i] |= uint64_t(1) << q[i];
    }
    double c = 1;
    for (uint32_t i = 0; i < r; ++i)
      if (!fixed_at(fixed, i)) c *= layer_count(doms[i], widths_[i]);
    return std::min(c, kInfiniteCost);
  }

  double state_count() const override {
    double prod = 1;
    for (uint32_t w : widths_) prod *= w;
    return std::ldexp(1.0, int(prod));
  }

 private:
  void decode(uint32_t code, std::vector<uint32_t>& q) const {
    for (uint32_t i = arity(); i-- > 0;) {
      q[i] = code % widths_[i];
      code /= widths_[i];
    }
  }

  BoolOp op_;
};

}  // namespace

EqualityNfa::EqualityNfa(uint32_t w1, uint32_t w2) : LayeredNfa({w1, w2}) {
  if (uint64_t(w1) * w2 > 64)
    fail(errc::resource_limit,
         "state pairs exceed the supported 64-state bound");
}

std::vector<NfaState> EqualityNfa::initial_states() const {
  return {NfaState{1}};
}

bool EqualityNfa::is_final(const NfaState& s) const {
  uint32_t w2 = widths_[1];
  for (uint64_t t = s[0]; t; t &= t - 1) {
    uint32_t p = uint32_t(std::countr_zero(t));
    if ((p / w2 == 0) != (p % w2 == 0)) return false;
  }
  return true;
}

bool EqualityNfa::transitions(const NfaState& s, const PartialSymbol& fixed,
                              const EdgeSink& sink) const {
  uint32_t w1 = widths_[0], w2 = widths_[1];
  uint64_t pairs = s[0];
  return coord_candidates(
      fixed_at(fixed, 0), proj_first(pairs, w2), w1, [&](const Layer& l1) {
        return coord_candidates(
            fixed_at(fixed, 1), proj_second(pairs, w2), w2,
            [&](const Layer& l2) {
              uint64_t nxt = 0;
              for (uint64_t t = pairs; t; t &= t - 1) {
                uint32_t p = uint32_t(std::countr_zero(t));
                for (uint32_t b = 0; b < 2; ++b)
                  nxt |= uint64_t(1)
                         << (*l1.step(p / w2, b) * w2 + *l2.step(p % w2, b));
              }
              return sink(TupleSymbol{l1, l2}, NfaState{nxt});
            });
      });
}

double EqualityNfa::transition_cost(const NfaState& s,
                                    const PartialSymbol& fixed) const {
  double c = 1;
  if (!fixed_at(fixed, 0))
    c *= layer_count(proj_first(s[0], widths_[1]), widths_[0]);
  if (!fixed_at(fixed, 1))
    c *= layer_count(proj_second(s[0], widths_[1]), widths_[1]);
  return std::min(c, kInfiniteCost);
}

double EqualityNfa::state_count() const {
  return std::ldexp(1.0, int(widths_[0] * widths_[1]));
}

IdentityNfa::IdentityNfa(uint32_t w1, uint32_t w2) : LayeredNfa({w1, w2}) {}

std::vector<NfaState> IdentityNfa::initial_states() const {
  return {NfaState{1}};
}

bool IdentityNfa::is_final(const NfaState&) const { return true; }

bool IdentityNfa::transitions(const NfaState& s, const PartialSymbol& fixed,
                              const EdgeSink& sink) const {
  uint32_t wmin = std::min(widths_[0], widths_[1]);
  const Layer* f1 = fixed_at(fixed, 0);
  const Layer* f2 = fixed_at(fixed, 1);
  return coord_candidates(f1 ? f1 : f2, s[0], wmin, [&](const Layer& l) {
    if (f1 && f2 && !(*f2 == l)) return true;
    return sink(TupleSymbol{l, l}, NfaState{l.im_mask()});
  });
}

double IdentityNfa::transition_cost(const NfaState& s,
                                    const PartialSymbol& fixed) const {
  if (fixed_at(fixed, 0) || fixed_at(fixed, 1)) return 1;
  return layer_count(s[0], std::min(widths_[0], widths_[1]));
}

double IdentityNfa::state_count() const {
  return std::ldexp(1.0, int(std::min(widths_[0], widths_[1])));
}

NfaPtr equality_automaton(uint32_t w1, uint32_t w2) {
  return std::make_shared<EqualityNfa>(w1, w2);
}

NfaPtr identity_automaton(uint32_t w1, uint32_t w2) {
  return std::make_shared<IdentityNfa>(w1, w2);
}

NfaPtr build_relation(BoolOp op, uint32_t w1, uint32_t w2, uint32_t w3) {
  if (op == BoolOp::not_op) {
    if (w3 != 0)
      fail(errc::invalid_parameters, "complement relation takes two widths");
    auto inner = std::make_shared<NotGammaNfa>(w1, w2);
    NfaPtr sel = selector_select(
        inner, {equality_automaton(std::max(w2, 2u), w1), {2, 3}});
    return map_alphabet(sel, MapMode::forward, {3, 1});
  }
  if (w3 == 0)
    fail(errc::invalid_parameters, "binary gate relation takes three widths");
  auto inner = std::make_shared<GammaNfa>(op, w1, w2, w3);
  NfaPtr sel =
      selector_select(inner, {equality_automaton(w1 * w2, w3), {3, 4}});
  return map_alphabet(sel, MapMode::forward, {1, 2, 4});
}

NfaPtr build_relation_direct(BoolOp op, uint32_t w1, uint32_t w2,
                             uint32_t w3) {
  if (op == BoolOp::not_op) {
    if (w3 != 0)
      fail(errc::invalid_parameters, "complement relation takes two widths");
    return std::make_shared<DirectRelationNfa>(op,
                                               std::vector<uint32_t>{w1, w2});
  }
  if (w3 == 0)
    fail(errc::invalid_parameters, "binary gate relation takes three widths");
  return std::make_shared<DirectRelationNfa>(
      op, std::vector<uint32_t>{w1, w2, w3});
}

NfaPtr selector_select(NfaPtr host, const Selector& sel) {
  NfaPtr embedded = map_alphabet(sel.relation, MapMode::inverse, sel.positions,
                                 host->width_bounds());
  return product_intersect(std::move(host), std::move(embedded));
}

NfaPtr equivalence_closure(NfaPtr a, uint32_t p) {
  if (a->arity() != 1)
    fail(errc::arity_mismatch, "closure needs an automaton over single words");
  if (auto* v = dynamic_cast<const ValidityNfa*>(a.get());
      v && v->width() == p)
    return a;
  uint32_t wa = a->width_bounds()[0];
  NfaPtr host = tensor(validity_automaton(p), std::move(a));
  NfaPtr sel = selector_select(host, {equality_automaton(p, wa), {1, 2}});
  return map_alphabet(sel, MapMode::forward, {1});
}

}  // namespace odec
