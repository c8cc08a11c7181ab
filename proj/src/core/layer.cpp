#include "core/layer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "core/errors.hpp"

namespace odec {

Layer::Layer(std::vector<Transition> triples) : triples_(std::move(triples)) {
  std::sort(triples_.begin(), triples_.end());
  triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
  for (const Transition& t : triples_) {
    if (t.bit > 1) fail(errc::invalid_parameters, "layer bit must be 0 or 1");
    if (t.src >= 64 || t.dst >= 64)
      fail(errc::resource_limit, "state index beyond supported width 64");
    dom_mask_ |= 1ull << t.src;
    im_mask_ |= 1ull << t.dst;
    max_index_ = std::max({max_index_, t.src, t.dst});
  }
}

bool Layer::deterministic_complete() const {
  // Sorted by (src, bit, dst): duplicates of (src, bit) are adjacent, and a
  // complete source contributes exactly the rows (src,0,·),(src,1,·).
  for (size_t i = 0; i + 1 < triples_.size(); ++i)
    if (triples_[i].src == triples_[i + 1].src &&
        triples_[i].bit == triples_[i + 1].bit)
      return false;
  uint64_t bits0 = 0, bits1 = 0;
  for (const Transition& t : triples_)
    (t.bit ? bits1 : bits0) |= 1ull << t.src;
  return bits0 == dom_mask_ && bits1 == dom_mask_;
}

std::optional<uint32_t> Layer::step(uint32_t q, uint32_t bit) const {
  Transition probe{q, bit, 0};
  auto it = std::lower_bound(triples_.begin(), triples_.end(), probe);
  if (it == triples_.end() || it->src != q || it->bit != bit) return std::nullopt;
  auto next = it + 1;
  if (next != triples_.end() && next->src == q && next->bit == bit)
    return std::nullopt;  // nondeterministic at (q, bit)
  return it->dst;
}

size_t Layer::hash() const {
  size_t seed = triples_.size();
  for (const Transition& t : triples_) {
    hash_combine(seed, t.src);
    hash_combine(seed, t.bit);
    hash_combine(seed, t.dst);
  }
  return seed;
}

Layer layer_pair(const Layer& a, const Layer& b, uint32_t w2, uint64_t src_mask) {
  std::vector<Transition> out;
  for (uint32_t p = 0; p < 64; ++p) {
    if (!(src_mask >> p & 1)) continue;
    for (uint32_t bit = 0; bit < 2; ++bit) {
      auto ta = a.step(p / w2, bit);
      auto tb = b.step(p % w2, bit);
      if (ta && tb) out.push_back({p, bit, *ta * w2 + *tb});
    }
  }
  return Layer(std::move(out));
}

Layer layer_pair_meet(const Layer& a, const Layer& b, uint32_t w2, uint64_t src_mask) {
  std::vector<Transition> out;
  for (uint32_t p = 0; p < 64; ++p) {
    if (!(src_mask >> p & 1)) continue;
    for (uint32_t bit = 0; bit < 2; ++bit) {
      auto ta = a.step(p / w2, bit);
      auto tb = b.step(p % w2, bit);
      if (ta && tb)
        out.push_back({p, bit, (*ta == 0 || *tb == 0) ? 0 : *ta * w2 + *tb});
    }
  }
  return Layer(std::move(out));
}

Layer layer_negate(const Layer& a) {
  std::vector<Transition> out;
  out.reserve(a.triples().size());
  for (const Transition& t : a.triples())
    out.push_back({t.src, t.bit, t.dst == 0 ? 1u : 0u});
  return Layer(std::move(out));
}

namespace {

bool enumerate_layers(uint64_t dom_mask, uint32_t w,
                      const std::function<bool(const Layer&)>& f) {
  std::vector<uint32_t> sources;
  for (uint32_t q = 0; q < 64; ++q)
    if (dom_mask >> q & 1) sources.push_back(q);
  const size_t slots = sources.size() * 2;  // (q,a) pairs in ascending order
  std::vector<uint32_t> target(slots, 0);
  std::vector<Transition> triples(slots);
  for (;;) {
    for (size_t s = 0; s < slots; ++s)
      triples[s] = {sources[s / 2], uint32_t(s & 1), target[s]};
    if (!f(Layer(triples))) return false;
    // Odometer with the last slot fastest: yields ascending layer order.
    size_t s = slots;
    while (s > 0) {
      --s;
      if (++target[s] < w) break;
      target[s] = 0;
      if (s == 0) return true;
    }
    if (slots == 0) return true;  // the single empty-domain layer
  }
}

}  // namespace

bool for_each_layer(uint64_t dom_mask, uint32_t w,
                    const std::function<bool(const Layer&)>& f) {
  if (w == 0 || w > 32) fail(errc::resource_limit, "layer enumeration width out of range");
  // Small alphabets recur constantly in product and tensor enumeration, so
  // they are materialized once per thread and replayed without rebuilding
  // each layer.
  if (layer_count(dom_mask, w) <= 4096) {
    thread_local std::map<std::pair<uint64_t, uint32_t>, LayerList> cache;
    auto [it, fresh] = cache.try_emplace({dom_mask, w});
    if (fresh) {
      it->second.reserve(size_t(layer_count(dom_mask, w)));
      enumerate_layers(dom_mask, w, [&](const Layer& l) {
        it->second.push_back(l);
        return true;
      });
    }
    for (const Layer& l : it->second)
      if (!f(l)) return false;
    return true;
  }
  return enumerate_layers(dom_mask, w, f);
}

double layer_count(uint64_t dom_mask, uint32_t w) {
  int sources = std::popcount(dom_mask);
  return std::pow(double(w), 2.0 * sources);
}

}  // namespace odec
