#include "core/obdd.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_map>

#include "core/errors.hpp"

namespace odec {

Obdd Obdd::validate(LayerList layers, uint32_t width_bound) {
  if (layers.empty()) fail(errc::invalid_parameters, "an OBDD needs at least one layer");
  if (width_bound == 0) fail(errc::invalid_parameters, "width bound must be positive");
  for (size_t i = 0; i < layers.size(); ++i) {
    if (!layers[i].fits_width(width_bound))
      fail(errc::invalid_parameters,
           "layer " + std::to_string(i + 1) + " uses a state index >= width bound",
           long(i + 1));
    if (layers[i].empty())
      fail(errc::condition3_violation,
           "layer " + std::to_string(i + 1) + " is empty", long(i + 1));
  }
  if (layers[0].dom_mask() != 1)
    fail(errc::condition1_violation, "domain of layer 1 must be {0}", 1);
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i > 0 && layers[i].dom_mask() != layers[i - 1].im_mask())
      fail(errc::condition2_violation,
           "domain of layer " + std::to_string(i + 1) +
               " differs from the previous image",
           long(i + 1));
    if (!layers[i].deterministic_complete())
      fail(errc::condition3_violation,
           "layer " + std::to_string(i + 1) +
               " is not deterministic-complete on its domain",
           long(i + 1));
  }
  return Obdd(std::move(layers), width_bound);
}

uint32_t Obdd::width() const {
  int w = 0;
  for (const Layer& l : layers_) w = std::max(w, std::popcount(l.im_mask()));
  return uint32_t(w);
}

uint64_t Obdd::size() const {
  uint64_t s = std::popcount(layers_[0].dom_mask());
  for (const Layer& l : layers_) s += std::popcount(l.im_mask());
  return s;
}

bool Obdd::evaluate(const std::string& bits) const {
  if (bits.size() != layers_.size())
    fail(errc::length_mismatch, "input has " + std::to_string(bits.size()) +
                                    " bits, OBDD has length " +
                                    std::to_string(layers_.size()));
  uint32_t q = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      fail(errc::invalid_parameters, "input must be a string over {0,1}");
    q = *layers_[i].step(q, bits[i] == '1');
  }
  return q != 0;
}

bool Obdd::evaluate_index(uint64_t x) const {
  uint32_t q = 0;
  uint32_t n = length();
  for (uint32_t i = 0; i < n; ++i) q = *layers_[i].step(q, (x >> (n - 1 - i)) & 1);
  return q != 0;
}

Obdd apply(BoolOp op, const Obdd& a, const Obdd& b) {
  if (op == BoolOp::not_op) fail(errc::invalid_parameters, "negation is unary");
  if (a.length() != b.length())
    fail(errc::length_mismatch, "operands must have equal length");
  uint32_t w2 = b.width_bound();
  if (double(a.width_bound()) * double(w2) > 64.0)
    fail(errc::resource_limit, "pairing exceeds the supported 64-state bound");
  LayerList out;
  out.reserve(a.length());
  uint64_t cur = 1;  // the joint start pair (0,0)
  for (uint32_t i = 1; i <= a.length(); ++i) {
    bool final_layer = i == a.length();
    if (op == BoolOp::and_op && final_layer)
      out.push_back(layer_pair_meet(a.layer(i), b.layer(i), w2, cur));
    else
      out.push_back(layer_pair(a.layer(i), b.layer(i), w2, cur));
    cur = out.back().im_mask();
  }
  return Obdd::validate(std::move(out), a.width_bound() * w2);
}

Obdd apply(BoolOp op, const Obdd& a) {
  if (op != BoolOp::not_op) fail(errc::invalid_parameters, "binary operation needs two operands");
  LayerList out(a.layers());
  out.back() = layer_negate(out.back());
  return Obdd::validate(std::move(out), std::max(a.width_bound(), 2u));
}

namespace {

std::vector<uint32_t> mask_states(uint64_t mask) {
  std::vector<uint32_t> v;
  for (uint32_t q = 0; q < 64; ++q)
    if (mask >> q & 1) v.push_back(q);
  return v;
}

}  // namespace

Obdd canonicalize(const Obdd& d) {
  const uint32_t n = d.length();
  // cls[i][q]: residual-equivalence class of state q on level i, i in [0, n].
  std::vector<std::unordered_map<uint32_t, uint32_t>> cls(n + 1);
  for (uint32_t q : mask_states(d.layer(n).im_mask())) cls[n][q] = q != 0 ? 1 : 0;
  for (uint32_t i = n - 1; i >= 1; --i) {
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> sig_to_class;
    for (uint32_t q : mask_states(d.layer(i).im_mask())) {
      std::pair<uint32_t, uint32_t> sig{cls[i + 1][*d.layer(i + 1).step(q, 0)],
                                        cls[i + 1][*d.layer(i + 1).step(q, 1)]};
      auto it = sig_to_class.try_emplace(sig, uint32_t(sig_to_class.size())).first;
      cls[i][q] = it->second;
    }
  }
  cls[0][0] = 0;

  // Forward relabeling. label[i]: class id -> canonical state index; rep[i]:
  // class id -> a concrete member used to step through the original layers.
  std::vector<std::unordered_map<uint32_t, uint32_t>> label(n + 1), rep(n + 1);
  label[0][0] = 0;
  rep[0][0] = 0;
  LayerList out(n);
  for (uint32_t i = 1; i <= n; ++i) {
    // Previous-level canonical states in label order.
    std::vector<std::pair<uint32_t, uint32_t>> prev;  // (label, class id)
    for (auto [c, lab] : label[i - 1]) prev.push_back({lab, c});
    std::sort(prev.begin(), prev.end());
    std::vector<Transition> triples;
    if (i < n) {
      // First touch in (previous label, bit) order realizes the
      // lexicographically-first-reaching-string ordering.
      for (auto [lab, c] : prev)
        for (uint32_t bit = 0; bit < 2; ++bit) {
          uint32_t succ = *d.layer(i).step(rep[i - 1][c], bit);
          uint32_t sc = cls[i][succ];
          auto [it, fresh] = label[i].try_emplace(sc, uint32_t(label[i].size()));
          if (fresh) rep[i][sc] = succ;
          triples.push_back({lab, bit, it->second});
        }
    } else {
      // Final level: the rejecting class gets 0, the accepting class 1.
      for (auto [lab, c] : prev)
        for (uint32_t bit = 0; bit < 2; ++bit) {
          uint32_t succ = *d.layer(i).step(rep[i - 1][c], bit);
          uint32_t sc = cls[i][succ];  // already 0 = reject, 1 = accept
          auto [it, fresh] = label[i].try_emplace(sc, sc);
          if (fresh) rep[i][sc] = succ;
          triples.push_back({lab, bit, sc});
        }
    }
    out[i - 1] = Layer(std::move(triples));
  }
  uint32_t bound = 1;
  for (const Layer& l : out) bound = std::max(bound, l.max_index() + 1);
  return Obdd::validate(std::move(out), bound);
}

bool equivalent(const Obdd& a, const Obdd& b) {
  if (a.length() != b.length())
    fail(errc::length_mismatch, "cannot compare OBDDs of different length");
  return canonicalize(a) == canonicalize(b);
}

Obdd hypercube(uint32_t n, uint32_t i) {
  if (n == 0) fail(errc::invalid_parameters, "length must be positive");
  if (i < 1 || i > n)
    fail(errc::index_out_of_range, "variable index must be in [1, n]");
  LayerList out;
  for (uint32_t level = 1; level <= n; ++level) {
    if (level < i)
      out.push_back(Layer({{0, 0, 0}, {0, 1, 0}}));
    else if (level == i)
      out.push_back(Layer({{0, 0, 0}, {0, 1, 1}}));
    else
      out.push_back(Layer({{0, 0, 0}, {0, 1, 0}, {1, 0, 1}, {1, 1, 1}}));
  }
  return Obdd::validate(std::move(out), 2);
}

std::vector<uint32_t> junta_variables(const Obdd& d) {
  Obdd c = canonicalize(d);
  std::vector<uint32_t> vars;
  for (uint32_t i = 1; i <= c.length(); ++i)
    for (uint32_t q : mask_states(c.layer(i).dom_mask()))
      if (*c.layer(i).step(q, 0) != *c.layer(i).step(q, 1)) {
        vars.push_back(i);
        break;
      }
  return vars;
}

Obdd obdd_from_table(const TruthTable& t) {
  const uint32_t n = t.n();
  if (n > 16) fail(errc::resource_limit, "table conversion capped at n <= 16");
  // Residual of prefix x at level i is the slice of 2^(n-i) entries starting
  // at x * 2^(n-i). Deduplicating slices level by level yields the canonical
  // OBDD directly; first-occurrence order over ascending prefixes is exactly
  // the lexicographic-first-reaching-string order.
  std::vector<uint32_t> prev_id{0};  // prefix -> state, level i-1
  LayerList out;
  for (uint32_t i = 1; i <= n; ++i) {
    const uint64_t count = uint64_t(1) << i;
    const uint64_t slice = uint64_t(1) << (n - i);
    std::map<std::vector<uint8_t>, uint32_t> ids;
    std::vector<uint32_t> id(count);
    std::vector<Transition> triples;
    std::vector<uint8_t> key(slice);
    for (uint64_t x = 0; x < count; ++x) {
      for (uint64_t j = 0; j < slice; ++j) key[j] = t.at(x * slice + j) ? 1 : 0;
      uint32_t fresh;
      if (i < n) {
        fresh = uint32_t(ids.size());
      } else {
        fresh = key[0];  // final level: reject -> 0, accept -> 1
      }
      id[x] = ids.try_emplace(key, fresh).first->second;
      uint32_t src = prev_id[x >> 1];
      triples.push_back({src, uint32_t(x & 1), id[x]});
    }
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    out.push_back(Layer(std::move(triples)));
    prev_id = std::move(id);
  }
  uint32_t bound = 1;
  for (const Layer& l : out) bound = std::max(bound, l.max_index() + 1);
  return Obdd::validate(std::move(out), bound);
}

TruthTable table_from_obdd(const Obdd& d) {
  if (d.length() > 16) fail(errc::resource_limit, "table conversion capped at n <= 16");
  return TruthTable::from_function(
      d.length(), [&](uint64_t x) { return d.evaluate_index(x); });
}

}  // namespace odec
