#include "core/circuit.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "core/errors.hpp"

namespace odec {

Gate gate_input(uint32_t var) { return {GateKind::input, var, 0}; }
Gate gate_not(uint32_t j) { return {GateKind::gnot, j, 0}; }
Gate gate_and(uint32_t j, uint32_t l) { return {GateKind::gand, j, l}; }
Gate gate_or(uint32_t j, uint32_t l) { return {GateKind::gor, j, l}; }

Circuit Circuit::validate(std::vector<Gate> gates, uint32_t k) {
  if (gates.empty()) fail(errc::invalid_parameters, "empty gate list");
  if (k < 1) fail(errc::invalid_parameters, "a circuit needs an input");
  uint32_t m = uint32_t(gates.size());

  for (uint32_t i = 1; i <= m; ++i) {
    const Gate& g = gates[i - 1];
    if (g.kind == GateKind::input) continue;
    uint32_t nargs = g.kind == GateKind::gnot ? 1 : 2;
    for (uint32_t t = 0; t < nargs; ++t) {
      uint32_t j = t == 0 ? g.a : g.b;
      if (j < 1)
        fail(errc::index_out_of_range, "gate argument index 0", long(i));
      if (j >= i)
        fail(errc::forward_reference, "argument does not point backward",
             long(i));
    }
  }

  std::vector<uint32_t> pos(k, 0);
  for (uint32_t i = 1; i <= m; ++i) {
    const Gate& g = gates[i - 1];
    if (g.kind != GateKind::input) continue;
    if (g.a < 1 || g.a > k)
      fail(errc::index_out_of_range, "variable index out of range", long(i));
    if (pos[g.a - 1])
      fail(errc::duplicate_variable, "variable fed by two input gates",
           long(i));
    pos[g.a - 1] = i;
  }
  for (uint32_t v = 1; v <= k; ++v)
    if (!pos[v - 1])
      fail(errc::missing_variable, "variable has no input gate", long(v));

  std::vector<char> used(m, 0);
  for (const Gate& g : gates) {
    if (g.kind == GateKind::input) continue;
    used[g.a - 1] = 1;
    if (g.kind != GateKind::gnot) used[g.b - 1] = 1;
  }
  for (uint32_t i = 1; i < m; ++i)
    if (!used[i - 1])
      fail(errc::multiple_outputs, "non-final gate feeds nothing", long(i));

  std::vector<uint32_t> depth(m, 0);
  for (uint32_t i = 1; i <= m; ++i) {
    const Gate& g = gates[i - 1];
    if (g.kind == GateKind::input) continue;
    uint32_t d = depth[g.a - 1];
    if (g.kind != GateKind::gnot) d = std::max(d, depth[g.b - 1]);
    depth[i - 1] = d + 1;
  }

  Circuit c;
  c.gates_ = std::move(gates);
  c.k_ = k;
  c.depth_ = std::move(depth);
  c.input_pos_ = std::move(pos);
  return c;
}

TruthTable circuit_table(const Circuit& c) {
  uint32_t k = c.inputs();
  if (k > 16) fail(errc::arity_too_large, "truth table capped at 16 inputs");
  std::vector<uint8_t> val(c.size());
  return TruthTable::from_function(k, [&](uint64_t x) {
    for (uint32_t i = 0; i < c.size(); ++i) {
      const Gate& g = c.gates()[i];
      switch (g.kind) {
        case GateKind::input:
          val[i] = uint8_t((x >> (k - g.a)) & 1);
          break;
        case GateKind::gnot:
          val[i] = val[g.a - 1] ^ 1;
          break;
        case GateKind::gand:
          val[i] = val[g.a - 1] & val[g.b - 1];
          break;
        case GateKind::gor:
          val[i] = val[g.a - 1] | val[g.b - 1];
          break;
      }
    }
    return val[c.size() - 1] != 0;
  });
}

std::vector<Obdd> gate_functions(const Circuit& c,
                                 const std::vector<Obdd>& inputs) {
  if (inputs.size() != c.inputs())
    fail(errc::arity_mismatch, "factor count differs from circuit inputs");
  for (const Obdd& d : inputs)
    if (d.length() != inputs[0].length())
      fail(errc::length_mismatch, "factors must share one length");
  std::vector<Obdd> out;
  out.reserve(c.size());
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::input:
        out.push_back(canonicalize(inputs[g.a - 1]));
        break;
      case GateKind::gnot:
        out.push_back(canonicalize(apply(BoolOp::not_op, out[g.a - 1])));
        break;
      case GateKind::gand:
        out.push_back(
            canonicalize(apply(BoolOp::and_op, out[g.a - 1], out[g.b - 1])));
        break;
      case GateKind::gor:
        out.push_back(
            canonicalize(apply(BoolOp::or_op, out[g.a - 1], out[g.b - 1])));
        break;
    }
  }
  return out;
}

uint32_t reconfiguration_width(const Circuit& c,
                               const std::vector<Obdd>& inputs) {
  uint32_t w = 0;
  for (const Obdd& d : gate_functions(c, inputs)) w = std::max(w, d.width());
  return w;
}

namespace {

// Depth-first construction of internal gates k+1..m in canonical order.
// unused counts placed gates nothing references yet; each new gate can
// absorb at most two of them while adding itself, so a partial prefix is
// viable only while unused <= (slots left) + 1.
struct CircuitStream {
  uint32_t k = 0;
  uint32_t m = 0;
  const std::function<bool(const Circuit&)>* sink = nullptr;

  std::vector<Gate> gates;
  std::vector<uint32_t> depth;
  std::vector<char> used;
  uint32_t unused = 0;

  bool run(uint32_t i) {
    if (i > m) {
      if (unused != 1) return true;
      return (*sink)(Circuit::validate(gates, k));
    }
    uint32_t dmin = depth[i - 2];  // inputs sit below any internal gate
    for (uint32_t j = 1; j < i; ++j) {
      uint32_t d = depth[j - 1] + 1;
      if (d >= dmin && !place(i, gate_not(j), d)) return false;
    }
    for (int kind = 0; kind < 2; ++kind)
      for (uint32_t j = 1; j < i; ++j)
        for (uint32_t l = j; l < i; ++l) {
          uint32_t d = std::max(depth[j - 1], depth[l - 1]) + 1;
          if (d < dmin) continue;
          Gate g = kind == 0 ? gate_and(j, l) : gate_or(j, l);
          if (!place(i, g, d)) return false;
        }
    return true;
  }

  bool place(uint32_t i, Gate g, uint32_t d) {
    bool binary = g.kind != GateKind::gnot;
    char ua = used[g.a - 1];
    char ub = binary ? used[g.b - 1] : 1;
    uint32_t covered = 0;
    if (!used[g.a - 1]) {
      used[g.a - 1] = 1;
      ++covered;
    }
    if (binary && !used[g.b - 1]) {
      used[g.b - 1] = 1;
      ++covered;
    }
    gates.push_back(g);
    depth.push_back(d);
    used.push_back(0);
    unused = unused + 1 - covered;

    bool go = unused > m - i + 1 || run(i + 1);

    unused = unused + covered - 1;
    used.pop_back();
    depth.pop_back();
    gates.pop_back();
    if (binary) used[g.b - 1] = ub;
    used[g.a - 1] = ua;
    return go;
  }
};

}  // namespace

bool for_each_circuit(uint32_t k, uint32_t m_max,
                      const std::function<bool(const Circuit&)>& f,
                      bool dedup_tables) {
  if (k < 1 || m_max < k)
    fail(errc::invalid_parameters, "need m_max >= k >= 1");
  if (dedup_tables && k > 6)
    fail(errc::invalid_parameters, "table deduplication capped at 6 inputs");

  std::unordered_set<uint64_t> seen;
  std::function<bool(const Circuit&)> emit = [&](const Circuit& c) {
    if (dedup_tables) {
      TruthTable t = circuit_table(c);
      uint64_t key = 0;
      for (uint64_t x = 0; x < t.entries(); ++x)
        key |= uint64_t(t.at(x)) << x;
      if (!seen.insert(key).second) return true;
    }
    return f(c);
  };

  for (uint32_t m = k; m <= m_max; ++m) {
    CircuitStream s;
    s.k = k;
    s.m = m;
    s.sink = &emit;
    for (uint32_t v = 1; v <= k; ++v) s.gates.push_back(gate_input(v));
    s.depth.assign(k, 0);
    s.used.assign(k, 0);
    s.unused = k;
    if (m == k) {
      if (s.unused == 1 && !emit(Circuit::validate(s.gates, k))) return false;
      continue;
    }
    if (s.unused > m - k + 1) continue;
    if (!s.run(k + 1)) return false;
  }
  return true;
}

}  // namespace odec
