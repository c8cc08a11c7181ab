#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/obdd.hpp"
#include "core/truth_table.hpp"

namespace odec {

enum class GateKind : uint8_t { input, gnot, gand, gor };

// One gate. Input gates carry the 1-based variable index in a; the other
// kinds carry 1-based argument gate positions in a (and b when binary).
struct Gate {
  GateKind kind = GateKind::input;
  uint32_t a = 0;
  uint32_t b = 0;

  bool operator==(const Gate&) const = default;
};

Gate gate_input(uint32_t var);
Gate gate_not(uint32_t j);
Gate gate_and(uint32_t j, uint32_t l);
Gate gate_or(uint32_t j, uint32_t l);

// Fan-in-2 circuit over inputs x_1..x_k. Structure: every argument points
// strictly backward, every variable appears as an input gate exactly once,
// and only the last gate feeds no other gate, so the output is unique.
class Circuit {
 public:
  // Checks the structural conditions and precomputes depths and input
  // positions. The gate list must be nonempty and k >= 1.
  static Circuit validate(std::vector<Gate> gates, uint32_t k);

  uint32_t inputs() const { return k_; }
  uint32_t size() const { return uint32_t(gates_.size()); }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(uint32_t i) const { return gates_[i - 1]; }  // 1-based

  // Input gates sit at depth 0, every other gate one above its deepest
  // argument; the unqualified depth is the output gate's.
  uint32_t depth(uint32_t i) const { return depth_[i - 1]; }  // 1-based
  uint32_t depth() const { return depth_.back(); }

  // Entry v-1 holds the 1-based gate position feeding variable x_v.
  const std::vector<uint32_t>& input_positions() const { return input_pos_; }

  bool operator==(const Circuit&) const = default;

 private:
  Circuit() = default;

  std::vector<Gate> gates_;
  uint32_t k_ = 0;
  std::vector<uint32_t> depth_;
  std::vector<uint32_t> input_pos_;
};

// Function computed at the output gate, evaluated forward on all 2^k inputs.
// Capped at k <= 16.
TruthTable circuit_table(const Circuit& c);

// Canonical OBDD computed at every gate when variable x_v is fed the factor
// inputs[v-1]; the factors must share one length. The maximum width over the
// results is the reconfiguration width of the factor tuple.
std::vector<Obdd> gate_functions(const Circuit& c,
                                 const std::vector<Obdd>& inputs);

uint32_t reconfiguration_width(const Circuit& c,
                               const std::vector<Obdd>& inputs);

// Every valid circuit with k inputs and at most m_max gates, exactly once up
// to the canonical gate order: inputs x_1..x_k first, internal gates in
// nondecreasing depth, binary arguments ordered a <= b. The stream is
// deterministic: sizes ascend, choices within one size are lexicographic
// with NOT before AND before OR. Return false from f to stop early; the
// return value reports whether the stream ran to completion. With
// dedup_tables set, circuits whose output table repeats an earlier one are
// skipped (k <= 6).
bool for_each_circuit(uint32_t k, uint32_t m_max,
                      const std::function<bool(const Circuit&)>& f,
                      bool dedup_tables = false);

}  // namespace odec
