#pragma once

// Ordered binary decision diagrams represented as strings of transition
// layers. An OBDD of length n over width bound w is a sequence B_1 ... B_n of
// layers whose indices stay below w, subject to three conditions:
//   1. the domain of B_1 is exactly {0},
//   2. the image of B_i equals the domain of B_{i+1},
//   3. every layer is deterministic and complete on its domain.
// An input string is accepted when the unique run ends in a nonzero state.

#include <cstdint>
#include <string>
#include <vector>

#include "core/layer.hpp"
#include "core/truth_table.hpp"

namespace odec {

enum class BoolOp { and_op, or_op, not_op };

class Obdd {
 public:
  // Checks the three validity conditions and the width bound, throwing
  // condition1/2/3_violation with the offending 1-based layer index.
  static Obdd validate(LayerList layers, uint32_t width_bound);

  uint32_t length() const { return uint32_t(layers_.size()); }
  uint32_t width_bound() const { return width_bound_; }
  const LayerList& layers() const { return layers_; }
  const Layer& layer(uint32_t i) const { return layers_[i - 1]; }  // 1-based

  // max_i |Im(B_i)|: the number of live states on the widest level.
  uint32_t width() const;
  // |Dom(B_1)| + sum_i |Im(B_i)|.
  uint64_t size() const;

  // Run the word through the layers; bits is a string over {'0','1'} of
  // length exactly length().
  bool evaluate(const std::string& bits) const;
  // Evaluate the integer encoding of an input (MSB-first), for dense sweeps.
  bool evaluate_index(uint64_t x) const;

  bool operator==(const Obdd& o) const = default;

 private:
  Obdd(LayerList layers, uint32_t width_bound)
      : layers_(std::move(layers)), width_bound_(width_bound) {}

  LayerList layers_;
  uint32_t width_bound_;
};

// Pointwise combinations via synchronized pairing. The result is generally
// not canonical. AND/OR pair every layer; AND additionally collapses final
// targets with a zero component, while for OR plain pairing already accepts
// exactly the union. NOT rewrites only the final layer.
Obdd apply(BoolOp op, const Obdd& a, const Obdd& b);
Obdd apply(BoolOp op, const Obdd& a);  // not_op only

// Minimum-width normal form: backward partition refinement merges states with
// equal residual languages, then a forward pass relabels every level, ordering
// internal states by the lexicographically first string reaching them. On the
// final level label 0 is the rejecting class and label 1 the accepting class,
// which keeps acceptance-by-nonzero intact. Equal languages give bit-identical
// results; the width bound shrinks to the smallest usable one.
Obdd canonicalize(const Obdd& d);

// Language equality, decided by comparing canonical forms.
bool equivalent(const Obdd& a, const Obdd& b);

// Canonical OBDD of the i-th dictator function x -> x_i, 1-based, width 2.
Obdd hypercube(uint32_t n, uint32_t i);

// 1-based positions the function actually depends on: after canonicalization
// a level carries an essential variable iff some state has diverging 0/1
// successors there.
std::vector<uint32_t> junta_variables(const Obdd& d);

// Truth-table conversions, capped at n <= 16. obdd_from_table returns the
// canonical OBDD of the function.
Obdd obdd_from_table(const TruthTable& t);
TruthTable table_from_obdd(const Obdd& d);

}  // namespace odec
