#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/automata.hpp"
#include "core/circuit.hpp"
#include "core/obdd.hpp"

namespace odec {

struct SolveOptions {
  // Ceiling on the effective reconfiguration bound; decompositions whose
  // implied bound exceeds it abort instead of thrashing.
  uint32_t max_width = 64;
  // Require the witness encodings themselves, not just their functions, to be
  // accepted by the class automata.
  bool syntactic_class = false;
  // Candidate cap for bounded-width scans.
  uint64_t scan_limit = 1000000;
};

struct SolveStats {
  uint64_t states_explored = 0;
  uint32_t levels = 0;
  int64_t died_level = -1;  // first level with an empty frontier, -1 if none
  uint64_t scanned_candidates = 0;
};

// Every returned witness is re-checked; a well-formed solver never produces a
// report that fails, so ok() doubles as an internal-consistency assertion.
struct VerificationReport {
  bool pointwise_ok = false;
  bool canonical_ok = false;
  bool widths_ok = false;
  bool class_ok = false;
  uint64_t inputs_checked = 0;  // 0 when the pointwise sweep is skipped
  bool ok() const {
    return pointwise_ok && canonical_ok && widths_ok && class_ok;
  }
};

struct Witness {
  std::vector<Obdd> factors;
  // Canonical function at every gate, inputs included; entry i-1 belongs to
  // gate i.
  std::vector<Obdd> per_gate;
  uint32_t reconfig_width = 0;  // max canonical width over per_gate
  VerificationReport verified;
};

struct ProblemInstance {
  Obdd target;
  Circuit circuit;
  uint32_t factor_width = 1;
  // Present for reconfiguration, absent for plain decomposition.
  std::optional<uint32_t> reconfig_bound;
  // Empty: unconstrained (validity only). One entry: replicated across all
  // factors. Otherwise one automaton per circuit input.
  std::vector<NfaPtr> class_automata;
};

// All m-tuples of equal-length valid width-<=w OBDDs whose gate functions are
// consistent with c: each internal gate's coordinate computes the gate's
// operation applied to its arguments' coordinates.
NfaPtr con_language(uint32_t w, const Circuit& c);

// Projection of the consistent tuples whose output coordinate is equivalent
// to d onto the input-gate coordinates: the width-w solution language.
NfaPtr sol_language(uint32_t w, const Obdd& d, const Circuit& c);

// sol_language intersected with the per-factor class constraints, all
// embedded into width w (the instance bound, or the effective decomposition
// bound when absent).
NfaPtr sol_constrained(const ProblemInstance& inst,
                       const SolveOptions& opts = {});

// Factor tuple of width <= p whose combination under the circuit equals the
// target, with reconfiguration width <= the bound; absent if none exists.
// Requires factor_width < reconfig_bound. The witness is the
// lexicographically least accepted word under the layer order.
std::optional<Witness> decide_reconfiguration(const ProblemInstance& inst,
                                              const SolveOptions& opts = {},
                                              SolveStats* stats = nullptr);

// Same question with the reconfiguration bound dropped; complete because the
// width of every gate function is at most factor_width^k. Aborts with a
// resource error when that implied bound exceeds opts.max_width.
std::optional<Witness> decide_decomposition(const ProblemInstance& inst,
                                            const SolveOptions& opts = {},
                                            SolveStats* stats = nullptr);

struct JuntaResult {
  Circuit circuit;
  Witness witness;
};

// First circuit in canonical enumeration order (k inputs, at most m_max
// gates) admitting a decomposition of the target, with its witness.
std::optional<JuntaResult> decide_generalized_junta(
    const Obdd& target, uint32_t k, uint32_t p, uint32_t m_max,
    const std::vector<NfaPtr>& classes = {}, const SolveOptions& opts = {},
    SolveStats* stats = nullptr);

// Factors of width strictly below the target's canonical width w whose
// conjunction has the target's language, via the k-input AND tree at factor
// width w-1. Requires w >= 2 and k >= 2.
std::optional<std::vector<Obdd>> factorize_obdd(const Obdd& d, uint32_t k,
                                                const SolveOptions& opts = {},
                                                SolveStats* stats = nullptr);

}  // namespace odec
