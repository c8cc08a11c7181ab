#pragma once

// Brute-force ground truth at desk scale: exhaustive OBDD enumeration, an
// exhaustive decomposition search that shares no search machinery with the
// solvers, a residual-counting width computation, and a sweep driver that
// compares solver answers against the brute-force answers instance by
// instance.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/obdd.hpp"
#include "core/reconfig.hpp"
#include "core/truth_table.hpp"

namespace odec {

// Limits for exhaustive agreement sweeps. Circuits range over the canonical
// enumeration with up to k_max inputs and m_max gates.
struct SweepConfig {
  uint32_t n_max = 2;
  uint32_t p_max = 2;
  uint32_t w_max = 4;
  uint32_t k_max = 2;
  uint32_t m_max = 4;
};

// key = value lines, '#' starts a comment. Keys: n_max, p_max, w_max, k_max,
// m_max; omitted keys keep their defaults, unknown or repeated keys are
// parse errors.
SweepConfig parse_sweep_config(const std::string& text,
                               const std::string& source = "config");

// Every valid OBDD of width bound w and length n exactly once, in ascending
// lexicographic layer order. Guarded to w <= 3 and n <= 4.
std::vector<Obdd> enumerate_obdds(uint32_t w, uint32_t n);

// Exhaustive search over factor tuples drawn from enumerate_obdds(p, n):
// filters by class membership (same closure semantics as the solvers),
// compares the composed circuit output against the target on every input,
// and, when the instance carries a reconfiguration bound, checks the width
// profile via gate_functions. Returns the first witness in tuple order.
std::optional<Witness> brute_force_solve(const ProblemInstance& inst,
                                         const SolveOptions& opts = {});

// levels[i-1] counts the distinct residual functions after fixing the first
// i bits; max is the canonical width of any OBDD computing f.
struct WidthProfile {
  std::vector<uint32_t> levels;
  uint32_t max = 0;
};

WidthProfile min_width_oracle(const TruthTable& f);

struct SweepReport {
  uint64_t instances = 0;
  uint64_t mismatches = 0;
};

// Runs the solvers against the brute-force answer over the full grid
// {n <= n_max} x {all targets} x {canonical circuits} x {p <= p_max} x
// {no bound, bounds p < w <= w_max}, one line per instance:
//   <fnv1a-64 hash>,<oracle answer>,<solver answer>,<match flag>
// An instance matches when the answers agree and a YES witness verifies.
SweepReport run_sweep(const SweepConfig& cfg, std::ostream& out);

}  // namespace odec
