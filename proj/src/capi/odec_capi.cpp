// C binding over the core library. Every handle wraps one C++ value; all
// exceptions are converted to malloc'd error strings at this boundary.

#include "odec.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core/automata.hpp"
#include "core/circuit.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/obdd.hpp"
#include "core/oracle.hpp"
#include "core/reconfig.hpp"
#include "core/truth_table.hpp"

struct odec_obdd_t {
  odec::Obdd v;
};
struct odec_circuit_t {
  odec::Circuit v;
};
struct odec_automaton_t {
  odec::NfaPtr v;
};
struct odec_witness_t {
  odec::Witness v;
  uint32_t n = 0;  // target length, needed for the text form
};
struct odec_options_t {
  odec::SolveOptions v;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** errptr, const std::string& msg) {
  if (errptr != nullptr) *errptr = dup_string(msg);
}

// Null checks live here so misuse surfaces as an error string instead of a
// fault inside the library.
bool require(bool cond, const char* what, char** errptr) {
  if (!cond) set_error(errptr, std::string("invalid argument: ") + what);
  return cond;
}

std::vector<odec::NfaPtr> collect_classes(
    const odec_automaton_t* const* classes, size_t n_classes) {
  std::vector<odec::NfaPtr> out;
  out.reserve(n_classes);
  for (size_t i = 0; i < n_classes; ++i)
    out.push_back(classes[i] == nullptr ? odec::NfaPtr() : classes[i]->v);
  return out;
}

odec::SolveOptions effective_options(const odec_options_t* options) {
  return options == nullptr ? odec::SolveOptions{} : options->v;
}

void store_stats(odec_stats_t* stats, const odec::SolveStats& s) {
  if (stats == nullptr) return;
  stats->states_explored = s.states_explored;
  stats->levels = s.levels;
  stats->died_level = s.died_level;
  stats->scanned_candidates = s.scanned_candidates;
}

odec_witness_t* wrap_witness(odec::Witness w, uint32_t n) {
  return new odec_witness_t{std::move(w), n};
}

}  // namespace

extern "C" {

const char* odec_version(void) { return "0.1.0"; }

void odec_free(void* p) { std::free(p); }

/* ---- OBDDs ---- */

odec_obdd_t* odec_obdd_parse(const char* text, const char* source,
                             char** errptr) {
  if (!require(text != nullptr, "text is null", errptr)) return nullptr;
  try {
    return new odec_obdd_t{
        odec::io::parse_obdd(text, source == nullptr ? "input" : source)};
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

char* odec_obdd_format(const odec_obdd_t* d) {
  return dup_string(odec::io::format_obdd(d->v));
}

char* odec_obdd_dot(const odec_obdd_t* d) {
  return dup_string(odec::io::obdd_dot(d->v));
}

void odec_obdd_destroy(odec_obdd_t* d) { delete d; }

odec_obdd_t* odec_obdd_from_table(uint32_t n, const uint8_t* bits,
                                  char** errptr) {
  if (!require(bits != nullptr, "bits is null", errptr)) return nullptr;
  try {
    odec::TruthTable t = odec::TruthTable::from_function(
        n, [bits](uint64_t x) { return bits[x] != 0; });
    return new odec_obdd_t{odec::obdd_from_table(t)};
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

uint32_t odec_obdd_length(const odec_obdd_t* d) { return d->v.length(); }
uint32_t odec_obdd_width(const odec_obdd_t* d) { return d->v.width(); }
uint32_t odec_obdd_width_bound(const odec_obdd_t* d) {
  return d->v.width_bound();
}
uint64_t odec_obdd_size(const odec_obdd_t* d) { return d->v.size(); }

int odec_obdd_evaluate(const odec_obdd_t* d, const char* input, int* out,
                       char** errptr) {
  if (!require(d != nullptr && input != nullptr && out != nullptr,
               "null argument", errptr))
    return -1;
  try {
    *out = d->v.evaluate(input) ? 1 : 0;
    return 0;
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return -1;
  }
}

odec_obdd_t* odec_obdd_canonicalize(const odec_obdd_t* d, char** errptr) {
  if (!require(d != nullptr, "null argument", errptr)) return nullptr;
  try {
    return new odec_obdd_t{odec::canonicalize(d->v)};
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

int odec_obdd_equivalent(const odec_obdd_t* a, const odec_obdd_t* b,
                         char** errptr) {
  if (!require(a != nullptr && b != nullptr, "null argument", errptr))
    return -1;
  try {
    return odec::equivalent(a->v, b->v) ? 1 : 0;
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return -1;
  }
}

odec_obdd_t* odec_obdd_apply(int op, const odec_obdd_t* a,
                             const odec_obdd_t* b, char** errptr) {
  if (!require(a != nullptr, "null argument", errptr)) return nullptr;
  try {
    switch (op) {
      case 0:
      case 1:
        if (!require(b != nullptr, "binary operation needs two operands",
                     errptr))
          return nullptr;
        return new odec_obdd_t{odec::apply(
            op == 0 ? odec::BoolOp::and_op : odec::BoolOp::or_op, a->v, b->v)};
      case 2:
        if (!require(b == nullptr, "negation takes one operand", errptr))
          return nullptr;
        return new odec_obdd_t{odec::apply(odec::BoolOp::not_op, a->v)};
      default:
        set_error(errptr, "invalid argument: unknown operation code");
        return nullptr;
    }
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

int odec_obdd_junta(const odec_obdd_t* d, uint32_t** out_vars,
                    size_t* out_count, char** errptr) {
  if (!require(d != nullptr && out_vars != nullptr && out_count != nullptr,
               "null argument", errptr))
    return -1;
  try {
    std::vector<uint32_t> vars = odec::junta_variables(d->v);
    *out_count = vars.size();
    if (vars.empty()) {
      *out_vars = nullptr;
    } else {
      *out_vars =
          static_cast<uint32_t*>(std::malloc(vars.size() * sizeof(uint32_t)));
      std::memcpy(*out_vars, vars.data(), vars.size() * sizeof(uint32_t));
    }
    return 0;
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return -1;
  }
}

/* ---- Circuits ---- */

odec_circuit_t* odec_circuit_parse(const char* text, const char* source,
                                   char** errptr) {
  if (!require(text != nullptr, "text is null", errptr)) return nullptr;
  try {
    return new odec_circuit_t{
        odec::io::parse_circuit(text, source == nullptr ? "input" : source)};
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

char* odec_circuit_format(const odec_circuit_t* c) {
  return dup_string(odec::io::format_circuit(c->v));
}

void odec_circuit_destroy(odec_circuit_t* c) { delete c; }

uint32_t odec_circuit_inputs(const odec_circuit_t* c) { return c->v.inputs(); }
uint32_t odec_circuit_size(const odec_circuit_t* c) { return c->v.size(); }
uint32_t odec_circuit_depth(const odec_circuit_t* c) { return c->v.depth(); }

/* ---- Class automata ---- */

odec_automaton_t* odec_automaton_parse(const char* text, const char* source,
                                       char** errptr) {
  if (!require(text != nullptr, "text is null", errptr)) return nullptr;
  try {
    return new odec_automaton_t{
        odec::io::parse_automaton(text, source == nullptr ? "input" : source)};
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

odec_automaton_t* odec_automaton_validity(uint32_t w, char** errptr) {
  try {
    return new odec_automaton_t{odec::validity_automaton(w)};
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

char* odec_automaton_format(const odec_automaton_t* a, char** errptr) {
  if (!require(a != nullptr, "null argument", errptr)) return nullptr;
  try {
    return dup_string(odec::io::format_automaton(*a->v));
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

void odec_automaton_destroy(odec_automaton_t* a) { delete a; }

/* ---- Solver options ---- */

odec_options_t* odec_options_create(void) { return new odec_options_t{}; }
void odec_options_destroy(odec_options_t* o) { delete o; }
void odec_options_set_max_width(odec_options_t* o, uint32_t max_width) {
  o->v.max_width = max_width;
}
void odec_options_set_syntactic_class(odec_options_t* o, int enabled) {
  o->v.syntactic_class = enabled != 0;
}
void odec_options_set_scan_limit(odec_options_t* o, uint64_t limit) {
  o->v.scan_limit = limit;
}

/* ---- Witnesses ---- */

void odec_witness_destroy(odec_witness_t* w) { delete w; }

size_t odec_witness_factor_count(const odec_witness_t* w) {
  return w->v.factors.size();
}

odec_obdd_t* odec_witness_factor(const odec_witness_t* w, size_t i) {
  return new odec_obdd_t{w->v.factors[i]};
}

size_t odec_witness_gate_count(const odec_witness_t* w) {
  return w->v.per_gate.size();
}

uint32_t odec_witness_gate_width(const odec_witness_t* w, size_t i) {
  return w->v.per_gate[i].width();
}

uint32_t odec_witness_reconfig_width(const odec_witness_t* w) {
  return w->v.reconfig_width;
}

int odec_witness_verified(const odec_witness_t* w) {
  return w->v.verified.ok() ? 1 : 0;
}

uint64_t odec_witness_inputs_checked(const odec_witness_t* w) {
  return w->v.verified.inputs_checked;
}

char* odec_witness_format(const odec_witness_t* w) {
  odec::io::WitnessFile file;
  file.k = uint32_t(w->v.factors.size());
  file.n = w->n;
  file.reconfig_width = w->v.reconfig_width;
  file.factors = w->v.factors;
  return dup_string(odec::io::format_witness(file));
}

/* ---- Decision procedures ---- */

odec_witness_t* odec_decide_decomposition(
    const odec_obdd_t* target, const odec_circuit_t* circuit, uint32_t p,
    const odec_automaton_t* const* classes, size_t n_classes,
    const odec_options_t* options, odec_stats_t* stats, char** errptr) {
  if (!require(target != nullptr && circuit != nullptr, "null argument",
               errptr))
    return nullptr;
  try {
    odec::ProblemInstance inst{target->v, circuit->v, p, std::nullopt,
                               collect_classes(classes, n_classes)};
    odec::SolveStats s;
    auto w = odec::decide_decomposition(inst, effective_options(options), &s);
    store_stats(stats, s);
    if (!w) return nullptr;
    return wrap_witness(std::move(*w), target->v.length());
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

odec_witness_t* odec_decide_reconfiguration(
    const odec_obdd_t* target, const odec_circuit_t* circuit, uint32_t p,
    uint32_t w, const odec_automaton_t* const* classes, size_t n_classes,
    const odec_options_t* options, odec_stats_t* stats, char** errptr) {
  if (!require(target != nullptr && circuit != nullptr, "null argument",
               errptr))
    return nullptr;
  try {
    odec::ProblemInstance inst{target->v, circuit->v, p, w,
                               collect_classes(classes, n_classes)};
    odec::SolveStats s;
    auto wit = odec::decide_reconfiguration(inst, effective_options(options),
                                            &s);
    store_stats(stats, s);
    if (!wit) return nullptr;
    return wrap_witness(std::move(*wit), target->v.length());
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

odec_witness_t* odec_decide_generalized_junta(
    const odec_obdd_t* target, uint32_t k, uint32_t p, uint32_t m_max,
    const odec_automaton_t* const* classes, size_t n_classes,
    const odec_options_t* options, odec_stats_t* stats,
    odec_circuit_t** out_circuit, char** errptr) {
  if (!require(target != nullptr && out_circuit != nullptr, "null argument",
               errptr))
    return nullptr;
  try {
    odec::SolveStats s;
    auto r = odec::decide_generalized_junta(
        target->v, k, p, m_max, collect_classes(classes, n_classes),
        effective_options(options), &s);
    store_stats(stats, s);
    if (!r) return nullptr;
    *out_circuit = new odec_circuit_t{std::move(r->circuit)};
    return wrap_witness(std::move(r->witness), target->v.length());
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

odec_obdd_t** odec_factorize(const odec_obdd_t* d, uint32_t k,
                             const odec_options_t* options,
                             odec_stats_t* stats, size_t* out_count,
                             char** errptr) {
  if (!require(d != nullptr && out_count != nullptr, "null argument", errptr))
    return nullptr;
  *out_count = 0;
  try {
    odec::SolveStats s;
    auto factors = odec::factorize_obdd(d->v, k, effective_options(options),
                                        &s);
    store_stats(stats, s);
    if (!factors) return nullptr;
    odec_obdd_t** out = static_cast<odec_obdd_t**>(
        std::malloc(factors->size() * sizeof(odec_obdd_t*)));
    for (size_t i = 0; i < factors->size(); ++i)
      out[i] = new odec_obdd_t{std::move((*factors)[i])};
    *out_count = factors->size();
    return out;
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return nullptr;
  }
}

/* ---- Oracle sweep ---- */

int odec_oracle_sweep(const char* config_text, const char* source,
                      char** out_report, uint64_t* instances,
                      uint64_t* mismatches, char** errptr) {
  if (!require(config_text != nullptr, "config_text is null", errptr))
    return -1;
  try {
    odec::SweepConfig cfg = odec::parse_sweep_config(
        config_text, source == nullptr ? "config" : source);
    std::ostringstream lines;
    odec::SweepReport report = odec::run_sweep(cfg, lines);
    if (out_report != nullptr) *out_report = dup_string(lines.str());
    if (instances != nullptr) *instances = report.instances;
    if (mismatches != nullptr) *mismatches = report.mismatches;
    return 0;
  } catch (const std::exception& e) {
    set_error(errptr, e.what());
    return -1;
  }
}

}  // extern "C"
