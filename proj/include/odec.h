#ifndef ODEC_H
#define ODEC_H

/* C interface to the width-bounded Boolean decomposition library.
 *
 * Conventions:
 *   - Every object returned by a creation call is owned by the caller and
 *     released with its matching _destroy function.
 *   - Fallible calls take a final char** errptr. On failure they store a
 *     malloc'd description there (release with odec_free) and return the
 *     documented failure value; *errptr is left untouched on success, so
 *     initialize it to NULL and test it.
 *   - Decision calls distinguish a sound "no" (NULL result, *errptr still
 *     NULL) from an error (NULL result, *errptr set).
 *   - Strings returned by _format/_dot calls are malloc'd; release with
 *     odec_free.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct odec_obdd_t odec_obdd_t;
typedef struct odec_circuit_t odec_circuit_t;
typedef struct odec_automaton_t odec_automaton_t;
typedef struct odec_witness_t odec_witness_t;
typedef struct odec_options_t odec_options_t;

typedef struct odec_stats_t {
  uint64_t states_explored;
  uint32_t levels;
  /* First search level with an empty frontier, -1 when the search never
   * died. */
  int64_t died_level;
  uint64_t scanned_candidates;
} odec_stats_t;

const char* odec_version(void);
void odec_free(void* p);

/* ---- OBDDs ---- */

odec_obdd_t* odec_obdd_parse(const char* text, const char* source,
                             char** errptr);
char* odec_obdd_format(const odec_obdd_t* d);
char* odec_obdd_dot(const odec_obdd_t* d);
void odec_obdd_destroy(odec_obdd_t* d);

/* bits holds 2^n entries, entry x is f(x) with x read most significant
 * variable first. */
odec_obdd_t* odec_obdd_from_table(uint32_t n, const uint8_t* bits,
                                  char** errptr);

uint32_t odec_obdd_length(const odec_obdd_t* d);
uint32_t odec_obdd_width(const odec_obdd_t* d);
uint32_t odec_obdd_width_bound(const odec_obdd_t* d);
uint64_t odec_obdd_size(const odec_obdd_t* d);

/* input is a string over '0'/'1' of length odec_obdd_length(d); the result
 * lands in *out. Returns 0 on success, -1 on error. */
int odec_obdd_evaluate(const odec_obdd_t* d, const char* input, int* out,
                       char** errptr);

odec_obdd_t* odec_obdd_canonicalize(const odec_obdd_t* d, char** errptr);
/* 1 when the two diagrams compute the same function, else 0. */
int odec_obdd_equivalent(const odec_obdd_t* a, const odec_obdd_t* b,
                         char** errptr);

/* op: 0 = AND, 1 = OR (binary, b required), 2 = NOT (unary, b NULL). */
odec_obdd_t* odec_obdd_apply(int op, const odec_obdd_t* a,
                             const odec_obdd_t* b, char** errptr);

/* 1-based positions of the variables the function depends on; *out_vars is
 * a malloc'd array of *out_count entries (NULL when the count is zero).
 * Returns 0 on success, -1 on error. */
int odec_obdd_junta(const odec_obdd_t* d, uint32_t** out_vars,
                    size_t* out_count, char** errptr);

/* ---- Circuits ---- */

odec_circuit_t* odec_circuit_parse(const char* text, const char* source,
                                   char** errptr);
char* odec_circuit_format(const odec_circuit_t* c);
void odec_circuit_destroy(odec_circuit_t* c);

uint32_t odec_circuit_inputs(const odec_circuit_t* c);
uint32_t odec_circuit_size(const odec_circuit_t* c);
uint32_t odec_circuit_depth(const odec_circuit_t* c);

/* ---- Class automata ---- */

odec_automaton_t* odec_automaton_parse(const char* text, const char* source,
                                       char** errptr);
odec_automaton_t* odec_automaton_validity(uint32_t w, char** errptr);
char* odec_automaton_format(const odec_automaton_t* a, char** errptr);
void odec_automaton_destroy(odec_automaton_t* a);

/* ---- Solver options ---- */

odec_options_t* odec_options_create(void);
void odec_options_destroy(odec_options_t* o);
void odec_options_set_max_width(odec_options_t* o, uint32_t max_width);
void odec_options_set_syntactic_class(odec_options_t* o, int enabled);
void odec_options_set_scan_limit(odec_options_t* o, uint64_t limit);

/* ---- Witnesses ---- */

void odec_witness_destroy(odec_witness_t* w);
size_t odec_witness_factor_count(const odec_witness_t* w);
odec_obdd_t* odec_witness_factor(const odec_witness_t* w, size_t i);
size_t odec_witness_gate_count(const odec_witness_t* w);
uint32_t odec_witness_gate_width(const odec_witness_t* w, size_t i);
uint32_t odec_witness_reconfig_width(const odec_witness_t* w);
/* 1 when the internal re-check (pointwise, canonical, widths, classes)
 * passed. */
int odec_witness_verified(const odec_witness_t* w);
uint64_t odec_witness_inputs_checked(const odec_witness_t* w);
/* Factor tuple in the witness file format. */
char* odec_witness_format(const odec_witness_t* w);

/* ---- Decision procedures ----
 *
 * classes: NULL or an array of n_classes automata; one entry constrains all
 * factors, otherwise one entry per circuit input. options/stats may be NULL.
 */

odec_witness_t* odec_decide_decomposition(
    const odec_obdd_t* target, const odec_circuit_t* circuit, uint32_t p,
    const odec_automaton_t* const* classes, size_t n_classes,
    const odec_options_t* options, odec_stats_t* stats, char** errptr);

odec_witness_t* odec_decide_reconfiguration(
    const odec_obdd_t* target, const odec_circuit_t* circuit, uint32_t p,
    uint32_t w, const odec_automaton_t* const* classes, size_t n_classes,
    const odec_options_t* options, odec_stats_t* stats, char** errptr);

/* On success stores the found circuit in *out_circuit (caller owns). */
odec_witness_t* odec_decide_generalized_junta(
    const odec_obdd_t* target, uint32_t k, uint32_t p, uint32_t m_max,
    const odec_automaton_t* const* classes, size_t n_classes,
    const odec_options_t* options, odec_stats_t* stats,
    odec_circuit_t** out_circuit, char** errptr);

/* Factors of width strictly below the target's canonical width whose
 * conjunction equals the target. On a positive answer returns a malloc'd
 * array of *out_count new OBDD handles (release each, then the array); a
 * sound "no" returns NULL with *out_count 0 and *errptr NULL. */
odec_obdd_t** odec_factorize(const odec_obdd_t* d, uint32_t k,
                             const odec_options_t* options,
                             odec_stats_t* stats, size_t* out_count,
                             char** errptr);

/* ---- Oracle sweep ----
 *
 * Parses a sweep configuration, runs the solver/oracle agreement sweep, and
 * stores the full line report in *out_report (malloc'd). Returns 0 when the
 * sweep ran (mismatch count in *mismatches), -1 on error.
 */
int odec_oracle_sweep(const char* config_text, const char* source,
                      char** out_report, uint64_t* instances,
                      uint64_t* mismatches, char** errptr);

#ifdef __cplusplus
}
#endif

#endif /* ODEC_H */
