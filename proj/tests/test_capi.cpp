// Exercises the shared-library C API end to end: handle lifecycles, the
// errptr convention (sound "no" answers leave *errptr null, failures set it),
// and ownership of every malloc'd string and array.

#include "odec.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

static int failures = 0;

static void check(bool ok, const char* what) {
  if (!ok) {
    std::fprintf(stderr, "FAIL: %s\n", what);
    ++failures;
  }
}

// Consumes an expected error string; the message must mention the needle.
static void expect_error(char** err, const char* needle, const char* what) {
  check(*err != nullptr, what);
  if (*err == nullptr) return;
  if (needle != nullptr) {
    std::string msg = *err;
    check(msg.find(needle) != std::string::npos, what);
  }
  odec_free(*err);
  *err = nullptr;
}

static odec_obdd_t* table(uint32_t n, const uint8_t* bits) {
  char* err = nullptr;
  odec_obdd_t* d = odec_obdd_from_table(n, bits, &err);
  check(d != nullptr && err == nullptr, "table conversion succeeds");
  return d;
}

static int eval01(const odec_obdd_t* d, const char* input) {
  int out = -1;
  char* err = nullptr;
  int rc = odec_obdd_evaluate(d, input, &out, &err);
  check(rc == 0 && err == nullptr, "evaluate succeeds");
  return out;
}

static const uint8_t k_and2[4] = {0, 0, 0, 1};
static const uint8_t k_x2of2[4] = {0, 1, 0, 1};
static const uint8_t k_par2[4] = {0, 1, 1, 0};
static const uint8_t k_maj3[8] = {0, 0, 0, 1, 0, 1, 1, 1};
static const uint8_t k_x2of3[8] = {0, 0, 1, 1, 0, 0, 1, 1};
static const uint8_t k_zero2[4] = {0, 0, 0, 0};
static const uint8_t k_par4[16] = {0, 1, 1, 0, 1, 0, 0, 1,
                                   1, 0, 0, 1, 0, 1, 1, 0};

static const char* k_and_circ =
    "circuit inputs=2\n"
    "g1 = x1\n"
    "g2 = x2\n"
    "g3 = AND g1 g2\n";

static const char* k_dict_sofa =
    "sofa arity=1 widths=2\n"
    "states 2\n"
    "initial 0\n"
    "final 1\n"
    "trans 0 {0 0 -> 0 ; 0 1 -> 0} 0\n"
    "trans 0 {0 0 -> 0 ; 0 1 -> 1} 1\n"
    "trans 1 {0 0 -> 0 ; 0 1 -> 0 ; 1 0 -> 1 ; 1 1 -> 1} 1\n";

static void test_obdd_basics() {
  char* err = nullptr;
  odec_obdd_t* d = table(2, k_and2);
  check(odec_obdd_length(d) == 2, "conjunction has length 2");
  check(odec_obdd_width(d) == 2, "conjunction has width 2");
  check(odec_obdd_width_bound(d) >= odec_obdd_width(d),
        "width bound dominates width");
  check(odec_obdd_size(d) > 0, "size counts transitions");
  check(eval01(d, "11") == 1 && eval01(d, "10") == 0 && eval01(d, "01") == 0,
        "conjunction evaluates pointwise");

  int out = 0;
  check(odec_obdd_evaluate(d, "1", &out, &err) == -1, "short input rejected");
  expect_error(&err, nullptr, "short input sets the error");
  check(odec_obdd_evaluate(d, "12", &out, &err) == -1, "bad digit rejected");
  expect_error(&err, nullptr, "bad digit sets the error");
  check(odec_obdd_evaluate(nullptr, "11", &out, &err) == -1,
        "null handle rejected");
  expect_error(&err, "invalid argument", "null handle sets the error");

  check(odec_obdd_from_table(2, nullptr, &err) == nullptr,
        "null table rejected");
  expect_error(&err, "bits is null", "null table sets the error");
  odec_obdd_destroy(d);
}

static void test_obdd_text() {
  char* err = nullptr;
  odec_obdd_t* d = table(2, k_and2);
  char* text = odec_obdd_format(d);
  check(text != nullptr && std::strncmp(text, "obdd width=", 11) == 0,
        "format emits the header");

  odec_obdd_t* back = odec_obdd_parse(text, "t", &err);
  check(back != nullptr && err == nullptr, "formatted text parses");
  char* again = odec_obdd_format(back);
  check(std::strcmp(text, again) == 0, "format is stable across a roundtrip");
  check(odec_obdd_equivalent(d, back, &err) == 1 && err == nullptr,
        "roundtrip preserves the function");
  odec_free(again);
  odec_free(text);
  odec_obdd_destroy(back);

  char* dot = odec_obdd_dot(d);
  check(dot != nullptr && std::strstr(dot, "digraph") != nullptr,
        "dot output is a digraph");
  odec_free(dot);

  check(odec_obdd_parse("obdd nonsense", "bad.obdd", &err) == nullptr,
        "malformed text rejected");
  expect_error(&err, "bad.obdd", "parse errors carry the source name");
  odec_obdd_destroy(d);
}

static void test_obdd_algebra() {
  char* err = nullptr;
  odec_obdd_t* d = table(2, k_and2);
  odec_obdd_t* par = table(2, k_par2);

  odec_obdd_t* neg = odec_obdd_apply(2, d, nullptr, &err);
  check(neg != nullptr && err == nullptr, "negation succeeds");
  check(eval01(neg, "11") == 0 && eval01(neg, "00") == 1,
        "negation flips the function");

  odec_obdd_t* nn = odec_obdd_apply(2, neg, nullptr, &err);
  check(odec_obdd_equivalent(nn, d, &err) == 1 && err == nullptr,
        "double negation is the identity");

  odec_obdd_t* canon = odec_obdd_canonicalize(nn, &err);
  check(canon != nullptr && err == nullptr, "canonicalize succeeds");
  char* a = odec_obdd_format(canon);
  char* b = odec_obdd_format(d);
  check(std::strcmp(a, b) == 0, "canonical forms agree byte for byte");
  odec_free(a);
  odec_free(b);

  odec_obdd_t* disj = odec_obdd_apply(1, d, par, &err);
  check(disj != nullptr && err == nullptr, "disjunction succeeds");
  check(eval01(disj, "00") == 0 && eval01(disj, "01") == 1 &&
            eval01(disj, "10") == 1 && eval01(disj, "11") == 1,
        "disjunction evaluates pointwise");

  check(odec_obdd_equivalent(d, par, &err) == 0 && err == nullptr,
        "different functions compare unequal");
  odec_obdd_t* m3 = table(3, k_maj3);
  check(odec_obdd_equivalent(d, m3, &err) == -1, "length mismatch is an error");
  expect_error(&err, nullptr, "length mismatch sets the error");

  check(odec_obdd_apply(0, d, nullptr, &err) == nullptr,
        "conjunction needs two operands");
  expect_error(&err, "two operands", "missing operand sets the error");
  check(odec_obdd_apply(2, d, par, &err) == nullptr,
        "negation takes one operand");
  expect_error(&err, "one operand", "extra operand sets the error");
  check(odec_obdd_apply(7, d, par, &err) == nullptr, "unknown op rejected");
  expect_error(&err, "unknown operation code", "unknown op sets the error");

  odec_obdd_destroy(m3);
  odec_obdd_destroy(disj);
  odec_obdd_destroy(canon);
  odec_obdd_destroy(nn);
  odec_obdd_destroy(neg);
  odec_obdd_destroy(par);
  odec_obdd_destroy(d);
}

static void test_junta() {
  char* err = nullptr;
  uint32_t* vars = nullptr;
  size_t count = 0;

  odec_obdd_t* d = table(3, k_x2of3);
  check(odec_obdd_junta(d, &vars, &count, &err) == 0 && err == nullptr,
        "junta extraction succeeds");
  check(count == 1 && vars != nullptr && vars[0] == 2,
        "a dictator depends on one variable");
  odec_free(vars);
  odec_obdd_destroy(d);

  odec_obdd_t* z = table(2, k_zero2);
  vars = reinterpret_cast<uint32_t*>(&count);  // must be overwritten
  check(odec_obdd_junta(z, &vars, &count, &err) == 0 && err == nullptr,
        "constant junta extraction succeeds");
  check(count == 0 && vars == nullptr, "a constant depends on nothing");
  odec_obdd_destroy(z);

  odec_obdd_t* both = table(2, k_and2);
  check(odec_obdd_junta(both, &vars, &count, &err) == 0 && count == 2 &&
            vars[0] == 1 && vars[1] == 2,
        "a conjunction depends on both variables");
  odec_free(vars);
  odec_obdd_destroy(both);
}

static void test_circuit() {
  char* err = nullptr;
  odec_circuit_t* c = odec_circuit_parse(k_and_circ, "and.circ", &err);
  check(c != nullptr && err == nullptr, "circuit parses");
  check(odec_circuit_inputs(c) == 2, "circuit reports its inputs");
  check(odec_circuit_size(c) == 3, "circuit reports its size");
  check(odec_circuit_depth(c) == 1, "single gate above the inputs");

  char* text = odec_circuit_format(c);
  odec_circuit_t* back = odec_circuit_parse(text, "t", &err);
  check(back != nullptr && err == nullptr, "formatted circuit parses");
  char* again = odec_circuit_format(back);
  check(std::strcmp(text, again) == 0, "circuit format is stable");
  odec_free(again);
  odec_free(text);
  odec_circuit_destroy(back);
  odec_circuit_destroy(c);

  check(odec_circuit_parse("circuit inputs=1\ng1 = bogus\n", "c", &err) ==
            nullptr,
        "malformed gate line rejected");
  expect_error(&err, "c:2", "circuit errors carry the location");
  check(odec_circuit_parse("circuit inputs=1\ng1 = AND g9 g9\n", "c", &err) ==
            nullptr,
        "dangling reference rejected");
  expect_error(&err, "ForwardReference", "dangling reference names the defect");
}

static void test_automaton() {
  char* err = nullptr;
  odec_automaton_t* v = odec_automaton_validity(2, &err);
  check(v != nullptr && err == nullptr, "validity automaton builds");
  char* text = odec_automaton_format(v, &err);
  check(text != nullptr && err == nullptr &&
            std::strstr(text, "builtin validity 2") != nullptr,
        "builtin automata format as builtins");
  odec_free(text);
  odec_automaton_destroy(v);

  odec_automaton_t* a = odec_automaton_parse(k_dict_sofa, "dict.sofa", &err);
  check(a != nullptr && err == nullptr, "transition table parses");
  char* t1 = odec_automaton_format(a, &err);
  odec_automaton_t* b = odec_automaton_parse(t1, "t", &err);
  check(b != nullptr && err == nullptr, "formatted automaton parses");
  char* t2 = odec_automaton_format(b, &err);
  check(t1 != nullptr && t2 != nullptr && std::strcmp(t1, t2) == 0,
        "automaton format is stable");
  odec_free(t2);
  odec_free(t1);
  odec_automaton_destroy(b);
  odec_automaton_destroy(a);

  check(odec_automaton_parse("sofa nonsense", "x.sofa", &err) == nullptr,
        "malformed automaton rejected");
  expect_error(&err, "x.sofa", "automaton errors carry the source name");
}

static void test_decomposition() {
  char* err = nullptr;
  odec_obdd_t* d = table(2, k_and2);
  odec_circuit_t* c = odec_circuit_parse(k_and_circ, "c", &err);
  odec_stats_t st = {};

  odec_witness_t* w =
      odec_decide_decomposition(d, c, 2, nullptr, 0, nullptr, &st, &err);
  check(w != nullptr && err == nullptr, "decomposition finds a witness");
  check(odec_witness_factor_count(w) == 2, "one factor per input");
  check(odec_witness_gate_count(w) == 3, "one profile entry per gate");
  check(odec_witness_gate_width(w, 2) == 2, "output gate carries the target");
  check(odec_witness_reconfig_width(w) == 2, "joint profile stays at 2");
  check(odec_witness_verified(w) == 1, "witness verifies");
  check(odec_witness_inputs_checked(w) == 4, "all four points checked");
  check(st.levels == 2 && st.died_level == -1 && st.scanned_candidates == 0 &&
            st.states_explored > 0,
        "statistics describe the run");

  odec_obdd_t* f0 = odec_witness_factor(w, 0);
  odec_obdd_t* f1 = odec_witness_factor(w, 1);
  odec_obdd_t* x2 = table(2, k_x2of2);
  check(odec_obdd_equivalent(f0, x2, &err) == 1, "least witness starts at x2");
  check(odec_obdd_equivalent(f1, d, &err) == 1,
        "second factor carries the conjunction");
  odec_obdd_destroy(x2);
  odec_obdd_destroy(f1);
  odec_obdd_destroy(f0);

  char* text = odec_witness_format(w);
  check(std::strstr(text, "witness k=2 n=2 reconfig_width=2") != nullptr,
        "witness header names the parameters");
  check(std::strstr(text, "---") != nullptr, "factors are separated");
  odec_free(text);
  odec_witness_destroy(w);

  // Sound "no": null result with *errptr untouched.
  odec_obdd_t* par = table(2, k_par2);
  w = odec_decide_reconfiguration(par, c, 1, 2, nullptr, 0, nullptr, &st,
                                  &err);
  check(w == nullptr && err == nullptr, "parity does not decompose at p=1");

  w = odec_decide_decomposition(par, c, 0, nullptr, 0, nullptr, &st, &err);
  check(w == nullptr, "zero factor width rejected");
  expect_error(&err, "factor width", "zero width sets the error");

  odec_options_t* opt = odec_options_create();
  odec_options_set_max_width(opt, 3);
  w = odec_decide_decomposition(d, c, 2, nullptr, 0, opt, &st, &err);
  check(w == nullptr, "width ceiling rejects the instance");
  expect_error(&err, "implied gate width bound", "ceiling sets the error");
  odec_options_destroy(opt);

  odec_obdd_destroy(par);
  odec_circuit_destroy(c);
  odec_obdd_destroy(d);
}

static void test_classes() {
  char* err = nullptr;
  odec_obdd_t* d = table(2, k_and2);
  odec_circuit_t* c = odec_circuit_parse(k_and_circ, "c", &err);
  odec_automaton_t* dict = odec_automaton_parse(k_dict_sofa, "dict", &err);
  odec_stats_t st = {};

  const odec_automaton_t* cls[1] = {dict};
  odec_witness_t* w =
      odec_decide_decomposition(d, c, 2, cls, 1, nullptr, &st, &err);
  check(w != nullptr && err == nullptr, "dictator class admits a witness");
  uint32_t* vars = nullptr;
  size_t count = 0;
  odec_obdd_t* f0 = odec_witness_factor(w, 0);
  odec_obdd_t* f1 = odec_witness_factor(w, 1);
  check(odec_obdd_junta(f0, &vars, &count, &err) == 0 && count == 1 &&
            vars[0] == 2,
        "first factor is the x2 dictator");
  odec_free(vars);
  check(odec_obdd_junta(f1, &vars, &count, &err) == 0 && count == 1 &&
            vars[0] == 1,
        "second factor is the x1 dictator");
  odec_free(vars);
  odec_obdd_destroy(f1);
  odec_obdd_destroy(f0);
  odec_witness_destroy(w);

  odec_obdd_t* par = table(2, k_par2);
  w = odec_decide_decomposition(par, c, 2, cls, 1, nullptr, &st, &err);
  check(w == nullptr && err == nullptr, "parity is no product of dictators");

  const odec_automaton_t* bad[1] = {nullptr};
  w = odec_decide_decomposition(d, c, 2, bad, 1, nullptr, &st, &err);
  check(w == nullptr, "null class rejected");
  expect_error(&err, "class automaton is null", "null class sets the error");

  odec_obdd_destroy(par);
  odec_automaton_destroy(dict);
  odec_circuit_destroy(c);
  odec_obdd_destroy(d);
}

static void test_reconfiguration() {
  char* err = nullptr;
  odec_obdd_t* m3 = table(3, k_maj3);
  odec_circuit_t* c = odec_circuit_parse(k_and_circ, "c", &err);
  odec_stats_t st = {};

  odec_witness_t* w =
      odec_decide_reconfiguration(m3, c, 2, 3, nullptr, 0, nullptr, &st, &err);
  check(w != nullptr && err == nullptr, "majority reconfigures at width 3");
  check(odec_witness_reconfig_width(w) == 3, "joint profile peaks at 3");
  check(odec_witness_verified(w) == 1, "bounded witness verifies");
  check(st.scanned_candidates == 1, "first candidate already fits");
  odec_witness_destroy(w);

  w = odec_decide_reconfiguration(m3, c, 2, 2, nullptr, 0, nullptr, &st, &err);
  check(w == nullptr, "factor width must stay below the bound");
  expect_error(&err, "strictly below", "bound violation sets the error");

  odec_circuit_destroy(c);
  odec_obdd_destroy(m3);
}

static void test_generalized_junta() {
  char* err = nullptr;
  odec_obdd_t* par = table(4, k_par4);
  odec_stats_t st = {};
  odec_circuit_t* found = nullptr;

  odec_witness_t* w = odec_decide_generalized_junta(
      par, 2, 2, 4, nullptr, 0, nullptr, &st, &found, &err);
  check(w != nullptr && err == nullptr, "parity of four is a generalized 2-junta");
  check(found != nullptr && odec_circuit_inputs(found) == 2 &&
            odec_circuit_size(found) == 3,
        "search reports the combining circuit");
  check(odec_witness_factor_count(w) == 2 && odec_witness_verified(w) == 1,
        "junta witness verifies");
  odec_obdd_t* f1 = odec_witness_factor(w, 1);
  check(odec_obdd_equivalent(f1, par, &err) == 1,
        "second factor carries the parity");
  odec_obdd_destroy(f1);
  odec_circuit_destroy(found);
  odec_witness_destroy(w);

  odec_obdd_t* m3 = table(3, k_maj3);
  found = nullptr;
  w = odec_decide_generalized_junta(m3, 2, 1, 3, nullptr, 0, nullptr, &st,
                                    &found, &err);
  check(w == nullptr && err == nullptr && found == nullptr,
        "majority needs factor width above 1");
  odec_obdd_destroy(m3);
  odec_obdd_destroy(par);
}

static void test_factorize() {
  char* err = nullptr;
  odec_obdd_t* m3 = table(3, k_maj3);
  odec_stats_t st = {};
  size_t count = 0;

  odec_obdd_t** fs = odec_factorize(m3, 2, nullptr, &st, &count, &err);
  check(fs != nullptr && err == nullptr && count == 2, "majority splits in two");
  if (fs != nullptr && count == 2) {
    check(odec_obdd_width(fs[0]) <= 2 && odec_obdd_width(fs[1]) <= 2,
          "factors stay below the target width");
    odec_obdd_t* prod = odec_obdd_apply(0, fs[0], fs[1], &err);
    check(prod != nullptr && odec_obdd_equivalent(prod, m3, &err) == 1,
          "factors conjoin to the target");
    odec_obdd_destroy(prod);
    for (size_t i = 0; i < count; ++i) odec_obdd_destroy(fs[i]);
    odec_free(fs);
  }

  odec_obdd_t* par = table(4, k_par4);
  fs = odec_factorize(par, 2, nullptr, &st, &count, &err);
  check(fs == nullptr && count == 0 && err == nullptr,
        "parity admits no narrower factors");
  odec_obdd_destroy(par);

  fs = odec_factorize(m3, 1, nullptr, &st, &count, &err);
  check(fs == nullptr, "factorization needs at least two parts");
  expect_error(&err, "at least two factors", "bad count sets the error");
  odec_obdd_destroy(m3);
}

static void test_sweep() {
  char* err = nullptr;
  char* report = nullptr;
  uint64_t instances = 0;
  uint64_t mismatches = 1;

  const char* cfg =
      "n_max = 1\n"
      "p_max = 1\n"
      "w_max = 2\n"
      "k_max = 1\n"
      "m_max = 1\n";
  int rc = odec_oracle_sweep(cfg, "s.cfg", &report, &instances, &mismatches,
                             &err);
  check(rc == 0 && err == nullptr, "sweep runs");
  check(instances == 8 && mismatches == 0, "tiny grid has 8 clean instances");
  check(report != nullptr, "sweep returns the report");
  if (report != nullptr) {
    size_t lines = 0;
    for (const char* p = report; *p; ++p) lines += *p == '\n';
    check(lines == instances, "one report line per instance");
    check(std::strspn(report, "0123456789abcdef") == 16 && report[16] == ',',
          "lines open with the target hash");
    odec_free(report);
  }

  check(odec_oracle_sweep("bogus", "s.cfg", &report, &instances, &mismatches,
                          &err) == -1,
        "malformed config rejected");
  expect_error(&err, "s.cfg:1", "config errors carry the location");
}

int main() {
  check(std::strcmp(odec_version(), "0.1.0") == 0, "version string");
  test_obdd_basics();
  test_obdd_text();
  test_obdd_algebra();
  test_junta();
  test_circuit();
  test_automaton();
  test_decomposition();
  test_classes();
  test_reconfiguration();
  test_generalized_junta();
  test_factorize();
  test_sweep();
  if (failures == 0) std::printf("capi: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
