#include <random>
#include <string>

#include "core/automata.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/obdd.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace odec;
using namespace odec::test;

namespace {

long parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
    return e.detail();
  }
  FAIL("expected a parse error");
  return -1;
}

const std::string kData = ODEC_TEST_DATA;

}  // namespace

TEST_CASE("obdd text round trip is byte identical") {
  std::mt19937_64 rng(8001);
  for (int round = 0; round < 30; ++round) {
    Obdd d = random_obdd(rng, 3, 5);
    std::string text = io::format_obdd(d);
    Obdd back = io::parse_obdd(text, "t");
    CHECK(back == d);
    CHECK(io::format_obdd(back) == text);
  }
  std::string fixture = io::read_file(kData + "/parity4.obdd");
  CHECK(io::format_obdd(io::parse_obdd(fixture, "parity4")) == fixture);
}

TEST_CASE("obdd parser reports the offending line") {
  CHECK(parse_error_line([] { io::parse_obdd("", "t"); }) == 1);
  CHECK(parse_error_line([] { io::parse_obdd("obdd w=2", "t"); }) == 1);
  CHECK(parse_error_line([] {
          io::parse_obdd("obdd width=2 length=2\nlayer 1: 0 0 -> 0 ; 0 1 -> "
                         "0\nlayer 3: 0 0 -> 0 ; 0 1 -> 0\n",
                         "t");
        }) == 3);
  CHECK(parse_error_line([] {
          io::parse_obdd("obdd width=2 length=1\nlayer 1: 0 0 -> 0 ; 0 1 -> "
                         "0\nextra\n",
                         "t");
        }) == 3);
  // structural violations surface as their own codes, not parse errors
  try {
    io::parse_obdd("obdd width=2 length=1\nlayer 1: 1 0 -> 0 ; 1 1 -> 0\n",
                   "t");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::condition1_violation);
  }
}

TEST_CASE("circuit text round trip is byte identical") {
  Circuit c = Circuit::validate(
      {gate_input(1), gate_input(2), gate_not(1), gate_not(2), gate_and(1, 4),
       gate_and(3, 2), gate_or(5, 6)},
      2);
  std::string text = io::format_circuit(c);
  CHECK(io::parse_circuit(text, "t") == c);
  CHECK(io::format_circuit(io::parse_circuit(text, "t")) == text);

  std::string fixture = io::read_file(kData + "/xor.circ");
  CHECK(io::format_circuit(io::parse_circuit(fixture, "xor")) == fixture);

  CHECK(parse_error_line([] { io::parse_circuit("circuit k=2\n", "t"); }) ==
        1);
  CHECK(parse_error_line([] {
          io::parse_circuit("circuit inputs=1\ng1 = x1\ng3 = NOT g1\n", "t");
        }) == 3);
}

TEST_CASE("automaton text round trip covers builtin and explicit forms") {
  std::string builtin = io::read_file(kData + "/validity2.sofa");
  NfaPtr v = io::parse_automaton(builtin, "validity2");
  CHECK(io::format_automaton(*v) == builtin);
  CHECK(v->arity() == 1);
  CHECK(v->width_bounds() == std::vector<uint32_t>{2});

  std::string explicit_form = io::read_file(kData + "/hypercube2.sofa");
  NfaPtr dict = io::parse_automaton(explicit_form, "hypercube2");
  CHECK(io::format_automaton(*dict) == explicit_form);

  // the dictator class accepts exactly the canonical dictators
  for (uint32_t n = 1; n <= 4; ++n)
    for (uint32_t i = 1; i <= n; ++i)
      CHECK(accepts(*dict, obdd_word(hypercube(n, i))));
  CHECK_FALSE(accepts(*dict, obdd_word(obdd_from_table(
                                 TruthTable::from_function(2, [](uint64_t x) {
                                   return __builtin_parityll(x) != 0;
                                 })))));

  // singletons have no text form
  CHECK_THROWS_AS((void)io::format_automaton(*singleton_automaton(
                      hypercube(2, 1))),
                  Error);

  CHECK(parse_error_line([] { io::parse_automaton("sofa arity=1\n", "t"); }) ==
        1);
  CHECK(parse_error_line([&] {
          io::parse_automaton("sofa arity=1 widths=2\nbuiltin validity 3\n",
                              "t");
        }) == 2);
}

TEST_CASE("witness files carry the factor tuple") {
  std::mt19937_64 rng(8002);
  io::WitnessFile w;
  w.k = 2;
  w.n = 3;
  w.reconfig_width = 3;
  w.factors = {random_obdd(rng, 2, 3), random_obdd(rng, 2, 3)};
  std::string text = io::format_witness(w);
  io::WitnessFile back = io::parse_witness(text, "t");
  CHECK(back.k == w.k);
  CHECK(back.n == w.n);
  CHECK(back.reconfig_width == w.reconfig_width);
  CHECK(back.factors == w.factors);
  CHECK(io::format_witness(back) == text);

  CHECK(parse_error_line([] { io::parse_witness("witness k=1\n", "t"); }) ==
        1);
}

TEST_CASE("dot export names every level") {
  Obdd p = io::parse_obdd(io::read_file(kData + "/parity4.obdd"), "parity4");
  std::string dot = io::obdd_dot(p);
  CHECK(dot.find("digraph") != std::string::npos);
  for (int level = 0; level <= 4; ++level)
    CHECK(dot.find("s" + std::to_string(level) + "_0") != std::string::npos);
  CHECK(dot.find("dashed") != std::string::npos);        // 0-edges
  CHECK(dot.find("doublecircle") != std::string::npos);  // accepting end
}

TEST_CASE("file helpers fail loudly on missing paths") {
  CHECK_THROWS_AS((void)io::read_file(kData + "/missing.obdd"), Error);
}
