#pragma once

#include <string>
#include <vector>

#include "core/automata.hpp"
#include "core/circuit.hpp"
#include "core/obdd.hpp"

namespace odec::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// All parsers take the whole text plus a source name used in error messages;
// failures throw parse_error with "<source>:<line>: reason" and the 1-based
// line as detail. Text beyond the parsed object is rejected. Formatting then
// reparsing then formatting is byte-identical.

std::string format_obdd(const Obdd& d);
Obdd parse_obdd(const std::string& text, const std::string& source = "input");

std::string format_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text,
                      const std::string& source = "input");

// Explicit automata round-trip through the sofa form; the validity automaton
// has a builtin line instead of state sections. Other automaton kinds have no
// text form.
std::string format_automaton(const LayeredNfa& a);
NfaPtr parse_automaton(const std::string& text,
                       const std::string& source = "input");

// Factor tuple as written next to a YES answer. reconfig_width records the
// width profile maximum claimed for the tuple; parsing does not recompute it.
struct WitnessFile {
  uint32_t k = 0;
  uint32_t n = 0;
  uint32_t reconfig_width = 0;
  std::vector<Obdd> factors;
};

std::string format_witness(const WitnessFile& w);
WitnessFile parse_witness(const std::string& text,
                          const std::string& source = "input");

// Transition graph in dot form, levels left to right, dashed 0-edges,
// accepting end states doubled.
std::string obdd_dot(const Obdd& d);

}  // namespace odec::io
