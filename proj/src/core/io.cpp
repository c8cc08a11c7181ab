#include "core/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "core/errors.hpp"

namespace odec::io {
namespace {

[[noreturn]] void die(const std::string& source, size_t line,
                      const std::string& why) {
  fail(errc::parse_error,
       source + ":" + std::to_string(line) + ": " + why, long(line));
}

// Splits on newlines; a final trailing newline contributes no segment.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> t;
  std::string w;
  while (ss >> w) t.push_back(w);
  return t;
}

// Braces and pipes carry structure in transition lines; spacing them out
// lets one whitespace tokenizer serve every line shape.
std::string pad_punct(const std::string& line) {
  std::string out;
  for (char c : line) {
    if (c == '{' || c == '}' || c == '|') {
      out += ' ';
      out += c;
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

uint64_t parse_num(const std::string& tok, const std::string& source,
                   size_t line, uint64_t max) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    die(source, line, "expected a number, got '" + tok + "'");
  if (v > max) die(source, line, "value out of range: " + tok);
  return v;
}

uint64_t parse_kv(const std::string& tok, const std::string& key,
                  const std::string& source, size_t line, uint64_t max) {
  std::string prefix = key + "=";
  if (tok.rfind(prefix, 0) != 0)
    die(source, line, "expected " + key + "=<value>, got '" + tok + "'");
  return parse_num(tok.substr(prefix.size()), source, line, max);
}

uint64_t parse_ref(const std::string& tok, char sigil,
                   const std::string& source, size_t line, uint64_t max) {
  if (tok.empty() || tok[0] != sigil)
    die(source, line,
        std::string("expected ") + sigil + "<index>, got '" + tok + "'");
  return parse_num(tok.substr(1), source, line, max);
}

// `<q> <a> -> <q'>` groups separated by `;`, ending at a `}` token or at the
// end of the line.
std::vector<Transition> parse_triples(const std::vector<std::string>& t,
                                      size_t& p, const std::string& source,
                                      size_t line) {
  std::vector<Transition> out;
  while (p < t.size() && t[p] != "}") {
    if (!out.empty()) {
      if (t[p] != ";") die(source, line, "expected ';' between transitions");
      ++p;
    }
    if (p + 4 > t.size()) die(source, line, "truncated transition");
    uint32_t q = uint32_t(parse_num(t[p], source, line, 63));
    uint32_t a = uint32_t(parse_num(t[p + 1], source, line, 1));
    if (t[p + 2] != "->") die(source, line, "expected '->'");
    uint32_t q2 = uint32_t(parse_num(t[p + 3], source, line, 63));
    out.push_back({q, a, q2});
    p += 4;
  }
  return out;
}

std::string triples_text(const Layer& l) {
  std::string out;
  for (const Transition& t : l.triples()) {
    if (!out.empty()) out += " ; ";
    out += std::to_string(t.src) + " " + std::to_string(t.bit) + " -> " +
           std::to_string(t.dst);
  }
  return out;
}

// Reads one OBDD starting at lines[pos]; advances pos past it. Line numbers
// in errors are absolute within the enclosing file.
Obdd obdd_from_lines(const std::vector<std::string>& lines, size_t& pos,
                     const std::string& source) {
  if (pos >= lines.size()) die(source, pos + 1, "missing obdd header");
  auto t = tokens_of(lines[pos]);
  if (t.size() != 3 || t[0] != "obdd")
    die(source, pos + 1, "expected 'obdd width=<w> length=<n>'");
  auto w = uint32_t(parse_kv(t[1], "width", source, pos + 1, 64));
  if (w < 1) die(source, pos + 1, "width must be positive");
  auto n = uint32_t(parse_kv(t[2], "length", source, pos + 1, 1000000));
  ++pos;
  LayerList layers;
  layers.reserve(n);
  for (uint32_t i = 1; i <= n; ++i, ++pos) {
    if (pos >= lines.size()) die(source, pos + 1, "missing layer line");
    auto lt = tokens_of(lines[pos]);
    if (lt.size() < 2 || lt[0] != "layer" ||
        lt[1] != std::to_string(i) + ":")
      die(source, pos + 1, "expected 'layer " + std::to_string(i) + ":'");
    size_t p = 2;
    auto triples = parse_triples(lt, p, source, pos + 1);
    if (p != lt.size()) die(source, pos + 1, "unexpected trailing token");
    layers.emplace_back(std::move(triples));
  }
  return Obdd::validate(std::move(layers), w);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse_error, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(errc::parse_error, path + ": read failed");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::parse_error, path + ": cannot open file for writing");
  out << content;
  out.flush();
  if (!out) fail(errc::parse_error, path + ": write failed");
}

std::string format_obdd(const Obdd& d) {
  std::string out = "obdd width=" + std::to_string(d.width_bound()) +
                    " length=" + std::to_string(d.length()) + "\n";
  for (uint32_t i = 1; i <= d.length(); ++i)
    out += "layer " + std::to_string(i) + ": " + triples_text(d.layer(i)) +
           "\n";
  return out;
}

Obdd parse_obdd(const std::string& text, const std::string& source) {
  auto lines = split_lines(text);
  size_t pos = 0;
  Obdd d = obdd_from_lines(lines, pos, source);
  if (pos != lines.size()) die(source, pos + 1, "unexpected trailing content");
  return d;
}

std::string format_circuit(const Circuit& c) {
  std::string out = "circuit inputs=" + std::to_string(c.inputs()) + "\n";
  for (uint32_t i = 1; i <= c.size(); ++i) {
    const Gate& g = c.gate(i);
    out += "g" + std::to_string(i) + " = ";
    switch (g.kind) {
      case GateKind::input:
        out += "x" + std::to_string(g.a);
        break;
      case GateKind::gnot:
        out += "NOT g" + std::to_string(g.a);
        break;
      case GateKind::gand:
        out += "AND g" + std::to_string(g.a) + " g" + std::to_string(g.b);
        break;
      case GateKind::gor:
        out += "OR g" + std::to_string(g.a) + " g" + std::to_string(g.b);
        break;
    }
    out += "\n";
  }
  return out;
}

Circuit parse_circuit(const std::string& text, const std::string& source) {
  auto lines = split_lines(text);
  if (lines.empty()) die(source, 1, "missing circuit header");
  auto t = tokens_of(lines[0]);
  if (t.size() != 2 || t[0] != "circuit")
    die(source, 1, "expected 'circuit inputs=<k>'");
  auto k = uint32_t(parse_kv(t[1], "inputs", source, 1, 1000000));
  std::vector<Gate> gates;
  for (size_t pos = 1; pos < lines.size(); ++pos) {
    size_t line = pos + 1;
    auto g = tokens_of(lines[pos]);
    if (g.size() < 3 || g[1] != "=")
      die(source, line, "expected 'g<i> = <gate>'");
    auto idx = parse_ref(g[0], 'g', source, line, 1000000);
    if (idx != gates.size() + 1)
      die(source, line, "gates must be numbered consecutively from 1");
    uint64_t cap = 1000000;
    if (g[2] == "NOT") {
      if (g.size() != 4) die(source, line, "NOT takes one argument");
      gates.push_back(gate_not(uint32_t(parse_ref(g[3], 'g', source, line, cap))));
    } else if (g[2] == "AND" || g[2] == "OR") {
      if (g.size() != 5) die(source, line, "AND/OR take two arguments");
      auto a = uint32_t(parse_ref(g[3], 'g', source, line, cap));
      auto b = uint32_t(parse_ref(g[4], 'g', source, line, cap));
      gates.push_back(g[2] == "AND" ? gate_and(a, b) : gate_or(a, b));
    } else {
      if (g.size() != 3) die(source, line, "unexpected trailing token");
      gates.push_back(gate_input(uint32_t(parse_ref(g[2], 'x', source, line, cap))));
    }
  }
  return Circuit::validate(std::move(gates), k);
}

std::string format_automaton(const LayeredNfa& a) {
  std::string out = "sofa arity=" + std::to_string(a.arity()) + " widths=";
  for (uint32_t i = 0; i < a.arity(); ++i)
    out += (i ? "," : "") + std::to_string(a.width_bounds()[i]);
  out += "\n";
  if (auto* v = dynamic_cast<const ValidityNfa*>(&a))
    return out + "builtin validity " + std::to_string(v->width()) + "\n";
  auto* e = dynamic_cast<const ExtensionalNfa*>(&a);
  if (!e)
    fail(errc::invalid_parameters, "automaton has no text form");
  out += "states " + std::to_string(e->state_total()) + "\n";
  out += "initial";
  for (uint32_t s : e->initial()) out += " " + std::to_string(s);
  out += "\nfinal";
  for (uint32_t s : e->final_states()) out += " " + std::to_string(s);
  out += "\n";
  for (const auto& ed : e->edges()) {
    out += "trans " + std::to_string(ed.src) + " ";
    for (size_t j = 0; j < ed.symbol.size(); ++j)
      out += (j ? "|{" : "{") + triples_text(ed.symbol[j]) + "}";
    out += " " + std::to_string(ed.dst) + "\n";
  }
  return out;
}

NfaPtr parse_automaton(const std::string& text, const std::string& source) {
  auto lines = split_lines(text);
  if (lines.empty()) die(source, 1, "missing sofa header");
  auto t = tokens_of(lines[0]);
  if (t.size() != 3 || t[0] != "sofa")
    die(source, 1, "expected 'sofa arity=<r> widths=<w1,...>'");
  auto arity = uint32_t(parse_kv(t[1], "arity", source, 1, 16));
  if (t[2].rfind("widths=", 0) != 0)
    die(source, 1, "expected widths=<w1,...>");
  std::vector<uint32_t> widths;
  {
    std::string list = t[2].substr(7);
    size_t start = 0;
    while (true) {
      size_t comma = list.find(',', start);
      std::string item = list.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start);
      widths.push_back(uint32_t(parse_num(item, source, 1, 64)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (widths.size() != arity)
    die(source, 1, "width list does not match arity");

  if (lines.size() < 2) die(source, 2, "missing automaton body");
  auto b = tokens_of(lines[1]);
  if (!b.empty() && b[0] == "builtin") {
    if (b.size() != 3 || b[1] != "validity")
      die(source, 2, "expected 'builtin validity <w>'");
    auto w = uint32_t(parse_num(b[2], source, 2, 64));
    if (arity != 1 || widths[0] != w)
      die(source, 2, "builtin widths disagree with header");
    if (lines.size() > 2) die(source, 3, "unexpected trailing content");
    return validity_automaton(w);
  }

  if (b.size() != 2 || b[0] != "states")
    die(source, 2, "expected 'states <count>'");
  auto count = uint32_t(parse_num(b[1], source, 2, 0xffffffffu));
  if (lines.size() < 4) die(source, lines.size() + 1, "missing state lists");
  auto ini = tokens_of(lines[2]);
  if (ini.empty() || ini[0] != "initial")
    die(source, 3, "expected 'initial <states>'");
  auto fin = tokens_of(lines[3]);
  if (fin.empty() || fin[0] != "final")
    die(source, 4, "expected 'final <states>'");
  std::vector<uint32_t> initial, final_states;
  for (size_t i = 1; i < ini.size(); ++i)
    initial.push_back(uint32_t(parse_num(ini[i], source, 3, 0xffffffffu)));
  for (size_t i = 1; i < fin.size(); ++i)
    final_states.push_back(uint32_t(parse_num(fin[i], source, 4, 0xffffffffu)));

  std::vector<ExtensionalNfa::Edge> edges;
  for (size_t pos = 4; pos < lines.size(); ++pos) {
    size_t line = pos + 1;
    auto tr = tokens_of(pad_punct(lines[pos]));
    if (tr.empty() || tr[0] != "trans")
      die(source, line, "expected 'trans <s> {...} <s'>'");
    if (tr.size() < 2) die(source, line, "truncated trans line");
    ExtensionalNfa::Edge e;
    e.src = uint32_t(parse_num(tr[1], source, line, 0xffffffffu));
    size_t p = 2;
    for (uint32_t j = 0; j < arity; ++j) {
      if (j) {
        if (p >= tr.size() || tr[p] != "|")
          die(source, line, "expected '|' between coordinates");
        ++p;
      }
      if (p >= tr.size() || tr[p] != "{")
        die(source, line, "expected '{'");
      ++p;
      e.symbol.emplace_back(parse_triples(tr, p, source, line));
      if (p >= tr.size() || tr[p] != "}") die(source, line, "expected '}'");
      ++p;
    }
    if (p + 1 != tr.size())
      die(source, line, "expected one target state at line end");
    e.dst = uint32_t(parse_num(tr[p], source, line, 0xffffffffu));
    edges.push_back(std::move(e));
  }
  return std::make_shared<ExtensionalNfa>(std::move(widths), count,
                                          std::move(initial),
                                          std::move(final_states),
                                          std::move(edges));
}

std::string format_witness(const WitnessFile& w) {
  std::string out = "witness k=" + std::to_string(w.k) +
                    " n=" + std::to_string(w.n) +
                    " reconfig_width=" + std::to_string(w.reconfig_width) +
                    "\n";
  for (size_t i = 0; i < w.factors.size(); ++i) {
    if (i) out += "---\n";
    out += format_obdd(w.factors[i]);
  }
  return out;
}

WitnessFile parse_witness(const std::string& text, const std::string& source) {
  auto lines = split_lines(text);
  if (lines.empty()) die(source, 1, "missing witness header");
  auto t = tokens_of(lines[0]);
  if (t.size() != 4 || t[0] != "witness")
    die(source, 1, "expected 'witness k=<k> n=<n> reconfig_width=<r>'");
  WitnessFile w;
  w.k = uint32_t(parse_kv(t[1], "k", source, 1, 1000000));
  w.n = uint32_t(parse_kv(t[2], "n", source, 1, 1000000));
  w.reconfig_width =
      uint32_t(parse_kv(t[3], "reconfig_width", source, 1, 0xffffffffu));
  size_t pos = 1;
  for (uint32_t i = 0; i < w.k; ++i) {
    if (i) {
      if (pos >= lines.size() || lines[pos] != "---")
        die(source, pos + 1, "expected '---' between factors");
      ++pos;
    }
    size_t head = pos;
    w.factors.push_back(obdd_from_lines(lines, pos, source));
    if (w.factors.back().length() != w.n)
      die(source, head + 1, "factor length disagrees with header");
  }
  if (pos != lines.size()) die(source, pos + 1, "unexpected trailing content");
  return w;
}

std::string obdd_dot(const Obdd& d) {
  uint32_t n = d.length();
  std::string out = "digraph obdd {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (uint32_t i = 0; i <= n; ++i) {
    if (n == 0 && i > 0) break;
    uint64_t states = n == 0 ? 1 : (i == 0 ? d.layer(1).dom_mask()
                                           : d.layer(i).im_mask());
    for (uint32_t q = 0; q < 64; ++q) {
      if (!(states >> q & 1)) continue;
      out += "  s" + std::to_string(i) + "_" + std::to_string(q) +
             " [label=\"" + std::to_string(q) + "\"";
      if (i == n && q != 0) out += ", shape=doublecircle";
      out += "];\n";
    }
  }
  for (uint32_t i = 1; i <= n; ++i)
    for (const Transition& t : d.layer(i).triples()) {
      out += "  s" + std::to_string(i - 1) + "_" + std::to_string(t.src) +
             " -> s" + std::to_string(i) + "_" + std::to_string(t.dst) +
             " [label=\"" + std::to_string(t.bit) + "\"";
      if (t.bit == 0) out += ", style=dashed";
      out += "];\n";
    }
  out += "}\n";
  return out;
}

}  // namespace odec::io
