#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

#include "core/automata.hpp"
#include "core/automata_ops.hpp"
#include "core/circuit.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/relations.hpp"

namespace odec {

namespace {

// Forward evaluation on one input combination; kept separate from
// circuit_table so the oracle's equality check does not lean on the code it
// is meant to validate. Bit (k - v) of inmask carries x_v.
bool eval_gate_output(const Circuit& c, uint64_t inmask) {
  std::vector<char> val(c.size());
  for (uint32_t i = 1; i <= c.size(); ++i) {
    const Gate& g = c.gate(i);
    char v = 0;
    switch (g.kind) {
      case GateKind::input:
        v = char((inmask >> (c.inputs() - g.a)) & 1);
        break;
      case GateKind::gnot:
        v = !val[g.a - 1];
        break;
      case GateKind::gand:
        v = val[g.a - 1] && val[g.b - 1];
        break;
      case GateKind::gor:
        v = val[g.a - 1] || val[g.b - 1];
        break;
    }
    val[i - 1] = v;
  }
  return val.back() != 0;
}

// Per-slot admissibility automata under the same class semantics the solvers
// use; a null entry admits every factor. Empty when nothing constrains.
std::vector<NfaPtr> class_filters(const Circuit& c, uint32_t p,
                                  const std::vector<NfaPtr>& raw,
                                  bool syntactic) {
  uint32_t k = c.inputs();
  if (raw.empty()) return {};
  std::vector<NfaPtr> src = raw;
  if (src.size() == 1) src.assign(k, raw[0]);
  if (src.size() != k)
    fail(errc::arity_mismatch,
         "need one class automaton, or one per circuit input");
  std::vector<NfaPtr> out(k);
  bool constrained = false;
  for (uint32_t i = 0; i < k; ++i) {
    const NfaPtr& a = src[i];
    if (!a) fail(errc::invalid_parameters, "class automaton is null");
    if (a->arity() != 1)
      fail(errc::arity_mismatch, "class automata must have arity 1");
    uint32_t wa = a->width_bounds()[0];
    if (wa > p)
      fail(errc::invalid_parameters,
           "class automaton width exceeds the factor width");
    const auto* v = dynamic_cast<const ValidityNfa*>(a.get());
    if (v && v->width() == p) continue;  // nothing beyond validity
    constrained = true;
    if (syntactic) {
      NfaPtr at_p = wa == p ? a : embed_widths(a, {p});
      out[i] = product_intersect(at_p, validity_automaton(p));
    } else {
      out[i] = equivalence_closure(a, p);
    }
  }
  if (!constrained) return {};
  return out;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

[[noreturn]] void die(const std::string& source, size_t line,
                      const std::string& why) {
  fail(errc::parse_error, source + ":" + std::to_string(line) + ": " + why,
       long(line));
}

void check_config(const SweepConfig& cfg) {
  if (cfg.n_max < 1 || cfg.n_max > 4)
    fail(errc::invalid_parameters, "n_max must lie in [1, 4]");
  if (cfg.p_max < 1 || cfg.p_max > 3)
    fail(errc::invalid_parameters, "p_max must lie in [1, 3]");
  if (cfg.w_max < 2 || cfg.w_max > 64)
    fail(errc::invalid_parameters, "w_max must lie in [2, 64]");
  if (cfg.k_max < 1 || cfg.k_max > 6)
    fail(errc::invalid_parameters, "k_max must lie in [1, 6]");
  if (cfg.m_max < 1 || cfg.m_max > 16)
    fail(errc::invalid_parameters, "m_max must lie in [1, 16]");
}

}  // namespace

std::vector<Obdd> enumerate_obdds(uint32_t w, uint32_t n) {
  if (w == 0 || n == 0)
    fail(errc::invalid_parameters, "enumeration needs positive width and length");
  if (w > 3 || n > 4)
    fail(errc::resource_limit, "exhaustive enumeration capped at width 3, length 4");
  std::vector<Obdd> out;
  LayerList acc;
  acc.reserve(n);
  // Depth-first over per-level layer choices; ascending layer order at every
  // level gives ascending lexicographic word order overall.
  std::function<void(uint32_t, uint64_t)> rec = [&](uint32_t level,
                                                    uint64_t dom) {
    if (level == n) {
      out.push_back(Obdd::validate(acc, w));
      return;
    }
    for_each_layer(dom, w, [&](const Layer& l) {
      acc.push_back(l);
      rec(level + 1, l.im_mask());
      acc.pop_back();
      return true;
    });
  };
  rec(0, 1);
  return out;
}

std::optional<Witness> brute_force_solve(const ProblemInstance& inst,
                                         const SolveOptions& opts) {
  const Circuit& c = inst.circuit;
  const uint32_t k = c.inputs();
  const uint32_t n = inst.target.length();
  const uint32_t p = inst.factor_width;
  if (p == 0)
    fail(errc::invalid_parameters, "factor width must be at least 1");
  if (inst.reconfig_bound && p >= *inst.reconfig_bound)
    fail(errc::invalid_parameters,
         "factor width must be strictly below the reconfiguration bound");
  std::vector<NfaPtr> filters =
      class_filters(c, p, inst.class_automata, opts.syntactic_class);

  std::vector<Obdd> pool = enumerate_obdds(p, n);
  if (std::pow(double(pool.size()), double(k)) > double(1 << 26))
    fail(errc::resource_limit, "factor tuple space exceeds the oracle budget");

  const uint64_t points = uint64_t(1) << n;
  std::vector<uint32_t> fmask(pool.size(), 0);
  for (size_t j = 0; j < pool.size(); ++j)
    for (uint64_t x = 0; x < points; ++x)
      if (pool[j].evaluate_index(x)) fmask[j] |= uint32_t(1) << x;
  uint32_t tmask = 0;
  for (uint64_t x = 0; x < points; ++x)
    if (inst.target.evaluate_index(x)) tmask |= uint32_t(1) << x;

  std::vector<std::vector<char>> admit(k);
  for (uint32_t i = 0; i < k; ++i) {
    admit[i].assign(pool.size(), 1);
    if (!filters.empty() && filters[i])
      for (size_t j = 0; j < pool.size(); ++j)
        admit[i][j] = accepts(*filters[i], obdd_word(pool[j])) ? 1 : 0;
  }

  std::vector<char> ctab(size_t(1) << k);
  for (uint64_t m = 0; m < ctab.size(); ++m)
    ctab[m] = eval_gate_output(c, m) ? 1 : 0;

  // Tuple odometer with the last slot fastest: lexicographic tuple order over
  // the (already lexicographic) pool.
  std::vector<size_t> idx(k, 0);
  for (;;) {
    bool ok = true;
    for (uint32_t i = 0; i < k && ok; ++i) ok = admit[i][idx[i]] != 0;
    if (ok) {
      uint32_t composed = 0;
      for (uint64_t x = 0; x < points; ++x) {
        uint64_t m = 0;
        for (uint32_t v = 1; v <= k; ++v)
          m |= uint64_t((fmask[idx[v - 1]] >> x) & 1) << (k - v);
        if (ctab[m]) composed |= uint32_t(1) << x;
      }
      if (composed == tmask) {
        std::vector<Obdd> factors;
        factors.reserve(k);
        for (uint32_t i = 0; i < k; ++i) factors.push_back(pool[idx[i]]);
        std::vector<Obdd> per_gate = gate_functions(c, factors);
        uint32_t rw = 0;
        for (const Obdd& g : per_gate) rw = std::max(rw, g.width());
        if (!inst.reconfig_bound || rw <= *inst.reconfig_bound) {
          Witness w;
          w.factors = std::move(factors);
          w.per_gate = std::move(per_gate);
          w.reconfig_width = rw;
          w.verified.pointwise_ok = true;
          w.verified.canonical_ok = true;
          w.verified.widths_ok = true;
          w.verified.class_ok = true;
          w.verified.inputs_checked = points;
          return w;
        }
      }
    }
    uint32_t s = k;
    while (s > 0) {
      --s;
      if (++idx[s] < pool.size()) break;
      idx[s] = 0;
      if (s == 0) return std::nullopt;
    }
  }
}

WidthProfile min_width_oracle(const TruthTable& f) {
  const uint32_t n = f.n();
  if (n > 12)
    fail(errc::resource_limit, "residual counting capped at 12 variables");
  WidthProfile out;
  out.levels.reserve(n);
  for (uint32_t i = 1; i <= n; ++i) {
    const uint64_t prefixes = uint64_t(1) << i;
    const uint64_t rest = uint64_t(1) << (n - i);
    std::vector<std::vector<uint64_t>> slices;
    slices.reserve(prefixes);
    for (uint64_t q = 0; q < prefixes; ++q) {
      std::vector<uint64_t> s((rest + 63) / 64, 0);
      for (uint64_t t = 0; t < rest; ++t)
        if (f.at((q << (n - i)) | t)) s[t >> 6] |= uint64_t(1) << (t & 63);
      slices.push_back(std::move(s));
    }
    std::sort(slices.begin(), slices.end());
    slices.erase(std::unique(slices.begin(), slices.end()), slices.end());
    out.levels.push_back(uint32_t(slices.size()));
    out.max = std::max(out.max, out.levels.back());
  }
  return out;
}

SweepConfig parse_sweep_config(const std::string& text,
                               const std::string& source) {
  SweepConfig cfg;
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const char* keys[] = {"n_max", "p_max", "w_max", "k_max", "m_max"};
  uint32_t* slots[] = {&cfg.n_max, &cfg.p_max, &cfg.w_max, &cfg.k_max,
                       &cfg.m_max};
  bool seen[5] = {};
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line =
        text.substr(pos, (eol == std::string::npos ? text.size() : eol) - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) die(source, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos)
      die(source, line_no, "value must be an unsigned integer");
    if (val.size() > 9) die(source, line_no, "value out of range");
    int which = -1;
    for (int i = 0; i < 5; ++i)
      if (key == keys[i]) which = i;
    if (which < 0) die(source, line_no, "unknown key '" + key + "'");
    if (seen[which]) die(source, line_no, "repeated key '" + key + "'");
    seen[which] = true;
    *slots[which] = uint32_t(std::stoul(val));
  }
  try {
    check_config(cfg);
  } catch (const Error& e) {
    die(source, line_no, e.what());
  }
  return cfg;
}

SweepReport run_sweep(const SweepConfig& cfg, std::ostream& out) {
  check_config(cfg);
  SweepReport rep;
  SolveOptions opts;
  char buf[80];
  for (uint32_t n = 1; n <= cfg.n_max; ++n) {
    const uint64_t points = uint64_t(1) << n;
    const uint64_t tables = uint64_t(1) << points;
    std::vector<Obdd> targets;
    std::vector<std::string> target_text;
    std::vector<uint8_t> mw(tables);
    targets.reserve(tables);
    target_text.reserve(tables);
    for (uint64_t t = 0; t < tables; ++t) {
      TruthTable tt(n);
      for (uint64_t x = 0; x < points; ++x) tt.set(x, (t >> x) & 1);
      targets.push_back(obdd_from_table(tt));
      target_text.push_back(io::format_obdd(targets.back()));
      mw[t] = uint8_t(min_width_oracle(tt).max);
    }
    for (uint32_t k = 1; k <= cfg.k_max; ++k) {
      std::vector<Circuit> circuits;
      for_each_circuit(
          k, cfg.m_max,
          [&](const Circuit& c) {
            circuits.push_back(c);
            return true;
          },
          /*dedup_tables=*/true);
      for (uint32_t p = 1; p <= cfg.p_max; ++p) {
        std::vector<Obdd> pool = enumerate_obdds(p, n);
        if (std::pow(double(pool.size()), double(k)) > double(1 << 26))
          fail(errc::resource_limit,
               "factor tuple space exceeds the oracle budget");
        std::vector<uint32_t> fmask(pool.size(), 0);
        for (size_t j = 0; j < pool.size(); ++j)
          for (uint64_t x = 0; x < points; ++x)
            if (pool[j].evaluate_index(x)) fmask[j] |= uint32_t(1) << x;
        for (const Circuit& c : circuits) {
          // One exhaustive tuple scan answers every target at once: which
          // output tables occur, and the least reconfiguration width per
          // table (widths by residual counting, not by the solvers' code).
          std::vector<uint8_t> present(tables, 0);
          std::vector<uint8_t> best(tables, 255);
          const uint32_t m = c.size();
          const uint32_t full = uint32_t((uint64_t(1) << points) - 1);
          std::vector<uint32_t> gtab(m);
          std::vector<size_t> idx(k, 0);
          for (;;) {
            for (uint32_t i = 1; i <= m; ++i) {
              const Gate& g = c.gate(i);
              switch (g.kind) {
                case GateKind::input:
                  gtab[i - 1] = fmask[idx[g.a - 1]];
                  break;
                case GateKind::gnot:
                  gtab[i - 1] = ~gtab[g.a - 1] & full;
                  break;
                case GateKind::gand:
                  gtab[i - 1] = gtab[g.a - 1] & gtab[g.b - 1];
                  break;
                case GateKind::gor:
                  gtab[i - 1] = gtab[g.a - 1] | gtab[g.b - 1];
                  break;
              }
            }
            uint8_t rw = 0;
            for (uint32_t i = 0; i < m; ++i) rw = std::max(rw, mw[gtab[i]]);
            uint32_t composed = gtab[m - 1];
            present[composed] = 1;
            best[composed] = std::min(best[composed], rw);
            uint32_t s = k;
            bool done = false;
            while (s > 0) {
              --s;
              if (++idx[s] < pool.size()) break;
              idx[s] = 0;
              if (s == 0) done = true;
            }
            if (done) break;
          }
          std::string ctext = io::format_circuit(c);
          for (uint64_t t = 0; t < tables; ++t) {
            std::string base = target_text[t] + "\n" + ctext + "\np=" +
                               std::to_string(p);
            auto emit = [&](const std::string& tag, bool oracle_yes,
                            bool solver_yes, bool verified) {
              bool match = oracle_yes == solver_yes && (!solver_yes || verified);
              std::snprintf(buf, sizeof buf, "%016llx,%s,%s,%d\n",
                            (unsigned long long)fnv1a(base + tag),
                            oracle_yes ? "YES" : "NO",
                            solver_yes ? "YES" : "NO", match ? 1 : 0);
              out << buf;
              ++rep.instances;
              if (!match) ++rep.mismatches;
            };
            ProblemInstance inst{targets[t], c, p, std::nullopt, {}};
            auto got = decide_decomposition(inst, opts);
            emit("", present[t] != 0, got.has_value(),
                 got && got->verified.ok());
            for (uint32_t w = p + 1; w <= cfg.w_max; ++w) {
              inst.reconfig_bound = w;
              auto got_r = decide_reconfiguration(inst, opts);
              emit("\nw=" + std::to_string(w), present[t] != 0 && best[t] <= w,
                   got_r.has_value(), got_r && got_r->verified.ok());
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace odec
