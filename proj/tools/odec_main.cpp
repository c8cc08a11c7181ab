// Command-line front end. Talks to the library exclusively through the C
// interface in odec.h; all C++ types here are standard-library only.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "odec.h"

namespace {

using nlohmann::json;

// Exit codes: 0 yes/success, 1 sound no, 2 error or resource limit.
constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(kExitError);
}

// Consumes and reports a C-layer error when one is set.
void check(char* err) {
  if (err == nullptr) return;
  std::string msg = err;
  odec_free(err);
  die(msg);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string take_string(char* s) {
  std::string out = s;
  odec_free(s);
  return out;
}

odec_obdd_t* load_obdd(const std::string& path) {
  char* err = nullptr;
  odec_obdd_t* d = odec_obdd_parse(read_file(path).c_str(), path.c_str(),
                                   &err);
  check(err);
  return d;
}

odec_circuit_t* load_circuit(const std::string& path) {
  char* err = nullptr;
  odec_circuit_t* c =
      odec_circuit_parse(read_file(path).c_str(), path.c_str(), &err);
  check(err);
  return c;
}

// A class is either a file path or builtin:validity:<w>.
odec_automaton_t* load_class(const std::string& spec) {
  char* err = nullptr;
  odec_automaton_t* a = nullptr;
  const std::string prefix = "builtin:validity:";
  if (spec.rfind(prefix, 0) == 0) {
    uint32_t w = 0;
    try {
      w = uint32_t(std::stoul(spec.substr(prefix.size())));
    } catch (const std::exception&) {
      die("bad class specifier: " + spec);
    }
    a = odec_automaton_validity(w, &err);
  } else {
    a = odec_automaton_parse(read_file(spec).c_str(), spec.c_str(), &err);
  }
  check(err);
  return a;
}

struct DecisionFlags {
  std::vector<std::string> class_specs;
  uint32_t max_width = 64;
  uint64_t scan_limit = 1000000;
  bool syntactic_class = false;
  bool verify = false;
};

void add_solver_flags(CLI::App* cmd, DecisionFlags* f) {
  cmd->add_option("--class", f->class_specs,
                  "class automaton: file path or builtin:validity:<w>; give "
                  "once to replicate, or once per circuit input");
  cmd->add_option("--max-width", f->max_width,
                  "abort when the effective reconfiguration bound exceeds "
                  "this");
  cmd->add_option("--scan-limit", f->scan_limit,
                  "candidate cap for bounded-width scans");
  cmd->add_flag("--syntactic-class", f->syntactic_class,
                "class automata must accept the factor encodings themselves, "
                "not just their functions");
  cmd->add_flag("--verify", f->verify,
                "print the witness re-check summary and per-gate widths");
}

std::vector<odec_automaton_t*> load_classes(
    const std::vector<std::string>& specs) {
  std::vector<odec_automaton_t*> out;
  out.reserve(specs.size());
  for (const std::string& s : specs) out.push_back(load_class(s));
  return out;
}

odec_options_t* build_options(const DecisionFlags& f) {
  odec_options_t* o = odec_options_create();
  odec_options_set_max_width(o, f.max_width);
  odec_options_set_scan_limit(o, f.scan_limit);
  odec_options_set_syntactic_class(o, f.syntactic_class ? 1 : 0);
  return o;
}

json stats_json(const odec_stats_t& stats, int64_t wall_ms) {
  json j{{"states_explored", stats.states_explored},
         {"levels", stats.levels},
         {"wall_ms", wall_ms}};
  if (stats.died_level >= 0) j["died_level"] = stats.died_level;
  return j;
}

json witness_json(const odec_witness_t* w) {
  json factors = json::array();
  for (size_t i = 0; i < odec_witness_factor_count(w); ++i) {
    odec_obdd_t* f = odec_witness_factor(w, i);
    factors.push_back(take_string(odec_obdd_format(f)));
    odec_obdd_destroy(f);
  }
  return json{{"k", odec_witness_factor_count(w)},
              {"reconfig_width", odec_witness_reconfig_width(w)},
              {"verified", odec_witness_verified(w) != 0},
              {"factors", factors}};
}

void print_verification(const odec_witness_t* w) {
  std::cout << "verified: " << (odec_witness_verified(w) != 0 ? "yes" : "NO")
            << ", " << odec_witness_inputs_checked(w)
            << " inputs checked pointwise\n";
  std::cout << "gate widths:";
  for (size_t i = 0; i < odec_witness_gate_count(w); ++i)
    std::cout << " " << odec_witness_gate_width(w, i);
  std::cout << "\n";
}

// Shared yes/no reporting for decompose, reconfig and genjunta. Returns the
// process exit code.
int report_decision(odec_witness_t* w, const odec_stats_t& stats,
                    int64_t wall_ms, bool json_out, bool verify,
                    odec_circuit_t* found_circuit) {
  if (json_out) {
    json j{{"answer", w != nullptr ? "YES" : "NO"},
           {"stats", stats_json(stats, wall_ms)}};
    if (w != nullptr) j["witness"] = witness_json(w);
    if (found_circuit != nullptr)
      j["circuit"] = take_string(odec_circuit_format(found_circuit));
    std::cout << j.dump(2) << "\n";
  } else if (w != nullptr) {
    std::cout << "YES\n";
    if (found_circuit != nullptr)
      std::cout << take_string(odec_circuit_format(found_circuit));
    std::cout << take_string(odec_witness_format(w));
    if (verify) print_verification(w);
  } else {
    std::cout << "NO\n";
    if (stats.died_level >= 0)
      std::cout << "died at level " << stats.died_level << "\n";
  }
  int code = w != nullptr ? kExitYes : kExitNo;
  if (w != nullptr) odec_witness_destroy(w);
  if (found_circuit != nullptr) odec_circuit_destroy(found_circuit);
  return code;
}

int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"width-bounded decomposition of OBDD-encoded boolean "
               "functions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(odec_version()));

  bool json_out = false;
  uint64_t seed = 0;
  app.add_flag("--json", json_out, "machine-readable result envelope");
  app.add_option("--seed", seed,
                 "seed echoed into the result envelope; decision commands "
                 "are deterministic and ignore it")
      ->capture_default_str();

  // canon
  std::string canon_file;
  bool canon_dot = false;
  CLI::App* canon = app.add_subcommand(
      "canon", "print the canonical minimum-width form of an OBDD");
  canon->add_option("file", canon_file, "OBDD file")->required();
  canon->add_flag("--dot", canon_dot,
                  "emit the transition graph in dot form instead");

  // eval
  std::string eval_file, eval_bits;
  CLI::App* eval =
      app.add_subcommand("eval", "run an input through an OBDD");
  eval->add_option("file", eval_file, "OBDD file")->required();
  eval->add_option("bits", eval_bits, "input string over 0/1")->required();

  // apply
  std::string apply_op, apply_a, apply_b;
  CLI::App* apply = app.add_subcommand(
      "apply", "combine OBDDs pointwise: and/or take two files, not takes "
               "one");
  apply->add_option("op", apply_op, "and | or | not")->required();
  apply->add_option("a", apply_a, "first OBDD file")->required();
  apply->add_option("b", apply_b, "second OBDD file");

  // equiv
  std::string equiv_a, equiv_b;
  CLI::App* equiv = app.add_subcommand(
      "equiv", "decide whether two OBDDs compute the same function");
  equiv->add_option("a", equiv_a, "first OBDD file")->required();
  equiv->add_option("b", equiv_b, "second OBDD file")->required();

  // junta
  std::string junta_target;
  uint32_t junta_k = 0;
  CLI::App* junta = app.add_subcommand(
      "junta", "decide whether the function depends on at most k variables");
  junta->add_option("--target", junta_target, "OBDD file")->required();
  junta->add_option("--k", junta_k, "variable budget")->required();

  // decompose
  std::string dec_target, dec_circuit;
  uint32_t dec_p = 1;
  DecisionFlags dec_flags;
  CLI::App* decompose = app.add_subcommand(
      "decompose",
      "decide whether the target splits into width-p factors combined by "
      "the circuit");
  decompose->add_option("--target", dec_target, "target OBDD file")
      ->required();
  decompose->add_option("--circuit", dec_circuit, "circuit file")->required();
  decompose->add_option("--p", dec_p, "factor width bound")->required();
  add_solver_flags(decompose, &dec_flags);

  // reconfig
  std::string rec_target, rec_circuit;
  uint32_t rec_p = 1, rec_w = 2;
  DecisionFlags rec_flags;
  CLI::App* reconfig = app.add_subcommand(
      "reconfig",
      "decomposition with every gate function's width capped by w");
  reconfig->add_option("--target", rec_target, "target OBDD file")
      ->required();
  reconfig->add_option("--circuit", rec_circuit, "circuit file")->required();
  reconfig->add_option("--p", rec_p, "factor width bound")->required();
  reconfig->add_option("--w", rec_w, "reconfiguration width bound")
      ->required();
  add_solver_flags(reconfig, &rec_flags);

  // genjunta
  std::string gj_target;
  uint32_t gj_k = 1, gj_p = 1, gj_m = 4;
  DecisionFlags gj_flags;
  CLI::App* genjunta = app.add_subcommand(
      "genjunta",
      "search for any k-input circuit (up to m gates) admitting a width-p "
      "decomposition");
  genjunta->add_option("--target", gj_target, "target OBDD file")->required();
  genjunta->add_option("--k", gj_k, "circuit input count")->required();
  genjunta->add_option("--p", gj_p, "factor width bound")->required();
  genjunta->add_option("--m-max", gj_m, "gate budget")
      ->capture_default_str();
  add_solver_flags(genjunta, &gj_flags);

  // factorize
  std::string fac_target;
  uint32_t fac_k = 2;
  DecisionFlags fac_flags;
  CLI::App* factorize = app.add_subcommand(
      "factorize",
      "split the target into k strictly narrower conjunctive factors");
  factorize->add_option("--target", fac_target, "target OBDD file")
      ->required();
  factorize->add_option("--k", fac_k, "factor count")->capture_default_str();
  factorize->add_option("--max-width", fac_flags.max_width,
                        "abort above this effective bound");
  factorize->add_option("--scan-limit", fac_flags.scan_limit,
                        "candidate cap for bounded-width scans");

  // oracle
  std::string sweep_config;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "cross-check the solver against the brute-force oracle");
  CLI::App* sweep = oracle->add_subcommand(
      "sweep", "run every instance of a small parameter grid");
  sweep->add_option("config", sweep_config, "sweep configuration file")
      ->required();
  oracle->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  if (*canon) {
    odec_obdd_t* d = load_obdd(canon_file);
    char* err = nullptr;
    odec_obdd_t* c = odec_obdd_canonicalize(d, &err);
    check(err);
    std::string text = canon_dot ? take_string(odec_obdd_dot(c))
                                 : take_string(odec_obdd_format(c));
    if (json_out && !canon_dot) {
      json j{{"answer", "YES"},
             {"canonical", text},
             {"width", odec_obdd_width(c)},
             {"length", odec_obdd_length(c)}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << text;
    }
    odec_obdd_destroy(c);
    odec_obdd_destroy(d);
    return kExitYes;
  }

  if (*eval) {
    odec_obdd_t* d = load_obdd(eval_file);
    char* err = nullptr;
    int out = 0;
    if (odec_obdd_evaluate(d, eval_bits.c_str(), &out, &err) != 0) check(err);
    odec_obdd_destroy(d);
    if (json_out) {
      json j{{"answer", out != 0 ? "YES" : "NO"}, {"value", out}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << out << "\n";
    }
    return out != 0 ? kExitYes : kExitNo;
  }

  if (*apply) {
    int op;
    if (apply_op == "and")
      op = 0;
    else if (apply_op == "or")
      op = 1;
    else if (apply_op == "not")
      op = 2;
    else
      die("unknown operation: " + apply_op);
    if (op != 2 && apply_b.empty()) die(apply_op + " needs two operands");
    if (op == 2 && !apply_b.empty()) die("not takes one operand");
    odec_obdd_t* a = load_obdd(apply_a);
    odec_obdd_t* b = apply_b.empty() ? nullptr : load_obdd(apply_b);
    char* err = nullptr;
    odec_obdd_t* r = odec_obdd_apply(op, a, b, &err);
    check(err);
    std::cout << take_string(odec_obdd_format(r));
    odec_obdd_destroy(r);
    if (b != nullptr) odec_obdd_destroy(b);
    odec_obdd_destroy(a);
    return kExitYes;
  }

  if (*equiv) {
    odec_obdd_t* a = load_obdd(equiv_a);
    odec_obdd_t* b = load_obdd(equiv_b);
    char* err = nullptr;
    int same = odec_obdd_equivalent(a, b, &err);
    check(err);
    odec_obdd_destroy(b);
    odec_obdd_destroy(a);
    if (json_out) {
      json j{{"answer", same != 0 ? "YES" : "NO"}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << (same != 0 ? "YES" : "NO") << "\n";
    }
    return same != 0 ? kExitYes : kExitNo;
  }

  if (*junta) {
    odec_obdd_t* d = load_obdd(junta_target);
    char* err = nullptr;
    uint32_t* vars = nullptr;
    size_t count = 0;
    if (odec_obdd_junta(d, &vars, &count, &err) != 0) check(err);
    odec_obdd_destroy(d);
    bool yes = count <= junta_k;
    if (json_out) {
      json vlist = json::array();
      for (size_t i = 0; i < count; ++i) vlist.push_back(vars[i]);
      json j{{"answer", yes ? "YES" : "NO"}, {"variables", vlist}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << (yes ? "YES" : "NO") << "\n";
      std::cout << "variables:";
      for (size_t i = 0; i < count; ++i) std::cout << " " << vars[i];
      std::cout << "\n";
    }
    odec_free(vars);
    return yes ? kExitYes : kExitNo;
  }

  if (*decompose || *reconfig) {
    const bool is_rec = bool(*reconfig);
    const DecisionFlags& flags = is_rec ? rec_flags : dec_flags;
    odec_obdd_t* target = load_obdd(is_rec ? rec_target : dec_target);
    odec_circuit_t* circuit = load_circuit(is_rec ? rec_circuit : dec_circuit);
    std::vector<odec_automaton_t*> classes = load_classes(flags.class_specs);
    odec_options_t* opts = build_options(flags);
    odec_stats_t stats{};
    char* err = nullptr;
    auto t0 = std::chrono::steady_clock::now();
    odec_witness_t* w =
        is_rec ? odec_decide_reconfiguration(
                     target, circuit, rec_p, rec_w,
                     classes.empty() ? nullptr : classes.data(),
                     classes.size(), opts, &stats, &err)
               : odec_decide_decomposition(
                     target, circuit, dec_p,
                     classes.empty() ? nullptr : classes.data(),
                     classes.size(), opts, &stats, &err);
    int64_t ms = elapsed_ms(t0);
    check(err);
    odec_options_destroy(opts);
    for (odec_automaton_t* a : classes) odec_automaton_destroy(a);
    odec_circuit_destroy(circuit);
    odec_obdd_destroy(target);
    return report_decision(w, stats, ms, json_out, flags.verify, nullptr);
  }

  if (*genjunta) {
    odec_obdd_t* target = load_obdd(gj_target);
    std::vector<odec_automaton_t*> classes =
        load_classes(gj_flags.class_specs);
    odec_options_t* opts = build_options(gj_flags);
    odec_stats_t stats{};
    char* err = nullptr;
    odec_circuit_t* found = nullptr;
    auto t0 = std::chrono::steady_clock::now();
    odec_witness_t* w = odec_decide_generalized_junta(
        target, gj_k, gj_p, gj_m,
        classes.empty() ? nullptr : classes.data(), classes.size(), opts,
        &stats, &found, &err);
    int64_t ms = elapsed_ms(t0);
    check(err);
    odec_options_destroy(opts);
    for (odec_automaton_t* a : classes) odec_automaton_destroy(a);
    odec_obdd_destroy(target);
    return report_decision(w, stats, ms, json_out, gj_flags.verify, found);
  }

  if (*factorize) {
    odec_obdd_t* target = load_obdd(fac_target);
    odec_options_t* opts = build_options(fac_flags);
    odec_stats_t stats{};
    char* err = nullptr;
    size_t count = 0;
    auto t0 = std::chrono::steady_clock::now();
    odec_obdd_t** factors =
        odec_factorize(target, fac_k, opts, &stats, &count, &err);
    int64_t ms = elapsed_ms(t0);
    check(err);
    odec_options_destroy(opts);
    odec_obdd_destroy(target);
    if (json_out) {
      json j{{"answer", factors != nullptr ? "YES" : "NO"},
             {"stats", stats_json(stats, ms)}};
      if (factors != nullptr) {
        json flist = json::array();
        for (size_t i = 0; i < count; ++i)
          flist.push_back(take_string(odec_obdd_format(factors[i])));
        j["witness"] = json{{"k", count}, {"factors", flist}};
      }
      std::cout << j.dump(2) << "\n";
    } else if (factors != nullptr) {
      std::cout << "YES\n";
      for (size_t i = 0; i < count; ++i) {
        std::cout << "factor " << (i + 1) << "/" << count << ":\n"
                  << take_string(odec_obdd_format(factors[i]));
      }
    } else {
      std::cout << "NO\n";
      if (stats.died_level >= 0)
        std::cout << "died at level " << stats.died_level << "\n";
    }
    int code = factors != nullptr ? kExitYes : kExitNo;
    for (size_t i = 0; i < count; ++i) odec_obdd_destroy(factors[i]);
    odec_free(factors);
    return code;
  }

  if (*oracle) {
    std::string config = read_file(sweep_config);
    char* err = nullptr;
    char* report = nullptr;
    uint64_t instances = 0, mismatches = 0;
    auto t0 = std::chrono::steady_clock::now();
    int rc = odec_oracle_sweep(config.c_str(), sweep_config.c_str(), &report,
                               &instances, &mismatches, &err);
    int64_t ms = elapsed_ms(t0);
    if (rc != 0) check(err);
    if (json_out) {
      json j{{"answer", mismatches == 0 ? "YES" : "NO"},
             {"instances", instances},
             {"mismatches", mismatches},
             {"stats", json{{"wall_ms", ms}}}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << take_string(report);
      report = nullptr;
      std::cerr << "instances=" << instances << " mismatches=" << mismatches
                << "\n";
    }
    if (report != nullptr) odec_free(report);
    return mismatches == 0 ? kExitYes : kExitNo;
  }

  return kExitError;  // unreachable: a subcommand is required
}
