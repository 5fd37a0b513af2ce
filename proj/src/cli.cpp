// Copyright 2026 The HDE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hde/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hde/io.hpp"

namespace hde {
namespace {

// A verification that ran to completion and failed.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  // run / search
  std::string game_file;
  std::string stability = "ns";
  std::string model = "none";
  std::string coefficient = "1";
  std::string filter;
  bool ir = false;
  std::string initial;
  std::string policy = "random";
  std::optional<std::uint64_t> seed;
  std::size_t max_steps = 100000;
  std::optional<std::size_t> size_cap;
  std::string trace_file;
  std::size_t bound = 0;
  std::size_t max_states = 2'000'000;
  // verify / export
  std::string example;
  std::string scenario_file;
  std::size_t cycles = 2;
  std::string out_file;
  // generate rx3c
  std::size_t t = 1;
  std::string target = "ns_is";
  std::string variant = "resentful";
  std::string family_file;
  std::string witness_file;
  // axioms
  std::string caf = "AS";
  std::string axiom = "ATE";
  std::size_t budget = 10000;
  std::size_t max_n = 6;
  // experiment
  std::size_t n = 20;
  std::size_t games = 20;
  std::string utilities = "uniform";
  double sigma = 10.0;
  std::size_t jobs = 1;
};

std::uint64_t effective_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("HDE_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("HDE_SEED is not an unsigned integer: '") + env + "'");
  }
  return 0;
}

Rational parse_coefficient(const std::string& text) {
  Rational c;
  try {
    c = Rational::parse(text);
  } catch (const std::exception&) {
    throw UsageError("coefficient '" + text + "' is not a rational number");
  }
  if (!(c > Rational(0))) throw UsageError("coefficient must be positive");
  return c;
}

DynamicsRule rule_from(const Options& o) {
  if (o.ir && !o.filter.empty() && o.filter != "ir") {
    throw UsageError("--ir conflicts with --filter " + o.filter);
  }
  DynamicsRule rule;
  rule.kind = parse_kind(o.stability);
  rule.model = PerceptionModel(parse_perception(o.model), parse_coefficient(o.coefficient));
  rule.filter = o.ir ? Filter::kIR : o.filter.empty() ? Filter::kAny : parse_filter(o.filter);
  return rule;
}

Partition initial_from(const Options& o, const Json& game_json, std::size_t n) {
  if (!o.initial.empty()) {
    Json j;
    try {
      j = Json::parse(o.initial);
    } catch (const Json::parse_error& e) {
      throw FormatError(std::string("malformed --initial partition: ") + e.what());
    }
    return partition_from_json(j, n);
  }
  if (game_json.contains("initial")) return partition_from_json(game_json.at("initial"), n);
  return Partition::singletons(n);
}

std::string script_text(const std::vector<Deviation>& script) {
  std::string s;
  for (const auto& d : script) s += (s.empty() ? "" : " ") + to_string(d);
  return s.empty() ? "(empty)" : s;
}

Scenario load_scenario(const Options& o) {
  if (!o.example.empty() && !o.scenario_file.empty()) {
    throw UsageError("--example and --file are mutually exclusive");
  }
  if (!o.scenario_file.empty()) return scenario_from_json(read_json_file(o.scenario_file));
  if (o.example.empty()) {
    std::string list;
    for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("give --example NAME or --file FILE; built-in examples: " + list);
  }
  return builtin(o.example);
}

// ---------------------------------------------------------------------------

int cmd_run(const Options& o, std::ostream& out) {
  const Json gj = read_json_file(o.game_file);
  const Game game = game_from_json(gj);
  const DynamicsRule rule = rule_from(o);
  const Partition start = initial_from(o, gj, game.n());
  Policy policy;
  if (o.policy == "random") {
    policy = Policy::random(effective_seed(o));
  } else if (o.policy == "first") {
    policy = Policy::first();
  } else {
    throw UsageError("unknown policy '" + o.policy + "' (expected random|first)");
  }
  RunLimits limits;
  limits.max_steps = o.max_steps;
  limits.size_cap = o.size_cap;
  limits.record = o.json || !o.trace_file.empty();
  const Trace trace = run(game, initial_state(game, start), rule, policy, limits);

  if (!o.trace_file.empty()) {
    std::ofstream f(o.trace_file);
    if (!f) throw FormatError("cannot write file '" + o.trace_file + "'");
    write_trace_jsonl(f, trace);
  }
  if (o.json) {
    write_trace_jsonl(out, trace);
  } else {
    out << "outcome: " << to_string(trace.outcome) << "\n"
        << "steps: " << trace.steps << "\n"
        << "final partition: " << trace.final_state.partition.to_string() << "\n"
        << "utility digest: " << digest_hex(trace.final_state.utilities) << "\n";
  }
  return kExitOk;
}

// Replays warmup plus `cycles` periods through the validating step function
// and checks that the partition returns at the end of every period.
void replay_cycles(const Scenario& s, std::size_t cycles) {
  DynamicState state = initial_state(s.game, s.initial);
  auto apply = [&](const Deviation& d, std::size_t index) {
    StepResult r = step(s.game, state, d, s.rule);
    if (auto* rej = std::get_if<Rejection>(&r)) {
      throw VerificationFailure("replay step " + std::to_string(index + 1) + " rejected: " + rej->reason);
    }
    state = std::get<DynamicState>(std::move(r));
  };
  std::size_t index = 0;
  for (const auto& d : s.warmup) apply(d, index++);
  const Partition anchor = state.partition;
  for (std::size_t k = 0; k < cycles; ++k) {
    for (const auto& d : s.period) apply(d, index++);
    if (!(state.partition == anchor)) {
      throw VerificationFailure("partition does not repeat after period " + std::to_string(k + 1));
    }
  }
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o);
  if (s.expected == Scenario::Expected::kCycle) {
    const Certification cert = certify_cycle(s.game, s.rule, s.initial, s.warmup, s.period);
    if (!cert.ok()) throw VerificationFailure(s.name + ": certification failed: " + cert.failure);
    const CycleCertificate& c = *cert.certificate;
    const bool deltas_match = c.pair_deltas == s.expected_deltas;
    replay_cycles(s, o.cycles);
    if (o.json) {
      Json j{{"example", s.name},
             {"status", deltas_match ? "certified" : "delta-mismatch"},
             {"deltas_match", deltas_match},
             {"cycles_replayed", o.cycles},
             {"certificate", certificate_to_json(c)}};
      out << j.dump() << "\n";
    } else {
      std::size_t changed = 0;
      for (Agent i = 0; i < s.game.n(); ++i) {
        for (Agent j = 0; j < s.game.n(); ++j) changed += c.pair_deltas(i, j) != Rational(0);
      }
      out << s.name << ": cycle certified\n"
          << "  rule: " << to_string(s.rule.kind) << " / " << to_string(s.rule.model.kind) << " / filter "
          << to_string(s.rule.filter) << "\n"
          << "  warmup t0 = " << c.t0 << ", period p = " << c.period << "\n"
          << "  margins: " << (c.margins_constant ? "identical in both periods" : "non-decreasing across periods")
          << "\n"
          << "  pair deltas per period: " << changed << " entries changed, "
          << (deltas_match ? "match" : "DO NOT match") << " the expected deltas\n"
          << "  replayed " << o.cycles << " periods through the validating step\n";
    }
    if (!deltas_match) throw VerificationFailure(s.name + ": per-period deltas differ from the expected deltas");
    return kExitOk;
  }

  RunLimits limits;
  limits.record = false;
  Trace scripted;
  try {
    scripted = run(s.game, initial_state(s.game, s.initial), s.rule, Policy::scripted(s.script), limits);
  } catch (const ScriptError& e) {
    throw VerificationFailure(s.name + ": " + e.what());
  }
  const Trace first = run(s.game, initial_state(s.game, s.initial), s.rule, Policy::first(), limits);
  const bool ok = scripted.outcome == Outcome::kConverged && first.outcome == Outcome::kConverged;
  if (o.json) {
    out << Json{{"example", s.name},
                {"status", ok ? "converged" : "not-converged"},
                {"scripted", outcome_to_json(scripted)},
                {"first_in_order", outcome_to_json(first)}}
               .dump()
        << "\n";
  } else {
    out << s.name << ": scripted replay " << to_string(scripted.outcome) << " after " << scripted.steps
        << " steps; first-in-order " << to_string(first.outcome) << " after " << first.steps << " steps\n"
        << "  final partition: " << first.final_state.partition.to_string() << "\n";
  }
  if (!ok) throw VerificationFailure(s.name + ": expected convergence");
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o);
  const Json j = scenario_to_json(s);
  if (o.out_file.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_json_file(o.out_file, j);
    if (!o.json) out << "wrote " << s.name << " to " << o.out_file << "\n";
  }
  return kExitOk;
}

Rx3cInstance instance_from(const Options& o) {
  if (o.family_file.empty()) return default_rx3c(o.t);
  const Json j = read_json_file(o.family_file);
  std::vector<Triple> family;
  if (!j.contains("family") || !j.at("family").is_array()) throw FormatError("family file needs a \"family\" array");
  for (const auto& s : j.at("family")) {
    if (!s.is_array() || s.size() != 3) throw FormatError("every set must list exactly 3 elements");
    Triple tr{};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto x = s[k].get<std::int64_t>();
      if (x < 1) throw FormatError("elements are 1-based");
      tr[k] = static_cast<std::size_t>(x - 1);
    }
    family.push_back(tr);
  }
  const std::size_t t = j.contains("t") ? j.at("t").get<std::size_t>() : family.size() / 3;
  return build_rx3c(t, std::move(family));
}

int cmd_generate_rx3c(const Options& o, std::ostream& out) {
  const Rx3cInstance inst = instance_from(o);
  const ReductionOutput r = reduce(inst, parse_target(o.target), parse_variant(o.variant));
  Json gj = game_to_json(r.game);
  gj["k"] = r.k;
  gj["target"] = std::string(to_string(r.target));
  gj["variant"] = std::string(to_string(r.variant));
  gj["stability"] = std::string(to_string(r.rule.kind));
  gj["model"] = model_to_json(r.rule.model);
  gj["labels"] = r.labels;
  if (!o.out_file.empty()) write_json_file(o.out_file, gj);

  Json wj;
  if (!o.witness_file.empty()) {
    const auto cover = find_exact_cover(inst);
    if (!cover) throw VerificationFailure("instance has no exact cover, so there is no witness");
    Json cj = Json::array();
    for (std::size_t s : *cover) cj.push_back(s + 1);
    Json sj = Json::array();
    for (const auto& d : witness(inst, *cover, r)) sj.push_back(deviation_to_json(d));
    wj = Json{{"cover", cj}, {"script", sj}};
    write_json_file(o.witness_file, wj);
  }
  if (o.json) {
    Json j{{"agents", r.game.n()}, {"k", r.k}, {"target", gj["target"]}, {"variant", gj["variant"]}};
    if (o.out_file.empty()) j["game"] = gj;
    if (!wj.is_null()) j["witness"] = wj;
    out << j.dump() << "\n";
  } else {
    out << "agents=" << r.game.n() << "\n" << "k=" << r.k << "\n";
    if (!o.out_file.empty()) out << "wrote game to " << o.out_file << "\n";
    if (!o.witness_file.empty()) out << "wrote witness to " << o.witness_file << "\n";
  }
  return kExitOk;
}

int cmd_search(const Options& o, std::ostream& out) {
  const Json gj = read_json_file(o.game_file);
  const Game game = game_from_json(gj);
  const DynamicsRule rule = rule_from(o);
  const Partition start = initial_from(o, gj, game.n());
  SearchLimits limits{o.bound, o.max_states, o.size_cap};
  const auto script = shortest_sequence(game, initial_state(game, start), rule, limits);
  if (o.json) {
    Json j{{"bound", o.bound}, {"found", script.has_value()}};
    if (script) {
      j["length"] = script->size();
      Json sj = Json::array();
      for (const auto& d : *script) sj.push_back(deviation_to_json(d));
      j["script"] = sj;
    }
    out << j.dump() << "\n";
  } else if (script) {
    out << "shortest converging sequence: " << script->size() << " steps\n" << "  " << script_text(*script) << "\n";
  } else {
    out << "no converging sequence of at most " << o.bound << " steps\n";
  }
  return kExitOk;
}

int cmd_axioms(const Options& o, std::ostream& out) {
  const AxiomVerdict v = check_axiom(parse_caf(o.caf), parse_axiom(o.axiom), o.budget, effective_seed(o), o.max_n);
  if (o.json) {
    out << verdict_to_json(v).dump() << "\n";
    return kExitOk;
  }
  out << to_string(v.caf) << " / " << to_string(v.axiom) << ": ";
  if (v.holds()) {
    out << "no counterexample found in " << v.samples_tried << " samples\n";
  } else {
    const Counterexample& ce = *v.counterexample;
    out << "counterexample after " << v.samples_tried << " samples\n"
        << "  agent " << ce.agent + 1 << ", coalition " << coalition_to_string(ce.coalition);
    if (ce.other) out << ", other agent " << *ce.other + 1;
    out << "\n  axiom requires lhs " << ce.relation << " rhs, found lhs = " << ce.lhs << ", rhs = " << ce.rhs
        << "\n";
  }
  return kExitOk;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.n = o.n;
  cfg.games = o.games;
  cfg.utilities = parse_utility_model(o.utilities);
  cfg.sigma = o.sigma;
  cfg.model = PerceptionModel(parse_perception(o.model), parse_coefficient(o.coefficient));
  cfg.kind = parse_kind(o.stability);
  if (is_group_kind(cfg.kind)) throw UsageError("experiment supports single-agent kinds only");
  cfg.seed = effective_seed(o);
  cfg.max_steps = o.max_steps;
  cfg.jobs = o.jobs;
  const BatchResult result = run_batch(cfg);
  if (!o.out_file.empty()) {
    std::ofstream f(o.out_file);
    if (!f) throw FormatError("cannot write file '" + o.out_file + "'");
    write_csv(f, result);
  }
  if (o.json) {
    Json rows = Json::array();
    for (const auto& r : result.rows) rows.push_back(stats_to_json(r));
    out << Json{{"rows", rows}, {"summary", summary_to_json(result.summary)}}.dump() << "\n";
  } else if (o.out_file.empty()) {
    write_csv(out, result);
  } else {
    const BatchSummary& s = result.summary;
    out << s.converged << "/" << s.games << " converged, " << s.timeouts << " timeouts, mean steps "
        << s.avg_steps.to_decimal(2) << "\nwrote " << o.out_file << "\n";
  }
  return kExitOk;
}

void add_dynamics_flags(CLI::App* sub, Options& o) {
  sub->add_option("--stability", o.stability, "deviation kind: ns|is|cns|cs|scs")->capture_default_str();
  sub->add_option("--model", o.model, "perception: none|resent|appreciation|both|deviator-resent")
      ->capture_default_str();
  sub->add_option("--coefficient", o.coefficient, "change coefficient, p or p/q")->capture_default_str();
  sub->add_flag("--ir", o.ir, "only individually rational deviations");
  sub->add_option("--filter", o.filter, "deviation filter: any|ir|strict-singleton (default any)");
  sub->add_option("--initial", o.initial, "initial partition as JSON, e.g. [[1,2],[3]] (default singletons)");
  sub->add_option("--size-cap", o.size_cap, "largest group considered for cs/scs (default n)");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact engine for hedonic-game dynamics with history-dependent utilities", "hde"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "machine-readable output");

  CLI::App* run_cmd = app.add_subcommand("run", "run dynamics on a game file");
  run_cmd->add_option("--game", o.game_file, "game JSON file")->required();
  add_dynamics_flags(run_cmd, o);
  run_cmd->add_option("--policy", o.policy, "random|first")->capture_default_str();
  run_cmd->add_option("--seed", o.seed, "seed for the random policy (default $HDE_SEED or 0)");
  run_cmd->add_option("--max-steps", o.max_steps, "step cap")->capture_default_str();
  run_cmd->add_option("--trace", o.trace_file, "write the JSON-lines trace to this file");
  run_cmd->add_flag("--json", o.json, "print the JSON-lines trace");

  CLI::App* verify_cmd = app.add_subcommand("verify", "replay and certify a scenario");
  verify_cmd->add_option("--example", o.example, "built-in scenario name");
  verify_cmd->add_option("--file", o.scenario_file, "scenario JSON file (as written by export)");
  verify_cmd->add_option("--cycles", o.cycles, "periods replayed through the validating step")->capture_default_str();
  verify_cmd->add_flag("--json", o.json, "machine-readable output");

  CLI::App* export_cmd = app.add_subcommand("export", "write a scenario as JSON");
  export_cmd->add_option("--example", o.example, "built-in scenario name");
  export_cmd->add_option("--file", o.scenario_file, "scenario JSON file");
  export_cmd->add_option("--out", o.out_file, "output file (default stdout)");
  export_cmd->add_flag("--json", o.json, "suppress the human confirmation line");

  CLI::App* gen_cmd = app.add_subcommand("generate", "generate reduction instances");
  gen_cmd->require_subcommand(1);
  CLI::App* rx3c_cmd = gen_cmd->add_subcommand("rx3c", "game from an exact-cover instance");
  rx3c_cmd->add_option("--t", o.t, "size parameter; the default family is three copies of each block")
      ->capture_default_str();
  rx3c_cmd->add_option("--family", o.family_file, "JSON file {\"t\":t,\"family\":[[1,2,3],...]}");
  rx3c_cmd->add_option("--target", o.target, "ns_is|cns|cs")->capture_default_str();
  rx3c_cmd->add_option("--variant", o.variant, "resentful|appreciative")->capture_default_str();
  rx3c_cmd->add_option("--out", o.out_file, "write the game JSON here");
  rx3c_cmd->add_option("--witness", o.witness_file, "write the exact cover and witness script here");
  rx3c_cmd->add_flag("--json", o.json, "machine-readable output");

  CLI::App* search_cmd = app.add_subcommand("search", "breadth-first search for a shortest converging script");
  search_cmd->add_option("--game", o.game_file, "game JSON file")->required();
  search_cmd->add_option("--bound", o.bound, "maximum script length")->required();
  add_dynamics_flags(search_cmd, o);
  search_cmd->add_option("--max-states", o.max_states, "state budget")->capture_default_str();
  search_cmd->add_flag("--json", o.json, "machine-readable output");

  CLI::App* axioms_cmd = app.add_subcommand("axioms", "falsify an aggregation axiom by sampling");
  axioms_cmd->add_option("--caf", o.caf, "AS|MF")->capture_default_str();
  axioms_cmd->add_option("--axiom", o.axiom, "ATE|IR_ATE|EM|ED|FN|SFD")->capture_default_str();
  axioms_cmd->add_option("--budget", o.budget, "samples")->capture_default_str();
  axioms_cmd->add_option("--seed", o.seed, "seed (default $HDE_SEED or 0)");
  axioms_cmd->add_option("--max-n", o.max_n, "largest sampled agent count")->capture_default_str();
  axioms_cmd->add_flag("--json", o.json, "machine-readable output");

  CLI::App* exp_cmd = app.add_subcommand("experiment", "batch of random NS dynamics");
  exp_cmd->add_option("--n", o.n, "agents per game")->capture_default_str();
  exp_cmd->add_option("--games", o.games, "number of games")->capture_default_str();
  exp_cmd->add_option("--utilities", o.utilities, "uniform|gaussian")->capture_default_str();
  exp_cmd->add_option("--sigma", o.sigma, "gaussian standard deviation")->capture_default_str();
  exp_cmd->add_option("--model", o.model, "none|resent|appreciation|both|deviator-resent")->capture_default_str();
  exp_cmd->add_option("--coefficient", o.coefficient, "change coefficient")->capture_default_str();
  exp_cmd->add_option("--stability", o.stability, "ns|is|cns")->capture_default_str();
  exp_cmd->add_option("--seed", o.seed, "base seed (default $HDE_SEED or 0)");
  exp_cmd->add_option("--max-steps", o.max_steps, "step cap per game")->capture_default_str();
  exp_cmd->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
  exp_cmd->add_option("--out", o.out_file, "CSV output file");
  exp_cmd->add_flag("--json", o.json, "machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    if (export_cmd->parsed()) return cmd_export(o, out);
    if (rx3c_cmd->parsed()) return cmd_generate_rx3c(o, out);
    if (search_cmd->parsed()) return cmd_search(o, out);
    if (axioms_cmd->parsed()) return cmd_axioms(o, out);
    if (exp_cmd->parsed()) return cmd_experiment(o, out);
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitVerificationFailed;
  }
  err << "usage error: no subcommand\n";
  return kExitUsage;
}

}  // namespace hde
