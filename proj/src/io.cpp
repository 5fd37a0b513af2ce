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

#include "hde/io.hpp"

#include <fstream>
#include <ostream>
#include <cstdio>

namespace hde {
namespace {

std::int64_t get_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw FormatError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Agent agent_from_json(const Json& j) {
  const std::int64_t a = get_int(j, "agent id");
  if (a < 1) throw FormatError("agent ids are 1-based, got " + std::to_string(a));
  return static_cast<Agent>(a - 1);
}

Json coalition_to_json(std::span<const Agent> c) {
  Json out = Json::array();
  for (Agent a : c) out.push_back(a + 1);
  return out;
}

Json script_to_json(const std::vector<Deviation>& script) {
  Json out = Json::array();
  for (const auto& d : script) out.push_back(deviation_to_json(d));
  return out;
}

std::vector<Deviation> script_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("a script must be an array of deviations");
  std::vector<Deviation> out;
  for (const auto& d : j) out.push_back(deviation_from_json(d));
  return out;
}

Json kinds_to_json(const KindSet& kinds) {
  Json out = Json::array();
  for (Kind k : kinds.list()) out.push_back(std::string(to_string(k)));
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json vector_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_to_json(x));
  return out;
}

}  // namespace

Json rational_to_json(const Rational& value) {
  if (value.is_integer()) return value.num();
  return Json{{"num", value.num()}, {"den", value.den()}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_object()) {
    const std::int64_t den = get_int(field(j, "den"), "den");
    if (den == 0) throw FormatError("zero denominator");
    return Rational(get_int(field(j, "num"), "num"), den);
  }
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw FormatError(std::string("bad rational string: ") + e.what());
    }
  }
  throw FormatError("a rational must be an integer, \"p/q\" or {\"num\",\"den\"}");
}

Json matrix_to_json(const UtilityMatrix& m) {
  Json rows = Json::array();
  for (Agent i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (Agent j = 0; j < m.size(); ++j) row.push_back(rational_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

UtilityMatrix matrix_from_json(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw FormatError("utilities must be an n x n array");
  UtilityMatrix m(n);
  for (Agent i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw FormatError("utility row " + std::to_string(i + 1) + " must have " + std::to_string(n) + " entries");
    }
    for (Agent k = 0; k < n; ++k) {
      const Rational v = rational_from_json(j[i][k]);
      if (i == k) {
        if (v != Rational(0)) throw FormatError("diagonal entry " + std::to_string(i + 1) + " must be 0");
      } else {
        m.set(i, k, v);
      }
    }
  }
  return m;
}

Json game_to_json(const Game& game) {
  return Json{{"n", game.n()},
              {"caf", std::string(to_string(game.caf()))},
              {"utilities", matrix_to_json(game.initial_utilities())}};
}

Game game_from_json(const Json& j) {
  const std::int64_t n = get_int(field(j, "n"), "n");
  if (n < 1) throw FormatError("n must be at least 1");
  const Json& caf = field(j, "caf");
  if (!caf.is_string()) throw FormatError("caf must be \"AS\" or \"MF\"");
  Caf tag;
  try {
    tag = parse_caf(caf.get<std::string>());
  } catch (const UsageError& e) {
    throw FormatError(e.what());
  }
  return Game(static_cast<std::size_t>(n), tag,
              matrix_from_json(field(j, "utilities"), static_cast<std::size_t>(n)));
}

Json partition_to_json(const Partition& p) {
  Json out = Json::array();
  for (const auto& c : p.coalitions()) out.push_back(coalition_to_json(c));
  return out;
}

Partition partition_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw FormatError("a partition must be an array of agent arrays");
  std::vector<Coalition> cs;
  for (const auto& c : j) {
    if (!c.is_array()) throw FormatError("a coalition must be an array of agent ids");
    Coalition members;
    for (const auto& a : c) members.push_back(agent_from_json(a));
    cs.push_back(std::move(members));
  }
  if (auto diag = validate_partition(cs, n)) throw FormatError("invalid partition: " + *diag);
  return Partition(n, std::move(cs));
}

Json deviation_to_json(const Deviation& d) {
  if (const auto* s = std::get_if<SingleMove>(&d)) {
    Json out{{"type", "single"}, {"agent", s->agent + 1}};
    if (s->target) {
      out["target"] = *s->target + 1;
    } else {
      out["target"] = "new";
    }
    return out;
  }
  return Json{{"type", "group"}, {"members", coalition_to_json(std::get<GroupMove>(d).members)}};
}

Deviation deviation_from_json(const Json& j) {
  const Json& type = field(j, "type");
  if (type == "single") {
    const Agent agent = agent_from_json(field(j, "agent"));
    const Json& target = field(j, "target");
    if (target.is_string() && target == "new") return go_alone(agent);
    const std::int64_t t = get_int(target, "target");
    if (t < 1) throw FormatError("target coalition indices are 1-based");
    return join(agent, static_cast<std::size_t>(t - 1));
  }
  if (type == "group") {
    const Json& members = field(j, "members");
    if (!members.is_array() || members.empty()) throw FormatError("group members must be a non-empty array");
    std::vector<Agent> ms;
    for (const auto& a : members) ms.push_back(agent_from_json(a));
    return group(std::move(ms));
  }
  throw FormatError("deviation type must be \"single\" or \"group\"");
}

Json model_to_json(const PerceptionModel& model) {
  return Json{{"model", std::string(to_string(model.kind))},
              {"coefficient", Json{{"num", model.coefficient.num()}, {"den", model.coefficient.den()}}}};
}

PerceptionModel model_from_json(const Json& j) {
  const Json& name = field(j, "model");
  if (!name.is_string()) throw FormatError("model must be a string");
  try {
    const PerceptionKind kind = parse_perception(name.get<std::string>());
    const Rational c = j.contains("coefficient") ? rational_from_json(j.at("coefficient")) : Rational(1);
    if (!(c > Rational(0))) throw FormatError("coefficient must be positive");
    return PerceptionModel(kind, c);
  } catch (const UsageError& e) {
    throw FormatError(e.what());
  }
}

Json scenario_to_json(const Scenario& s) {
  Json out{{"name", s.name},
           {"description", s.description},
           {"expected", s.expected == Scenario::Expected::kCycle ? "cycle" : "converges"},
           {"agents", s.agent_names},
           {"game", game_to_json(s.game)},
           {"model", model_to_json(s.rule.model)},
           {"stability", std::string(to_string(s.rule.kind))},
           {"filter", std::string(to_string(s.rule.filter))},
           {"initial", partition_to_json(s.initial)}};
  if (s.expected == Scenario::Expected::kCycle) {
    out["warmup"] = script_to_json(s.warmup);
    out["period"] = script_to_json(s.period);
    out["expected_deltas"] = matrix_to_json(s.expected_deltas);
  } else {
    out["script"] = script_to_json(s.script);
  }
  return out;
}

Scenario scenario_from_json(const Json& j) {
  Game game = game_from_json(field(j, "game"));
  const std::size_t n = game.n();
  DynamicsRule rule;
  try {
    rule.kind = parse_kind(field(j, "stability").get<std::string>());
    rule.filter = j.contains("filter") ? parse_filter(j.at("filter").get<std::string>()) : Filter::kAny;
  } catch (const UsageError& e) {
    throw FormatError(e.what());
  }
  rule.model = model_from_json(field(j, "model"));
  const std::string expected = field(j, "expected").get<std::string>();
  if (expected != "cycle" && expected != "converges") throw FormatError("expected must be cycle or converges");
  Scenario s{j.value("name", std::string("custom")),
             j.value("description", std::string()),
             game,
             rule,
             partition_from_json(field(j, "initial"), n),
             {},
             {},
             {},
             expected == "cycle" ? Scenario::Expected::kCycle : Scenario::Expected::kConverges,
             {},
             UtilityMatrix(n)};
  if (j.contains("agents")) s.agent_names = j.at("agents").get<std::vector<std::string>>();
  if (s.expected == Scenario::Expected::kCycle) {
    if (j.contains("warmup")) s.warmup = script_from_json(j.at("warmup"));
    s.period = script_from_json(field(j, "period"));
    if (j.contains("expected_deltas")) s.expected_deltas = matrix_from_json(j.at("expected_deltas"), n);
  } else {
    s.script = script_from_json(field(j, "script"));
  }
  return s;
}

Json outcome_to_json(const Trace& trace) {
  return Json{{"outcome", std::string(to_string(trace.outcome))},
              {"steps", trace.steps},
              {"partition", partition_to_json(trace.final_state.partition)},
              {"utility_digest", digest_hex(trace.final_state.utilities)}};
}

void write_trace_jsonl(std::ostream& out, const Trace& trace) {
  for (const auto& r : trace.records) {
    Json line{{"t", r.t},
              {"deviation", deviation_to_json(r.deviation)},
              {"kinds", kinds_to_json(r.classification.kinds)},
              {"ir", r.classification.ir},
              {"utility_digest", hex64(r.digest)}};
    out << line.dump() << '\n';
  }
  out << outcome_to_json(trace).dump() << '\n';
}

Json certificate_to_json(const CycleCertificate& c) {
  Json evidence = Json::array();
  for (std::size_t l = 0; l < c.evidence.size(); ++l) {
    Json ineqs = Json::array();
    const auto& e = c.evidence[l];
    for (std::size_t k = 0; k < e.first.size(); ++k) {
      ineqs.push_back(Json{{"label", e.first[k].label},
                           {"strict", e.first[k].strict},
                           {"period1", rational_to_json(e.first[k].margin)},
                           {"period2", rational_to_json(e.second[k].margin)}});
    }
    evidence.push_back(Json{{"step", l + 1}, {"deviation", deviation_to_json(c.script[l])}, {"margins", ineqs}});
  }
  return Json{{"t0", c.t0},
              {"period", c.period},
              {"margins_constant", c.margins_constant},
              {"pair_deltas", matrix_to_json(c.pair_deltas)},
              {"script", script_to_json(c.script)},
              {"evidence", evidence}};
}

Json verdict_to_json(const AxiomVerdict& v) {
  Json out{{"axiom", std::string(to_string(v.axiom))},
           {"caf", std::string(to_string(v.caf))},
           {"samples_tried", v.samples_tried}};
  if (!v.counterexample) {
    out["result"] = "no-counterexample-found";
    return out;
  }
  const Counterexample& ce = *v.counterexample;
  Json rec{{"n", ce.n},
           {"agent", ce.agent + 1},
           {"coalition", coalition_to_json(ce.coalition)},
           {"utilities", vector_to_json(ce.utilities)},
           {"relation", ce.relation},
           {"lhs", rational_to_json(ce.lhs)},
           {"rhs", rational_to_json(ce.rhs)}};
  if (ce.other) rec["other"] = *ce.other + 1;
  if (ce.modified) rec["modified"] = vector_to_json(*ce.modified);
  out["result"] = "counterexample";
  out["counterexample"] = rec;
  return out;
}

Json stats_to_json(const OutcomeStats& s) {
  return Json{{"seed", s.seed},
              {"outcome", s.timed_out() ? "timeout" : std::string(to_string(s.outcome))},
              {"steps", s.steps},
              {"coalitions", s.coalitions},
              {"avg_size", s.avg_size.to_decimal(4)},
              {"max_size", s.max_size},
              {"ir_violations", s.ir_violations},
              {"ns_deviators", s.ns_deviators},
              {"avg_utility", s.avg_utility.to_decimal(4)},
              {"avg_change", s.avg_change.to_decimal(4)},
              {"positive_fraction", s.positive_fraction.to_decimal(4)}};
}

Json summary_to_json(const BatchSummary& s) {
  return Json{{"games", s.games},
              {"converged", s.converged},
              {"timeouts", s.timeouts},
              {"all_singleton", s.all_singleton},
              {"avg_steps", s.avg_steps.to_decimal(2)},
              {"avg_coalitions", s.avg_coalitions.to_decimal(4)},
              {"avg_size", s.avg_size.to_decimal(4)},
              {"avg_max_size", s.avg_max_size.to_decimal(4)},
              {"avg_ir_violations", s.avg_ir_violations.to_decimal(4)},
              {"avg_ns_deviators", s.avg_ns_deviators.to_decimal(4)},
              {"avg_utility", s.avg_utility.to_decimal(4)},
              {"avg_change", s.avg_change.to_decimal(4)},
              {"positive_fraction", s.positive_fraction.to_decimal(4)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write file '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace hde
