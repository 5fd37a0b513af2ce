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

#include "hde/scenarios.hpp"

#include <functional>
#include <map>

namespace hde {
namespace {

using Row = std::vector<std::int64_t>;

// Matrix from rows that skip the diagonal, i.e. row i lists u_i(j) for j != i
// in agent order.
UtilityMatrix off_diagonal(const std::vector<Row>& rows) {
  const std::size_t n = rows.size();
  UtilityMatrix u(n);
  for (Agent i = 0; i < n; ++i) {
    if (rows[i].size() != n - 1) throw ContractError("utility row has the wrong length");
    std::size_t k = 0;
    for (Agent j = 0; j < n; ++j) {
      if (j != i) u.set(i, j, Rational(rows[i][k++]));
    }
  }
  return u;
}

struct Edge {
  Agent from;
  Agent to;
  std::int64_t value;
};

UtilityMatrix from_edges(std::size_t n, const std::vector<Edge>& edges) {
  UtilityMatrix u(n);
  for (const Edge& e : edges) u.set(e.from, e.to, Rational(e.value));
  return u;
}

UtilityMatrix uniform_deltas(std::size_t n, std::int64_t value) {
  UtilityMatrix u(n);
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      if (i != j) u.set(i, j, Rational(value));
    }
  }
  return u;
}

Partition part(std::size_t n, std::vector<Coalition> cs) { return Partition(n, std::move(cs)); }

// ---------------------------------------------------------------------------

Scenario run_and_chase() {
  enum : Agent { kAlice, kBob };
  Game game(2, Caf::kAS, off_diagonal({{-1}, {1}}));
  Partition start = Partition::singletons(2);
  ScriptBuilder b(start);
  b.join(kBob, kAlice).alone(kAlice);
  return Scenario{"run_and_chase",
                  "Alice wants to be alone, Bob wants Alice; resent makes Bob give up",
                  game,
                  {Kind::kNS, PerceptionModel(PerceptionKind::kResent), Filter::kAny},
                  start,
                  {},
                  {},
                  b.take(),
                  Scenario::Expected::kConverges,
                  {"Alice", "Bob"},
                  UtilityMatrix(2)};
}

Scenario mf_violates_ate() {
  enum : Agent { a, b, c };
  // u_c is irrelevant to the example and left at 0.
  Game game(3, Caf::kMF, off_diagonal({{-1, -3}, {1, -1}, {0, 0}}));
  Partition start = Partition::grand(3);
  ScriptBuilder s(start);
  s.alone(a).join(b, a).alone(a);
  return Scenario{"mf_violates_ate",
                  "removing an enemy lowers an MF value: MF_a({a,b,c}) = -2 > -3 = MF_a({a,c})",
                  game,
                  {Kind::kNS, PerceptionModel(PerceptionKind::kResent), Filter::kAny},
                  start,
                  {},
                  {},
                  s.take(),
                  Scenario::Expected::kConverges,
                  {"a", "b", "c"},
                  UtilityMatrix(3)};
}

// Agent order for the six-agent MFHG tables: a, a', b, b', c, c'.
enum : Agent { kA, kA2, kB, kB2, kC, kC2 };
const std::vector<std::string> kPrimedNames = {"a", "a'", "b", "b'", "c", "c'"};

Scenario mfhg_resent_ns() {
  Game game(6, Caf::kMF,
            off_diagonal({{20, 10, 230, 0, 230},
                          {110, 30, 120, 30, 100},
                          {0, 230, 20, 10, 230},
                          {30, 100, 110, 30, 120},
                          {10, 230, 0, 230, 20},
                          {30, 120, 30, 100, 110}}));
  Partition start = part(6, {{kB2, kA2}, {kA}, {kC2, kC, kB}});
  ScriptBuilder s(start);
  s.join(kB, kA2).join(kC, kA2).join(kA2, kC2).join(kA2, kA).join(kC, kA).join(kB2, kC2);
  s.join(kC, kC2).join(kA, kC2).join(kB2, kA2).join(kB2, kB).join(kA, kB).join(kC2, kA2);
  s.join(kA, kA2).join(kB, kA2).join(kC2, kB2).join(kC2, kC).join(kB, kC).join(kA2, kB2);
  return Scenario{"mfhg_resent_ns",
                  "NS dynamics cycle in an MFHG with resentful agents (18-step period)",
                  game,
                  {Kind::kNS, PerceptionModel(PerceptionKind::kResent), Filter::kAny},
                  start,
                  {},
                  s.take(),
                  {},
                  Scenario::Expected::kCycle,
                  kPrimedNames,
                  uniform_deltas(6, -1)};
}

Scenario mfhg_apprec_ns() {
  Game game(6, Caf::kMF,
            off_diagonal({{110, 120, -100, 130, -100},
                          {20, 100, 10, 100, 30},
                          {130, -100, 110, 120, -100},
                          {100, 30, 20, 100, 10},
                          {120, -100, 130, -100, 110},
                          {100, 10, 100, 30, 20}}));
  Partition start = part(6, {{kB2}, {kA, kA2}, {kB, kC, kC2}});
  ScriptBuilder s(start);
  s.join(kB, kA).join(kC2, kB2).join(kC2, kA).join(kB, kB2).join(kA, kB2).join(kC2, kC);
  s.join(kA, kC).join(kB2, kA2).join(kB2, kC).join(kA, kA2).join(kC, kA2).join(kB2, kB);
  s.join(kC, kB).join(kA2, kC2).join(kA2, kB).join(kC, kC2).join(kB, kC).join(kA2, kA);
  return Scenario{"mfhg_apprec_ns",
                  "individually rational NS dynamics cycle in an MFHG with appreciative agents",
                  game,
                  {Kind::kNS, PerceptionModel(PerceptionKind::kAppreciation), Filter::kIR},
                  start,
                  {},
                  s.take(),
                  {},
                  Scenario::Expected::kCycle,
                  kPrimedNames,
                  uniform_deltas(6, 1)};
}

Scenario core_apprec_3cycle() {
  enum : Agent { a, b, c };
  Game game(3, Caf::kAS, from_edges(3, {{a, b, 4}, {b, c, 4}, {c, a, 4},
                                        {a, c, 1}, {b, a, 1}, {c, b, 1}}));
  Partition start = Partition::singletons(3);
  ScriptBuilder w(start);
  w.group({a, b});
  ScriptBuilder p(w.partition());
  p.group({b, c}).group({a, c}).group({a, b});
  return Scenario{"core_apprec_3cycle",
                  "individually rational CS dynamics cycle with appreciative agents",
                  game,
                  {Kind::kCS, PerceptionModel(PerceptionKind::kAppreciation), Filter::kIR},
                  start,
                  w.take(),
                  p.take(),
                  {},
                  Scenario::Expected::kCycle,
                  {"a", "b", "c"},
                  uniform_deltas(3, 1)};
}

Scenario devresent_ns_runchase() {
  enum : Agent { a, b };
  Game game(2, Caf::kAS, off_diagonal({{1}, {-1}}));
  Partition start = Partition::singletons(2);
  ScriptBuilder s(start);
  s.join(a, b).alone(b);
  return Scenario{"devresent_ns_runchase",
                  "deviator-resent keeps the run-and-chase NS cycle alive",
                  game,
                  {Kind::kNS, PerceptionModel(PerceptionKind::kDeviatorResent), Filter::kAny},
                  start,
                  {},
                  s.take(),
                  {},
                  Scenario::Expected::kCycle,
                  {"a", "b"},
                  from_edges(2, {{b, a, -1}})};
}

Scenario devresent_cns_ir_3cycle() {
  enum : Agent { a, b, c };
  Game game(3, Caf::kAS, from_edges(3, {{a, b, 0}, {b, c, 0}, {c, a, 0},
                                        {b, a, -1}, {c, b, -1}, {a, c, -1}}));
  Partition start = part(3, {{a, b}, {c}});
  ScriptBuilder s(start);
  s.join(b, c).join(c, a).join(a, b);
  return Scenario{"devresent_cns_ir_3cycle",
                  "individually rational CNS dynamics cycle with deviator-resentful agents",
                  game,
                  {Kind::kCNS, PerceptionModel(PerceptionKind::kDeviatorResent), Filter::kIR},
                  start,
                  {},
                  s.take(),
                  {},
                  Scenario::Expected::kCycle,
                  {"a", "b", "c"},
                  from_edges(3, {{b, a, -1}, {c, b, -1}, {a, c, -1}})};
}

// Six-agent MFHG of the deviator-resent figure: a, b, c and alpha, beta, gamma.
enum : Agent { kFa, kFb, kFc, kAlpha, kBeta, kGamma };
const std::vector<std::string> kGreekNames = {"a", "b", "c", "alpha", "beta", "gamma"};

Game devresent_figure_game() {
  return Game(6, Caf::kMF,
              from_edges(6, {{kFa, kFb, 7},       {kFb, kFa, 3},       {kFb, kFc, 7},
                             {kFc, kFb, 3},       {kFc, kFa, 7},       {kFa, kFc, 3},
                             {kFb, kAlpha, 3},    {kFb, kBeta, 1},     {kFc, kBeta, 3},
                             {kFc, kGamma, 1},    {kFa, kGamma, 3},    {kFa, kAlpha, 1},
                             {kAlpha, kFb, 1},    {kAlpha, kFa, 1},    {kBeta, kFb, 1},
                             {kBeta, kFc, 1},     {kGamma, kFa, 1},    {kGamma, kFc, 1}}));
}

// Entries labelled "-x" in the figure.
UtilityMatrix devresent_figure_deltas() {
  return from_edges(6, {{kFb, kFa, -1}, {kFc, kFb, -1}, {kFa, kFc, -1},
                        {kFb, kAlpha, -1}, {kFb, kBeta, -1}, {kFc, kBeta, -1},
                        {kFc, kGamma, -1}, {kFa, kGamma, -1}, {kFa, kAlpha, -1}});
}

Partition devresent_figure_start() {
  return part(6, {{kAlpha, kFa, kFb}, {kBeta}, {kGamma, kFc}});
}

Scenario devresent_mfhg_scs_3cycle(bool from_singletons) {
  Partition start = from_singletons ? Partition::singletons(6) : devresent_figure_start();
  ScriptBuilder w(start);
  if (from_singletons) w.group({kAlpha, kFa, kFb}).group({kGamma, kFc});
  ScriptBuilder p(w.partition());
  p.group({kBeta, kFb, kFc}).group({kGamma, kFa, kFc}).group({kAlpha, kFa, kFb});
  return Scenario{from_singletons ? "devresent_mfhg_scs_3cycle_singleton" : "devresent_mfhg_scs_3cycle",
                  std::string("(S)CS dynamics cycle in an MFHG with deviator-resentful agents") +
                      (from_singletons ? ", started from the singleton partition" : ""),
                  devresent_figure_game(),
                  {Kind::kSCS, PerceptionModel(PerceptionKind::kDeviatorResent), Filter::kAny},
                  start,
                  w.take(),
                  p.take(),
                  {},
                  Scenario::Expected::kCycle,
                  kGreekNames,
                  devresent_figure_deltas()};
}

Scenario devresent_mfhg_is_6cycle(bool from_singletons) {
  Partition start = from_singletons ? Partition::singletons(6) : devresent_figure_start();
  ScriptBuilder w(start);
  if (from_singletons) w.join(kFa, kAlpha).join(kFb, kAlpha).join(kFc, kGamma);
  ScriptBuilder p(w.partition());
  p.join(kFc, kBeta).join(kFb, kBeta).join(kFa, kGamma);
  p.join(kFc, kGamma).join(kFb, kAlpha).join(kFa, kAlpha);
  return Scenario{from_singletons ? "devresent_mfhg_is_6cycle_singleton" : "devresent_mfhg_is_6cycle",
                  std::string("IS dynamics cycle in an MFHG with deviator-resentful agents") +
                      (from_singletons ? ", started from the singleton partition" : ""),
                  devresent_figure_game(),
                  {Kind::kIS, PerceptionModel(PerceptionKind::kDeviatorResent), Filter::kAny},
                  start,
                  w.take(),
                  p.take(),
                  {},
                  Scenario::Expected::kCycle,
                  kGreekNames,
                  devresent_figure_deltas()};
}

const std::map<std::string, std::function<Scenario()>>& registry() {
  static const std::map<std::string, std::function<Scenario()>> table = {
      {"run_and_chase", run_and_chase},
      {"mf_violates_ate", mf_violates_ate},
      {"mfhg_resent_ns", mfhg_resent_ns},
      {"core_apprec_3cycle", core_apprec_3cycle},
      {"mfhg_apprec_ns", mfhg_apprec_ns},
      {"devresent_ns_runchase", devresent_ns_runchase},
      {"devresent_cns_ir_3cycle", devresent_cns_ir_3cycle},
      {"devresent_mfhg_scs_3cycle", [] { return devresent_mfhg_scs_3cycle(false); }},
      {"devresent_mfhg_scs_3cycle_singleton", [] { return devresent_mfhg_scs_3cycle(true); }},
      {"devresent_mfhg_is_6cycle", [] { return devresent_mfhg_is_6cycle(false); }},
      {"devresent_mfhg_is_6cycle_singleton", [] { return devresent_mfhg_is_6cycle(true); }},
  };
  return table;
}

}  // namespace

ScriptBuilder& ScriptBuilder::push(Deviation d) {
  partition_ = apply_deviation(partition_, d);
  script_.push_back(std::move(d));
  return *this;
}

ScriptBuilder& ScriptBuilder::join(Agent mover, Agent host) {
  return push(hde::join(mover, partition_.index_of(host)));
}

ScriptBuilder& ScriptBuilder::alone(Agent mover) { return push(go_alone(mover)); }

ScriptBuilder& ScriptBuilder::group(std::vector<Agent> members) {
  return push(hde::group(std::move(members)));
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

Scenario builtin(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) {
    std::string list;
    for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown example '" + name + "'; available: " + list);
  }
  return it->second();
}

}  // namespace hde
