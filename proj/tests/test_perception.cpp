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

#include "doctest.h"

#include "hde/dynamics.hpp"
#include "hde/perception.hpp"
#include "hde/scenarios.hpp"
#include "oracles.hpp"

using namespace hde;

namespace {

std::size_t changed_entries(const UtilityMatrix& a, const UtilityMatrix& b) {
  std::size_t k = 0;
  for (Agent i = 0; i < a.size(); ++i) {
    for (Agent j = 0; j < a.size(); ++j) k += a(i, j) != b(i, j);
  }
  return k;
}

UtilityMatrix after_period(const Scenario& sc) {
  DynamicState s = initial_state(sc.game, sc.initial);
  for (const auto* part : {&sc.warmup, &sc.period}) {
    for (const Deviation& d : *part) {
      auto r = step(sc.game, s, d, sc.rule);
      REQUIRE(std::holds_alternative<DynamicState>(r));
      s = std::get<DynamicState>(r);
    }
  }
  return s.utilities;
}

UtilityMatrix at_period_start(const Scenario& sc) {
  DynamicState s = initial_state(sc.game, sc.initial);
  for (const Deviation& d : sc.warmup) s = std::get<DynamicState>(step(sc.game, s, d, sc.rule));
  return s.utilities;
}

}  // namespace

TEST_CASE("resent: Alice leaving lowers only Bob's view of her") {
  UtilityMatrix u(2);
  u.set(1, 0, Rational(1));
  u.set(0, 1, Rational(-1));
  const UtilityMatrix v =
      update_utilities(Partition::grand(2), u, go_alone(0), PerceptionModel(PerceptionKind::kResent));
  CHECK(v(1, 0) == Rational(0));
  CHECK(v(0, 1) == Rational(-1));
  CHECK(changed_entries(u, v) == 1);
}

TEST_CASE("appreciation: group step adds c both ways inside the group") {
  UtilityMatrix u(3);
  u.set(0, 1, Rational(4));
  u.set(1, 0, Rational(1));
  const UtilityMatrix v = update_utilities(Partition::singletons(3), u, group({0, 1}),
                                           PerceptionModel(PerceptionKind::kAppreciation));
  CHECK(v(0, 1) == Rational(5));
  CHECK(v(1, 0) == Rational(2));
  CHECK(changed_entries(u, v) == 2);
}

TEST_CASE("deviator-resent: the mover resents those she abandons") {
  UtilityMatrix u(3);
  const Partition p(3, {{0, 1, 2}});
  const UtilityMatrix v =
      update_utilities(p, u, go_alone(1), PerceptionModel(PerceptionKind::kDeviatorResent, Rational(1, 2)));
  CHECK(v(1, 0) == Rational(-1, 2));
  CHECK(v(1, 2) == Rational(-1, 2));
  CHECK(changed_entries(u, v) == 2);
}

TEST_CASE("both: single move touches abandoned and joined entries") {
  UtilityMatrix u(4);
  const Partition p(4, {{0, 1}, {2, 3}});
  const UtilityMatrix v =
      update_utilities(p, u, join(0, 1), PerceptionModel(PerceptionKind::kResentAppreciation));
  CHECK(v(1, 0) == Rational(-1));
  CHECK(v(2, 0) == Rational(1));
  CHECK(v(3, 0) == Rational(1));
  CHECK(changed_entries(u, v) == 3);
  CHECK_THROWS_AS(update_utilities(p, u, group({0, 2}), PerceptionModel(PerceptionKind::kResentAppreciation)),
                  UsageError);
}

TEST_CASE("model none leaves the matrix unchanged") {
  const UtilityMatrix u = oracle::Gen(3).utilities(4, -5, 5);
  const Partition p(4, {{0, 1, 2}, {3}});
  CHECK(update_utilities(p, u, join(0, 1), PerceptionModel()) == u);
  CHECK(update_utilities(p, u, group({0, 3}), PerceptionModel()) == u);
}

TEST_CASE("coefficient must be positive") {
  CHECK_THROWS_AS(PerceptionModel(PerceptionKind::kResent, Rational(0)), ContractError);
  CHECK_THROWS_AS(PerceptionModel(PerceptionKind::kResent, Rational(-1, 3)), ContractError);
  CHECK(parse_perception("both") == PerceptionKind::kResentAppreciation);
  CHECK(to_string(PerceptionKind::kDeviatorResent) == "deviator-resent");
  CHECK_THROWS_AS(parse_perception("grudge"), UsageError);
}

TEST_CASE("update agrees with the entrywise oracle") {
  oracle::Gen gen(99);
  const PerceptionKind kinds[] = {PerceptionKind::kNone, PerceptionKind::kResent, PerceptionKind::kAppreciation,
                                  PerceptionKind::kResentAppreciation, PerceptionKind::kDeviatorResent};
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.between(2, 6));
    const UtilityMatrix u = gen.utilities(n, -5, 5);
    const Partition p = gen.partition(n);
    const Rational c(gen.between(1, 7), gen.between(1, 3));
    const PerceptionKind kind = kinds[gen.between(0, 4)];

    const Agent a = static_cast<Agent>(gen.between(0, static_cast<std::int64_t>(n) - 1));
    std::optional<Deviation> d;
    if (gen.between(0, 1) == 0) {
      const std::size_t target = static_cast<std::size_t>(gen.between(0, static_cast<std::int64_t>(p.size())));
      if (target == p.index_of(a)) continue;
      if (target == p.size()) {
        if (p.coalition_of(a).size() == 1) continue;
        d = go_alone(a);
      } else {
        d = join(a, target);
      }
    } else {
      if (kind == PerceptionKind::kResentAppreciation) continue;
      Coalition m;
      for (Agent b = 0; b < n; ++b) {
        if (gen.between(0, 1) == 1) m.push_back(b);
      }
      if (m.empty() || std::find(p.coalitions().begin(), p.coalitions().end(), m) != p.coalitions().end()) continue;
      d = group(m);
    }
    INFO("trial " << trial << " " << to_string(*d) << " on " << p.to_string());
    const UtilityMatrix got = update_utilities(p, u, *d, PerceptionModel(kind, c));
    CHECK(got == oracle::update(p, u, *d, kind, c));
    // Every change is exactly one coefficient in the model's direction.
    for (Agent i = 0; i < n; ++i) {
      CHECK(got(i, i) == Rational(0));
      for (Agent j = 0; j < n; ++j) {
        const Rational delta = got(i, j) - u(i, j);
        CHECK((delta == Rational(0) || delta == c || delta == -c));
        if (kind == PerceptionKind::kResent || kind == PerceptionKind::kDeviatorResent) CHECK(delta <= Rational(0));
        if (kind == PerceptionKind::kAppreciation) CHECK(delta >= Rational(0));
      }
    }
  }
}

TEST_CASE("one full resentful MF cycle lowers every off-diagonal entry by 1") {
  const Scenario sc = builtin("mfhg_resent_ns");
  REQUIRE(sc.period.size() == 18);
  const UtilityMatrix start = at_period_start(sc);
  const UtilityMatrix end = after_period(sc);
  for (Agent i = 0; i < 6; ++i) {
    for (Agent j = 0; j < 6; ++j) {
      if (i != j) CHECK(end(i, j) - start(i, j) == Rational(-1));
    }
  }
}

TEST_CASE("one full appreciative MF cycle raises every off-diagonal entry by 1") {
  const Scenario sc = builtin("mfhg_apprec_ns");
  REQUIRE(sc.period.size() == 18);
  const UtilityMatrix start = at_period_start(sc);
  const UtilityMatrix end = after_period(sc);
  for (Agent i = 0; i < 6; ++i) {
    for (Agent j = 0; j < 6; ++j) {
      if (i != j) CHECK(end(i, j) - start(i, j) == Rational(1));
    }
  }
}

TEST_CASE("per-period deltas of every cycle scenario match the transcribed ones") {
  for (const std::string& name : builtin_names()) {
    const Scenario sc = builtin(name);
    if (sc.expected != Scenario::Expected::kCycle) continue;
    INFO(name);
    const UtilityMatrix start = at_period_start(sc);
    const UtilityMatrix end = after_period(sc);
    for (Agent i = 0; i < start.size(); ++i) {
      for (Agent j = 0; j < start.size(); ++j) CHECK(end(i, j) - start(i, j) == sc.expected_deltas(i, j));
    }
  }
}
