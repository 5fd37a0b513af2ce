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

#include "hde/deviation.hpp"
#include "hde/scenarios.hpp"
#include "oracles.hpp"

using namespace hde;

namespace {

enum : Agent { kAlice, kBob };

Game run_and_chase_game() {
  UtilityMatrix u(2);
  u.set(kAlice, kBob, Rational(-1));
  u.set(kBob, kAlice, Rational(1));
  return Game(2, Caf::kAS, u);
}

Game triangle_game() {
  UtilityMatrix u(3);
  u.set(0, 1, Rational(4));
  u.set(1, 2, Rational(4));
  u.set(2, 0, Rational(4));
  u.set(0, 2, Rational(1));
  u.set(1, 0, Rational(1));
  u.set(2, 1, Rational(1));
  return Game(3, Caf::kAS, u);
}

std::vector<std::string> strings(const std::vector<Deviation>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(to_string(d));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("apply_deviation: single and group moves") {
  CHECK(apply_deviation(Partition::singletons(2), join(1, 0)) == Partition::grand(2));

  // a, a', b, b', c, c' = 0..5
  const Partition pi1(6, {{3, 1}, {0}, {5, 4, 2}});
  const Partition pi2 = apply_deviation(pi1, join(2, pi1.index_of(1)));
  CHECK(pi2 == Partition(6, {{3, 1, 2}, {0}, {5, 4}}));

  CHECK(apply_deviation(Partition::singletons(3), group({0, 1})) == Partition(3, {{0, 1}, {2}}));
  CHECK(apply_deviation(Partition(4, {{0, 1, 2}, {3}}), group({2, 3})) == Partition(4, {{0, 1}, {2, 3}}));
}

TEST_CASE("apply_deviation rejects malformed deviations") {
  const Partition p(3, {{0, 1}, {2}});
  CHECK_THROWS_AS(apply_deviation(p, join(0, 0)), ContractError);      // own coalition
  CHECK_THROWS_AS(apply_deviation(p, join(0, 7)), ContractError);      // no such coalition
  CHECK_THROWS_AS(apply_deviation(p, go_alone(2)), ContractError);     // already alone
  CHECK_THROWS_AS(apply_deviation(p, group({0, 1})), ContractError);   // existing coalition
  CHECK_THROWS_AS(apply_deviation(p, join(9, 0)), ContractError);      // unknown agent
}

TEST_CASE("classify: run-and-chase join is NS but not IS") {
  const Game g = run_and_chase_game();
  const DynamicState s{Partition::singletons(2), g.initial_utilities(), 0};
  const Classification c = classify_deviation(g, s, join(kBob, s.partition.index_of(kAlice)));
  CHECK(c.kinds.contains(Kind::kNS));
  CHECK_FALSE(c.kinds.contains(Kind::kIS));
  // Bob leaves a singleton, so the CNS condition holds vacuously.
  CHECK(c.kinds.contains(Kind::kCNS));
  CHECK(c.ir);
  // Oracle agreement.
  const auto v = oracle::classify(g.caf(), g.initial_utilities(), s.partition, join(kBob, 0));
  CHECK(v.kinds == std::set<Kind>{Kind::kNS, Kind::kCNS});
}

TEST_CASE("classify: triangle group {a,b} is CS and SCS") {
  const Game g = triangle_game();
  const DynamicState s{Partition::singletons(3), g.initial_utilities(), 0};
  const Classification c = classify_deviation(g, s, group({0, 1}));
  CHECK(c.kinds == KindSet{Kind::kCS, Kind::kSCS});
  CHECK(c.ir);
}

TEST_CASE("classify: deviator-resent CNS step b -> {c}") {
  // Game of the CNS cycle: u_b(a) = -1, u_b(c) = 0, u_a(b) = 0.
  const Scenario sc = builtin("devresent_cns_ir_3cycle");
  const DynamicState s{sc.initial, sc.game.initial_utilities(), 0};
  const Classification c = classify_deviation(sc.game, s, join(1, sc.initial.index_of(2)));
  CHECK(c.kinds.contains(Kind::kNS));
  CHECK(c.kinds.contains(Kind::kCNS));
  // u_c(b) = -1, so c is worse off and the move is not IS.
  CHECK_FALSE(c.kinds.contains(Kind::kIS));
  CHECK(c.ir);
}

TEST_CASE("enumerate_single: worked examples") {
  const Game g = run_and_chase_game();
  const DynamicState s{Partition::singletons(2), g.initial_utilities(), 0};
  CHECK(strings(enumerate_single(g, s, Kind::kNS, Filter::kAny)) == std::vector<std::string>{"2->#1"});

  const Scenario t2 = builtin("mfhg_resent_ns");
  const DynamicState s1{t2.initial, t2.game.initial_utilities(), 0};
  const auto ns = enumerate_single(t2.game, s1, Kind::kNS, Filter::kAny);
  const Deviation expected = join(2, t2.initial.index_of(1));
  CHECK(std::find(ns.begin(), ns.end(), expected) != ns.end());
  CHECK_FALSE(is_stable(t2.game, s1, Kind::kNS));
}

TEST_CASE("enumerate_single: deterministic order, new singleton last") {
  UtilityMatrix u(3);
  for (Agent i = 0; i < 3; ++i) {
    for (Agent j = 0; j < 3; ++j) {
      if (i != j) u.set(i, j, Rational(-1));
    }
  }
  u.set(0, 2, Rational(5));
  const Game g(3, Caf::kAS, u);
  const DynamicState s{Partition(3, {{0, 1}, {2}}), u, 0};
  const auto list = enumerate_single(g, s, Kind::kNS, Filter::kAny);
  std::vector<std::string> got;
  for (const auto& d : list) got.push_back(to_string(d));
  CHECK(got == std::vector<std::string>{"1->#2", "1->new", "2->new"});
}

TEST_CASE("enumerate_group: triangle and size cap") {
  const Game g = triangle_game();
  const DynamicState s{Partition::singletons(3), g.initial_utilities(), 0};
  const auto cs = strings(enumerate_group(g, s, Kind::kCS, Filter::kAny));
  for (const char* want : {"group{1,2}", "group{2,3}", "group{1,3}"}) {
    CHECK(std::find(cs.begin(), cs.end(), want) != cs.end());
  }
  CHECK(enumerate_group(g, s, Kind::kCS, Filter::kAny, 1).empty());
  CHECK_THROWS_AS(enumerate_group(g, s, Kind::kCS, Filter::kAny, 0), UsageError);
}

TEST_CASE("is_stable: worked examples") {
  UtilityMatrix neg(4);
  for (Agent i = 0; i < 4; ++i) {
    for (Agent j = 0; j < 4; ++j) {
      if (i != j) neg.set(i, j, Rational(-3));
    }
  }
  const Game g(4, Caf::kAS, neg);
  CHECK(is_stable(g, DynamicState{Partition::singletons(4), neg, 0}, Kind::kNS));

  // Run-and-chase after the two resent steps: u_B(A) = 0.
  UtilityMatrix after(2);
  after.set(kAlice, kBob, Rational(-1));
  const Game rc(2, Caf::kAS, after);
  CHECK(is_stable(rc, DynamicState{Partition::singletons(2), after, 2}, Kind::kNS));
}

TEST_CASE("enumeration agrees with the brute-force oracle for n <= 5") {
  oracle::Gen gen(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.between(1, 5));
    const Caf caf = gen.between(0, 1) ? Caf::kAS : Caf::kMF;
    const UtilityMatrix u = gen.utilities(n, -4, 4);
    const Partition p = gen.partition(n);
    const Game g(n, caf, u);
    const DynamicState s{p, u, 0};
    for (Kind k : {Kind::kNS, Kind::kIS, Kind::kCNS, Kind::kCS, Kind::kSCS}) {
      for (Filter f : {Filter::kAny, Filter::kIR, Filter::kStrictSingleton}) {
        INFO("n=" << n << " kind=" << to_string(k) << " filter=" << to_string(f) << " p=" << p.to_string());
        CHECK(strings(enumerate(g, s, k, f)) == oracle::enumerate(caf, u, p, k, f));
      }
      CHECK(is_stable(g, s, k) == oracle::enumerate(caf, u, p, k, Filter::kAny).empty());
    }
  }
}

TEST_CASE("classification agrees with the oracle on every well-formed deviation") {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.between(2, 5));
    const Caf caf = gen.between(0, 1) ? Caf::kAS : Caf::kMF;
    const UtilityMatrix u = gen.utilities(n, -3, 3);
    const Partition p = gen.partition(n);
    const Game g(n, caf, u);
    const DynamicState s{p, u, 0};
    for (Agent a = 0; a < n; ++a) {
      for (std::size_t c = 0; c <= p.size(); ++c) {
        const Deviation d = c == p.size() ? go_alone(a) : join(a, c);
        if (c == p.index_of(a) || (c == p.size() && p.coalition_of(a).size() == 1)) continue;
        const Classification got = classify_deviation(g, s, d);
        const auto want = oracle::classify(caf, u, p, d);
        for (Kind k : {Kind::kNS, Kind::kIS, Kind::kCNS, Kind::kCS, Kind::kSCS}) {
          CHECK(got.kinds.contains(k) == (want.kinds.count(k) == 1));
        }
        CHECK(got.ir == want.ir);
      }
    }
  }
}

TEST_CASE("required_inequalities: kind mismatch yields a failing inequality") {
  const Game g = triangle_game();
  const DynamicState s{Partition::singletons(3), g.initial_utilities(), 0};
  const auto an = analyze(g, s, group({0, 1}));
  const auto ineqs = required_inequalities(an, Kind::kNS, Filter::kAny);
  CHECK(std::any_of(ineqs.begin(), ineqs.end(), [](const Inequality& i) { return !i.holds(); }));
  const auto ok = required_inequalities(an, Kind::kCS, Filter::kIR);
  CHECK(std::all_of(ok.begin(), ok.end(), [](const Inequality& i) { return i.holds(); }));
}

TEST_CASE("kind tags parse case-insensitively") {
  CHECK(parse_kind("ns") == Kind::kNS);
  CHECK(parse_kind("SCS") == Kind::kSCS);
  CHECK_THROWS_AS(parse_kind("xs"), UsageError);
  CHECK(KindSet{Kind::kNS, Kind::kCNS}.to_string() == "NS,CNS");
  CHECK(parse_filter("strict-singleton") == Filter::kStrictSingleton);
  CHECK_THROWS_AS(parse_filter("all"), UsageError);
}
