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

#include <cmath>
#include <set>
#include <sstream>

#include "hde/experiment.hpp"
#include "oracles.hpp"

using namespace hde;

namespace {

Rational mean_of(const std::vector<Rational>& xs) {
  Rational s;
  for (const Rational& x : xs) s += x;
  return xs.empty() ? Rational(0) : s / Rational(static_cast<std::int64_t>(xs.size()));
}

// Recomputes every metric from the game and the trace's endpoints.
OutcomeStats reference_stats(const Game& g, const Trace& t) {
  const std::size_t n = g.n();
  const UtilityMatrix& u0 = g.initial_utilities();
  const UtilityMatrix& uT = t.final_state.utilities;
  const Partition& p = t.final_state.partition;
  const oracle::Labels lab = oracle::labels_of(p);
  OutcomeStats s;
  s.outcome = t.outcome;
  s.steps = t.steps;
  s.coalitions = p.size();
  s.avg_size = Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(p.size()));
  for (const Coalition& c : p.coalitions()) s.max_size = std::max(s.max_size, c.size());
  std::vector<Rational> finals, changes;
  std::size_t positive = 0;
  for (Agent i = 0; i < n; ++i) {
    if (oracle::value(g.caf(), u0, i, lab) < Rational(0)) ++s.ir_violations;
    finals.push_back(oracle::value(g.caf(), uT, i, lab));
    for (Agent j = 0; j < n; ++j) {
      if (i == j) continue;
      changes.push_back(uT(i, j) - u0(i, j));
      if (uT(i, j) > Rational(0)) ++positive;
    }
  }
  std::set<std::string> movers;
  for (const std::string& d : oracle::enumerate(g.caf(), u0, p, Kind::kNS, Filter::kAny)) {
    movers.insert(d.substr(0, d.find("->")));
  }
  s.ns_deviators = movers.size();
  s.avg_utility = mean_of(finals);
  s.avg_change = mean_of(changes);
  s.positive_fraction =
      n > 1 ? Rational(static_cast<std::int64_t>(positive), static_cast<std::int64_t>(n * (n - 1))) : Rational(0);
  return s;
}

}  // namespace

TEST_CASE("uniform generator: range, determinism, centred mean") {
  const Game a = gen_uniform(50, 9);
  const Game b = gen_uniform(50, 9);
  CHECK(a.initial_utilities() == b.initial_utilities());
  CHECK_FALSE(gen_uniform(50, 10).initial_utilities() == a.initial_utilities());
  CHECK(a.caf() == Caf::kAS);
  for (Agent i = 0; i < 50; ++i) {
    CHECK(a.initial_utilities()(i, i) == Rational(0));
    for (Agent j = 0; j < 50; ++j) {
      CHECK(a.initial_utilities()(i, j) >= Rational(-100));
      CHECK(a.initial_utilities()(i, j) <= Rational(100));
    }
  }
  double sum = 0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const UtilityMatrix u = gen_uniform(20, seed).initial_utilities();
    for (Agent i = 0; i < 20; ++i) {
      for (Agent j = 0; j < 20; ++j) {
        if (i != j) {
          sum += static_cast<double>(u(i, j).num());
          ++count;
        }
      }
    }
  }
  CHECK(std::abs(sum / static_cast<double>(count)) <= 3.0);
}

TEST_CASE("gaussian generator: sigma 0 gives constant columns, columns centre on mu") {
  const UtilityMatrix flat = gen_gaussian(12, 5, 0.0).initial_utilities();
  for (Agent b = 0; b < 12; ++b) {
    const Agent ref = b == 0 ? 1 : 0;
    for (Agent a = 0; a < 12; ++a) {
      if (a != b) CHECK(flat(a, b) == flat(ref, b));
    }
    CHECK(flat(ref, b) >= Rational(-100));
    CHECK(flat(ref, b) <= Rational(100));
  }
  CHECK(gen_gaussian(12, 5, 10.0).initial_utilities() == gen_gaussian(12, 5, 10.0).initial_utilities());

  // mu_b is drawn before any noise, so the sigma = 0 game exposes it.
  const UtilityMatrix mus = gen_gaussian(50, 17, 0.0).initial_utilities();
  const UtilityMatrix u = gen_gaussian(50, 17, 10.0).initial_utilities();
  const double bound = 3.0 * 10.0 / std::sqrt(49.0);
  std::size_t within = 0;
  for (Agent b = 0; b < 50; ++b) {
    double s = 0;
    for (Agent a = 0; a < 50; ++a) {
      if (a != b) s += static_cast<double>(u(a, b).num());
    }
    const double mu = static_cast<double>(mus(b == 0 ? 1 : 0, b).num());
    if (std::abs(s / 49.0 - mu) <= bound) ++within;
  }
  // A 3-sigma bound fails for about 0.3% of columns; allow one miss.
  CHECK(within >= 49);
  CHECK_THROWS_AS(gen_gaussian(3, 1, -1.0), UsageError);
  CHECK_THROWS_AS(gen_uniform(0, 1), UsageError);
}

TEST_CASE("outcome stats on the all-singleton partition") {
  const Game g = gen_uniform(50, 3);
  Trace t;
  t.initial = initial_state(g, Partition::singletons(50));
  t.final_state = t.initial;
  t.outcome = Outcome::kConverged;
  const OutcomeStats s = outcome_stats(g, t);
  CHECK(s.coalitions == 50);
  CHECK(s.avg_size == Rational(1));
  CHECK(s.max_size == 1);
  CHECK(s.avg_utility == Rational(0));
  CHECK(s.avg_change == Rational(0));
  CHECK(s.ir_violations == 0);
}

TEST_CASE("outcome stats match an independent recomputation") {
  const PerceptionKind models[] = {PerceptionKind::kNone, PerceptionKind::kResent, PerceptionKind::kAppreciation,
                                   PerceptionKind::kResentAppreciation};
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const Game g = seed % 2 ? gen_uniform(7, seed) : gen_gaussian(7, seed);
    const DynamicsRule rule{Kind::kNS, PerceptionModel(models[seed % 4]), Filter::kAny};
    RunLimits lim;
    lim.max_steps = 2000;
    const Trace t = run(g, initial_state(g, Partition::singletons(7)), rule, Policy::random(seed), lim);
    const OutcomeStats got = outcome_stats(g, t);
    const OutcomeStats want = reference_stats(g, t);
    INFO("seed " << seed);
    CHECK(got.outcome == want.outcome);
    CHECK(got.steps == want.steps);
    CHECK(got.coalitions == want.coalitions);
    CHECK(got.avg_size == want.avg_size);
    CHECK(got.max_size == want.max_size);
    CHECK(got.ir_violations == want.ir_violations);
    CHECK(got.ns_deviators == want.ns_deviators);
    CHECK(got.avg_utility == want.avg_utility);
    CHECK(got.avg_change == want.avg_change);
    CHECK(got.positive_fraction == want.positive_fraction);
    if (rule.model.kind == PerceptionKind::kNone && t.outcome == Outcome::kConverged) CHECK(got.ns_deviators == 0);
  }
}

TEST_CASE("run_batch is deterministic and independent of the worker count") {
  ExperimentConfig cfg;
  cfg.n = 8;
  cfg.games = 12;
  cfg.seed = 42;
  cfg.max_steps = 20000;
  const BatchResult one = run_batch(cfg);
  cfg.jobs = 4;
  const BatchResult four = run_batch(cfg);
  REQUIRE(one.rows.size() == 12);
  REQUIRE(four.rows.size() == 12);
  for (std::size_t k = 0; k < 12; ++k) {
    CHECK(one.rows[k].seed == 42 + k);
    CHECK(one.rows[k].seed == four.rows[k].seed);
    CHECK(one.rows[k].steps == four.rows[k].steps);
    CHECK(one.rows[k].avg_change == four.rows[k].avg_change);
  }
  CHECK(one.summary.avg_steps == four.summary.avg_steps);
  CHECK(one.summary.converged + one.summary.timeouts == one.summary.games);
}

TEST_CASE("summary means exclude timeouts from the step average only") {
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.games = 8;
  cfg.model = PerceptionModel();
  cfg.seed = 5;
  cfg.max_steps = 300;
  const BatchResult r = run_batch(cfg);
  std::vector<Rational> steps, changes;
  std::size_t timeouts = 0;
  for (const OutcomeStats& s : r.rows) {
    if (s.timed_out()) {
      ++timeouts;
    } else {
      steps.push_back(Rational(static_cast<std::int64_t>(s.steps)));
    }
    changes.push_back(s.avg_change);
  }
  CHECK(r.summary.timeouts == timeouts);
  CHECK(r.summary.avg_steps == mean_of(steps));
  CHECK(r.summary.avg_change == mean_of(changes));
}

TEST_CASE("utility change sign follows the perception model") {
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.games = 6;
  cfg.seed = 1;
  cfg.utilities = UtilityModel::kGaussian;
  cfg.model = PerceptionModel(PerceptionKind::kResent);
  for (const OutcomeStats& s : run_batch(cfg).rows) CHECK(s.avg_change <= Rational(0));
  cfg.model = PerceptionModel(PerceptionKind::kAppreciation);
  for (const OutcomeStats& s : run_batch(cfg).rows) CHECK(s.avg_change >= Rational(0));
  cfg.model = PerceptionModel();
  cfg.max_steps = 500;
  for (const OutcomeStats& s : run_batch(cfg).rows) CHECK(s.avg_change == Rational(0));
}

TEST_CASE("CSV has a header, one row per game and a mean row") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.games = 3;
  cfg.seed = 2;
  std::ostringstream os;
  write_csv(os, run_batch(cfg));
  std::vector<std::string> lines;
  std::istringstream is(os.str());
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].rfind("seed,", 0) == 0);
  CHECK(lines[1].rfind("2,", 0) == 0);
  CHECK(lines[4].rfind("mean,", 0) == 0);
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  for (const auto& l : lines) CHECK(commas(l) == commas(lines[0]));
}

TEST_CASE("utility model tags") {
  CHECK(parse_utility_model("gaussian") == UtilityModel::kGaussian);
  CHECK(to_string(UtilityModel::kUniform) == "uniform");
  CHECK_THROWS_AS(parse_utility_model("cauchy"), UsageError);
}
