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

#include "hde/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <ostream>
#include <thread>

#include "hde/rng.hpp"

namespace hde {
namespace {

Rational ratio(std::size_t num, std::size_t den) {
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Rational mean(const std::vector<OutcomeStats>& rows, Rational OutcomeStats::*field) {
  Rational sum;
  for (const auto& r : rows) sum += r.*field;
  return rows.empty() ? Rational(0) : sum / Rational(static_cast<std::int64_t>(rows.size()));
}

Rational mean(const std::vector<OutcomeStats>& rows, std::size_t OutcomeStats::*field) {
  std::size_t sum = 0;
  for (const auto& r : rows) sum += r.*field;
  return rows.empty() ? Rational(0) : ratio(sum, rows.size());
}

OutcomeStats run_one(const ExperimentConfig& config, std::size_t index) {
  const std::uint64_t seed = config.seed + index;
  const Game game = config.utilities == UtilityModel::kUniform
                        ? gen_uniform(config.n, seed)
                        : gen_gaussian(config.n, seed, config.sigma);
  const DynamicsRule rule{config.kind, config.model, Filter::kAny};
  RunLimits limits;
  limits.max_steps = config.max_steps;
  limits.record = false;
  const Trace trace = run(game, initial_state(game, Partition::singletons(config.n)), rule,
                          Policy::random(seed), limits);
  OutcomeStats stats = outcome_stats(game, trace);
  stats.seed = seed;
  return stats;
}

}  // namespace

Game gen_uniform(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw UsageError("game needs at least one agent");
  Rng rng(seed, kGameStream);
  UtilityMatrix u(n);
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      if (i != j) u.set(i, j, Rational(rng.between(-100, 100)));
    }
  }
  return Game(n, Caf::kAS, std::move(u));
}

Game gen_gaussian(std::size_t n, std::uint64_t seed, double sigma) {
  if (n < 1) throw UsageError("game needs at least one agent");
  if (!(sigma >= 0)) throw UsageError("sigma must be non-negative");
  Rng rng(seed, kGameStream);
  std::vector<std::int64_t> mu(n);
  for (auto& m : mu) m = rng.between(-100, 100);
  UtilityMatrix u(n);
  for (Agent a = 0; a < n; ++a) {
    for (Agent b = 0; b < n; ++b) {
      if (a == b) continue;
      const double draw = static_cast<double>(mu[b]) + sigma * rng.normal();
      u.set(a, b, Rational(static_cast<std::int64_t>(std::llround(draw))));
    }
  }
  return Game(n, Caf::kAS, std::move(u));
}

std::string_view to_string(UtilityModel model) {
  return model == UtilityModel::kUniform ? "uniform" : "gaussian";
}

UtilityModel parse_utility_model(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "uniform") return UtilityModel::kUniform;
  if (t == "gaussian") return UtilityModel::kGaussian;
  throw UsageError("unknown utility model '" + std::string(text) + "' (expected uniform|gaussian)");
}

OutcomeStats outcome_stats(const Game& game, const Trace& trace) {
  const std::size_t n = game.n();
  const Partition& final_partition = trace.final_state.partition;
  const UtilityMatrix& u0 = game.initial_utilities();
  const UtilityMatrix& uT = trace.final_state.utilities;

  OutcomeStats s;
  s.outcome = trace.outcome;
  s.steps = trace.steps;
  s.coalitions = final_partition.size();
  s.avg_size = ratio(n, s.coalitions);
  for (const Coalition& c : final_partition.coalitions()) s.max_size = std::max(s.max_size, c.size());

  Rational total;
  for (Agent i = 0; i < n; ++i) {
    if (!is_individually_rational(game, i, final_partition.coalition_of(i), u0)) ++s.ir_violations;
    total += partition_utility(game, i, final_partition, uT);
  }
  s.avg_utility = total / Rational(static_cast<std::int64_t>(n));

  const DynamicState original{final_partition, u0, trace.final_state.step};
  std::vector<bool> deviates(n, false);
  for (const Deviation& d : enumerate_single(game, original, Kind::kNS, Filter::kAny)) {
    deviates[std::get<SingleMove>(d).agent] = true;
  }
  s.ns_deviators = static_cast<std::size_t>(std::count(deviates.begin(), deviates.end(), true));

  Rational change;
  std::size_t positive = 0;
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      if (i == j) continue;
      change += uT(i, j) - u0(i, j);
      if (uT(i, j) > Rational(0)) ++positive;
    }
  }
  const std::size_t pairs = n * (n - 1);
  s.avg_change = pairs == 0 ? Rational(0) : change / Rational(static_cast<std::int64_t>(pairs));
  s.positive_fraction = pairs == 0 ? Rational(0) : ratio(positive, pairs);
  return s;
}

BatchResult run_batch(const ExperimentConfig& config) {
  if (config.max_steps < 1) throw UsageError("max_steps must be at least 1");
  if (config.n < 1) throw UsageError("n must be at least 1");
  BatchResult result{config, std::vector<OutcomeStats>(config.games), {}};

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.games; i = next++) result.rows[i] = run_one(config, i);
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, config.games));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatchSummary& s = result.summary;
  const auto& rows = result.rows;
  s.games = rows.size();
  std::vector<OutcomeStats> finished;
  for (const auto& r : rows) {
    if (r.timed_out()) {
      ++s.timeouts;
      continue;
    }
    finished.push_back(r);
    if (r.outcome == Outcome::kConverged) {
      ++s.converged;
      if (r.coalitions == config.n) ++s.all_singleton;
    }
  }
  s.avg_steps = mean(finished, &OutcomeStats::steps);
  s.avg_coalitions = mean(rows, &OutcomeStats::coalitions);
  s.avg_size = mean(rows, &OutcomeStats::avg_size);
  s.avg_max_size = mean(rows, &OutcomeStats::max_size);
  s.avg_ir_violations = mean(rows, &OutcomeStats::ir_violations);
  s.avg_ns_deviators = mean(rows, &OutcomeStats::ns_deviators);
  s.avg_utility = mean(rows, &OutcomeStats::avg_utility);
  s.avg_change = mean(rows, &OutcomeStats::avg_change);
  s.positive_fraction = mean(rows, &OutcomeStats::positive_fraction);
  return result;
}

void write_csv(std::ostream& out, const BatchResult& result) {
  out << "seed,outcome,steps,coalitions,avg_size,max_size,ir_violations,ns_deviators,"
         "avg_utility,avg_change,positive_fraction\n";
  for (const auto& r : result.rows) {
    out << r.seed << ',' << (r.timed_out() ? "timeout" : to_string(r.outcome)) << ',' << r.steps
        << ',' << r.coalitions << ',' << r.avg_size.to_decimal(4) << ',' << r.max_size << ','
        << r.ir_violations << ',' << r.ns_deviators << ',' << r.avg_utility.to_decimal(4) << ','
        << r.avg_change.to_decimal(4) << ',' << r.positive_fraction.to_decimal(4) << '\n';
  }
  const BatchSummary& s = result.summary;
  out << "mean," << s.converged << "/" << s.games << " converged;" << s.timeouts << " timeouts,"
      << s.avg_steps.to_decimal(2) << ',' << s.avg_coalitions.to_decimal(4) << ','
      << s.avg_size.to_decimal(4) << ',' << s.avg_max_size.to_decimal(4) << ','
      << s.avg_ir_violations.to_decimal(4) << ',' << s.avg_ns_deviators.to_decimal(4) << ','
      << s.avg_utility.to_decimal(4) << ',' << s.avg_change.to_decimal(4) << ','
      << s.positive_fraction.to_decimal(4) << '\n';
}

}  // namespace hde
