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

#ifndef HDE_EXPERIMENT_HPP_
#define HDE_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "hde/dynamics.hpp"

namespace hde {

// Off-diagonal integers uniform in [-100, 100]; AS aggregation.
Game gen_uniform(std::size_t n, std::uint64_t seed);

// Each agent b gets a base qualification mu_b uniform in [-100, 100]; every
// u_a(b) is a N(mu_b, sigma) draw rounded to the nearest integer (ties away
// from zero). Draws are not clamped.
Game gen_gaussian(std::size_t n, std::uint64_t seed, double sigma = 10.0);

enum class UtilityModel { kUniform, kGaussian };
std::string_view to_string(UtilityModel model);
UtilityModel parse_utility_model(std::string_view text);

struct OutcomeStats {
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::kStepLimit;
  std::size_t steps = 0;
  std::size_t coalitions = 0;
  Rational avg_size;
  std::size_t max_size = 0;
  std::size_t ir_violations = 0;  // under the initial utilities
  std::size_t ns_deviators = 0;   // under the initial utilities
  Rational avg_utility;           // final partition, final utilities
  Rational avg_change;            // mean of u^T - u^0 over ordered pairs
  Rational positive_fraction;     // ordered pairs with u^T > 0
  bool timed_out() const { return outcome == Outcome::kStepLimit; }
};

OutcomeStats outcome_stats(const Game& game, const Trace& trace);

struct ExperimentConfig {
  std::size_t n = 20;
  std::size_t games = 20;
  UtilityModel utilities = UtilityModel::kUniform;
  double sigma = 10.0;
  PerceptionModel model{PerceptionKind::kResent};
  Kind kind = Kind::kNS;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100000;
  std::size_t jobs = 1;
};

struct BatchSummary {
  std::size_t games = 0;
  std::size_t converged = 0;
  std::size_t timeouts = 0;
  std::size_t all_singleton = 0;  // converged runs ending in singletons
  // Means over all rows except avg_steps, which skips timeouts.
  Rational avg_steps;
  Rational avg_coalitions;
  Rational avg_size;
  Rational avg_max_size;
  Rational avg_ir_violations;
  Rational avg_ns_deviators;
  Rational avg_utility;
  Rational avg_change;
  Rational positive_fraction;
};

struct BatchResult {
  ExperimentConfig config;
  std::vector<OutcomeStats> rows;  // in seed order
  BatchSummary summary;
};

// Game i uses seed config.seed + i for both generation and deviation choice
// (on independent streams). Rows are ordered by seed whatever `jobs` is.
BatchResult run_batch(const ExperimentConfig& config);

void write_csv(std::ostream& out, const BatchResult& result);

}  // namespace hde

#endif  // HDE_EXPERIMENT_HPP_
