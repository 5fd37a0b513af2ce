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

#ifndef HDE_DYNAMICS_HPP_
#define HDE_DYNAMICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hde/deviation.hpp"
#include "hde/perception.hpp"

namespace hde {

// Which deviations a dynamics performs and how utilities react to them.
struct DynamicsRule {
  Kind kind = Kind::kNS;
  PerceptionModel model;
  Filter filter = Filter::kAny;
};

DynamicState initial_state(const Game& game, const Partition& partition);

// FNV-1a over the matrix entries; used as the per-step utility digest.
std::uint64_t digest(const UtilityMatrix& utilities);
std::string digest_hex(const UtilityMatrix& utilities);

struct Rejection {
  std::string reason;
  std::optional<Rational> margin;  // the first failing inequality, if any
};

using StepResult = std::variant<DynamicState, Rejection>;

// Validates `d` against the rule at `state`, then applies it and the
// perception update. The classification is always taken before the update.
StepResult step(const Game& game, const DynamicState& state, const Deviation& d,
                const DynamicsRule& rule);

// Thrown by run() when a scripted deviation is rejected.
class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t index, const std::string& reason);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct Policy {
  enum class Type { kRandom, kFirst, kScripted };
  Type type = Type::kFirst;
  std::uint64_t seed = 0;
  std::vector<Deviation> script;

  static Policy random(std::uint64_t seed) { return {Type::kRandom, seed, {}}; }
  static Policy first() { return {Type::kFirst, 0, {}}; }
  static Policy scripted(std::vector<Deviation> s) { return {Type::kScripted, 0, std::move(s)}; }
};

struct RunLimits {
  std::size_t max_steps = 100000;
  std::optional<std::size_t> size_cap;
  bool record = true;  // keep per-step records in the trace
};

struct StepRecord {
  std::size_t t = 0;
  Deviation deviation;
  Classification classification;
  std::uint64_t digest = 0;
};

enum class Outcome {
  kConverged,      // final state is stable for the rule's kind
  kStepLimit,      // max_steps reached while unstable
  kScriptEnd,      // scripted policy exhausted while unstable
  kStalled,        // no deviation passes the filter, yet the state is unstable
  kCycleCertified  // produced by verify tooling, never by run()
};

std::string_view to_string(Outcome outcome);

struct Trace {
  DynamicsRule rule;
  DynamicState initial;
  std::vector<StepRecord> records;
  std::size_t steps = 0;
  Outcome outcome = Outcome::kStepLimit;
  DynamicState final_state;
};

Trace run(const Game& game, const DynamicState& initial, const DynamicsRule& rule,
          const Policy& policy, const RunLimits& limits);

// Evidence for one scripted step: the inequalities that make it valid in the
// first and the second certified period.
struct StepEvidence {
  std::vector<Inequality> first;
  std::vector<Inequality> second;
};

struct CycleCertificate {
  std::size_t t0 = 0;
  std::size_t period = 0;
  std::vector<Deviation> script;
  UtilityMatrix pair_deltas;  // u^{t0+p} - u^{t0}
  std::vector<StepEvidence> evidence;
  // True when every margin is identical in both periods (zero slope);
  // otherwise some margins grow, which is still sound.
  bool margins_constant = true;
};

struct Certification {
  std::optional<CycleCertificate> certificate;
  std::string failure;
  bool ok() const { return certificate.has_value(); }
};

// Runs the warmup, then two full periods with full validation. Because every
// perception update is a constant per period, each margin is affine in the
// period index; validity in period one plus non-negative slope certifies
// every later period.
Certification certify_cycle(const Game& game, const DynamicsRule& rule, const Partition& initial,
                            const std::vector<Deviation>& warmup,
                            const std::vector<Deviation>& period);

struct ReversedCycle {
  Game game;
  DynamicsRule rule;
  Partition initial;
  std::vector<Deviation> period;
};

// Turns a certified resentful single-agent cycle into an appreciative one
// (and vice versa): the new game starts from the negated utilities at the
// start of the period, and the period is walked backwards.
ReversedCycle reverse_periodic(const Game& game, const DynamicsRule& rule, const Partition& initial,
                               const std::vector<Deviation>& warmup,
                               const std::vector<Deviation>& period);

struct SearchLimits {
  std::size_t bound = 0;
  std::size_t max_states = 2'000'000;
  std::optional<std::size_t> size_cap;
};

// Breadth-first search for a shortest deviation script that reaches a state
// stable for rule.kind. Returns nullopt when none exists within the bound.
// Throws ResourceError when the state budget is exhausted.
std::optional<std::vector<Deviation>> shortest_sequence(const Game& game,
                                                        const DynamicState& initial,
                                                        const DynamicsRule& rule,
                                                        const SearchLimits& limits);

}  // namespace hde

#endif  // HDE_DYNAMICS_HPP_
