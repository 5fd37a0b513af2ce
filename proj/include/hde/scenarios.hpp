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

#ifndef HDE_SCENARIOS_HPP_
#define HDE_SCENARIOS_HPP_

#include <string>
#include <vector>

#include "hde/dynamics.hpp"

namespace hde {

// A constructive example bundled with the deviation script that exhibits it.
// Cycle scenarios carry warmup + period; converging scenarios carry a script
// that ends in a stable state.
struct Scenario {
  enum class Expected { kCycle, kConverges };

  std::string name;
  std::string description;
  Game game;
  DynamicsRule rule;
  Partition initial;
  std::vector<Deviation> warmup;
  std::vector<Deviation> period;
  std::vector<Deviation> script;
  Expected expected = Expected::kCycle;
  std::vector<std::string> agent_names;
  // Utility change per period for cycle scenarios, transcribed from the
  // coefficients of x in the source tables.
  UtilityMatrix expected_deltas;
};

std::vector<std::string> builtin_names();

// Throws UsageError listing the available names for an unknown name.
Scenario builtin(const std::string& name);

// Builds single-agent and group moves against a partition it keeps current,
// so scripts can be written in terms of "join agent x's coalition".
class ScriptBuilder {
 public:
  explicit ScriptBuilder(Partition start) : partition_(std::move(start)) {}

  ScriptBuilder& join(Agent mover, Agent host);
  ScriptBuilder& alone(Agent mover);
  ScriptBuilder& group(std::vector<Agent> members);

  const Partition& partition() const { return partition_; }
  std::vector<Deviation> take() { return std::move(script_); }

 private:
  ScriptBuilder& push(Deviation d);

  Partition partition_;
  std::vector<Deviation> script_;
};

}  // namespace hde

#endif  // HDE_SCENARIOS_HPP_
