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

#include "hde/game.hpp"

#include <algorithm>
#include <sstream>

namespace hde {

std::string_view to_string(Caf caf) { return caf == Caf::kAS ? "AS" : "MF"; }

Caf parse_caf(std::string_view text) {
  if (text == "AS" || text == "as") return Caf::kAS;
  if (text == "MF" || text == "mf") return Caf::kMF;
  throw UsageError("unknown aggregation '" + std::string(text) + "' (expected AS or MF)");
}

void UtilityMatrix::set(Agent i, Agent j, const Rational& value) {
  if (i >= n_ || j >= n_) throw ContractError("utility index out of range");
  if (i == j) {
    if (value != Rational(0)) throw ContractError("diagonal utilities must be 0");
    return;
  }
  data_[i * n_ + j] = value;
}

void UtilityMatrix::add(Agent i, Agent j, const Rational& delta) {
  if (i == j) throw ContractError("diagonal utilities are never updated");
  data_[i * n_ + j] += delta;
}

std::optional<std::string> validate_partition(const std::vector<Coalition>& coalitions,
                                              std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& c : coalitions) {
    if (c.empty()) return "empty coalition";
    for (Agent a : c) {
      if (a >= n) return "agent " + std::to_string(a + 1) + " out of range";
      if (seen[a]++) return "overlap at agent " + std::to_string(a + 1);
    }
  }
  for (Agent a = 0; a < n; ++a) {
    if (!seen[a]) return "agent " + std::to_string(a + 1) + " uncovered";
  }
  return std::nullopt;
}

Partition::Partition(std::size_t n, std::vector<Coalition> coalitions) {
  if (auto diag = validate_partition(coalitions, n)) throw ContractError("invalid partition: " + *diag);
  for (auto& c : coalitions) std::sort(c.begin(), c.end());
  std::sort(coalitions.begin(), coalitions.end(),
            [](const Coalition& a, const Coalition& b) { return a.front() < b.front(); });
  coalitions_ = std::move(coalitions);
  owner_.assign(n, 0);
  for (std::size_t k = 0; k < coalitions_.size(); ++k) {
    for (Agent a : coalitions_[k]) owner_[a] = k;
  }
}

Partition Partition::singletons(std::size_t n) {
  std::vector<Coalition> cs;
  for (Agent a = 0; a < n; ++a) cs.push_back({a});
  return Partition(n, std::move(cs));
}

Partition Partition::grand(std::size_t n) {
  Coalition all(n);
  for (Agent a = 0; a < n; ++a) all[a] = a;
  return Partition(n, {all});
}

std::string Partition::to_string() const {
  std::string out = "{";
  for (std::size_t k = 0; k < coalitions_.size(); ++k) {
    if (k) out += ",";
    out += coalition_to_string(coalitions_[k]);
  }
  return out + "}";
}

Game::Game(std::size_t n, Caf caf, UtilityMatrix initial_utilities)
    : n_(n), caf_(caf), utilities_(std::move(initial_utilities)) {
  if (n_ < 1) throw ContractError("a game needs at least one agent");
  if (utilities_.size() != n_) throw ContractError("utility matrix must be n x n");
}

Rational aggregate(Caf caf, Agent agent, std::span<const Agent> coalition,
                   const UtilityMatrix& utilities) {
  if (!contains(coalition, agent)) {
    throw ContractError("agent " + std::to_string(agent + 1) + " is not in coalition " +
                        coalition_to_string(coalition));
  }
  Rational sum;
  for (Agent j : coalition) {
    if (j != agent) sum += utilities(agent, j);
  }
  if (caf == Caf::kMF && coalition.size() >= 2) {
    return sum / Rational(static_cast<std::int64_t>(coalition.size() - 1));
  }
  return sum;
}

Rational partition_utility(const Game& game, Agent agent, const Partition& partition,
                           const UtilityMatrix& utilities) {
  if (partition.agent_count() != game.n()) throw ContractError("partition size does not match game");
  return aggregate(game, agent, partition.coalition_of(agent), utilities);
}

bool is_individually_rational(const Game& game, Agent agent, std::span<const Agent> coalition,
                              const UtilityMatrix& utilities) {
  return aggregate(game, agent, coalition, utilities) >= Rational(0);
}

Coalition make_coalition(std::vector<Agent> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw ContractError("coalition must be non-empty");
  return members;
}

bool contains(std::span<const Agent> coalition, Agent agent) {
  return std::find(coalition.begin(), coalition.end(), agent) != coalition.end();
}

std::string coalition_to_string(std::span<const Agent> coalition) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < coalition.size(); ++k) os << (k ? "," : "") << coalition[k] + 1;
  os << "}";
  return os.str();
}

}  // namespace hde
