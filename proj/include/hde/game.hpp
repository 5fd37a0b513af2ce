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

#ifndef HDE_GAME_HPP_
#define HDE_GAME_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hde/errors.hpp"
#include "hde/rational.hpp"

namespace hde {

// Agents are dense indices 0..n-1 internally. Everything user facing (JSON,
// diagnostics, CLI output) shows them as 1..n.
using Agent = std::size_t;

// A non-empty set of agents, kept sorted ascending.
using Coalition = std::vector<Agent>;

enum class Caf { kAS, kMF };

std::string_view to_string(Caf caf);
Caf parse_caf(std::string_view text);

// Dense n x n matrix of exact utilities. Entry (i, j) is agent i's value for
// agent j. The diagonal is pinned to zero.
class UtilityMatrix {
 public:
  UtilityMatrix() = default;
  explicit UtilityMatrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const { return n_; }
  const Rational& operator()(Agent i, Agent j) const { return data_[i * n_ + j]; }
  void set(Agent i, Agent j, const Rational& value);
  void add(Agent i, Agent j, const Rational& delta);
  std::span<const Rational> row(Agent i) const { return {data_.data() + i * n_, n_}; }

  friend bool operator==(const UtilityMatrix&, const UtilityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> data_;
};

// Coalition structure over agents 0..n-1. Coalitions are stored canonically:
// members ascending and coalitions ordered by their smallest member, so two
// equal partitions compare equal and coalition indices are deterministic.
class Partition {
 public:
  Partition() = default;
  // Throws ContractError carrying the validate_partition diagnostic.
  Partition(std::size_t n, std::vector<Coalition> coalitions);

  static Partition singletons(std::size_t n);
  static Partition grand(std::size_t n);

  std::size_t agent_count() const { return owner_.size(); }
  std::size_t size() const { return coalitions_.size(); }
  const std::vector<Coalition>& coalitions() const { return coalitions_; }
  const Coalition& operator[](std::size_t index) const { return coalitions_[index]; }
  std::size_t index_of(Agent agent) const { return owner_.at(agent); }
  const Coalition& coalition_of(Agent agent) const { return coalitions_[owner_.at(agent)]; }
  bool together(Agent a, Agent b) const { return owner_.at(a) == owner_.at(b); }

  // e.g. "{{1,2},{3}}"
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.coalitions_ == b.coalitions_;
  }

 private:
  std::vector<Coalition> coalitions_;
  std::vector<std::size_t> owner_;
};

// Returns nullopt when `coalitions` is a partition of {0..n-1}; otherwise a
// diagnostic naming the first violated invariant (agents shown 1-based).
std::optional<std::string> validate_partition(const std::vector<Coalition>& coalitions,
                                              std::size_t n);

class Game {
 public:
  Game(std::size_t n, Caf caf, UtilityMatrix initial_utilities);

  std::size_t n() const { return n_; }
  Caf caf() const { return caf_; }
  const UtilityMatrix& initial_utilities() const { return utilities_; }

 private:
  std::size_t n_;
  Caf caf_;
  UtilityMatrix utilities_;
};

// AS: sum of u(agent, j) over the other members. MF: that sum divided by
// |C| - 1, and 0 for a singleton. Throws ContractError if agent is not in C.
Rational aggregate(Caf caf, Agent agent, std::span<const Agent> coalition,
                   const UtilityMatrix& utilities);

inline Rational aggregate(const Game& game, Agent agent, std::span<const Agent> coalition,
                          const UtilityMatrix& utilities) {
  return aggregate(game.caf(), agent, coalition, utilities);
}

Rational partition_utility(const Game& game, Agent agent, const Partition& partition,
                           const UtilityMatrix& utilities);

// A coalition is individually rational for agent when it is worth at least
// the singleton, which is 0 under both aggregations.
bool is_individually_rational(const Game& game, Agent agent, std::span<const Agent> coalition,
                              const UtilityMatrix& utilities);

// Sorts and dedups; throws ContractError on an empty result.
Coalition make_coalition(std::vector<Agent> members);
bool contains(std::span<const Agent> coalition, Agent agent);
std::string coalition_to_string(std::span<const Agent> coalition);

}  // namespace hde

#endif  // HDE_GAME_HPP_
