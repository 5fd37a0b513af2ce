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

#ifndef HDE_DEVIATION_HPP_
#define HDE_DEVIATION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hde/game.hpp"

namespace hde {

enum class Kind : std::uint8_t { kNS, kIS, kCNS, kCS, kSCS };

std::string_view to_string(Kind kind);
Kind parse_kind(std::string_view text);
inline bool is_group_kind(Kind kind) { return kind == Kind::kCS || kind == Kind::kSCS; }

class KindSet {
 public:
  KindSet() = default;
  KindSet(std::initializer_list<Kind> kinds) {
    for (Kind k : kinds) insert(k);
  }
  void insert(Kind k) { bits_ |= bit(k); }
  bool contains(Kind k) const { return (bits_ & bit(k)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<Kind> list() const;
  // e.g. "NS,CNS"
  std::string to_string() const;
  friend bool operator==(const KindSet&, const KindSet&) = default;

 private:
  static std::uint8_t bit(Kind k) { return static_cast<std::uint8_t>(1u << static_cast<int>(k)); }
  std::uint8_t bits_ = 0;
};

// Agent leaves her coalition for coalition `target` (an index into the current
// partition) or, when target is empty, for a new singleton.
struct SingleMove {
  Agent agent = 0;
  std::optional<std::size_t> target;
  friend bool operator==(const SingleMove&, const SingleMove&) = default;
};

// The members leave their coalitions and form exactly `members`.
struct GroupMove {
  Coalition members;
  friend bool operator==(const GroupMove&, const GroupMove&) = default;
};

using Deviation = std::variant<SingleMove, GroupMove>;

inline Deviation join(Agent agent, std::size_t target) { return SingleMove{agent, target}; }
inline Deviation go_alone(Agent agent) { return SingleMove{agent, std::nullopt}; }
inline Deviation group(std::vector<Agent> members) {
  return GroupMove{make_coalition(std::move(members))};
}

bool is_group(const Deviation& d);
std::vector<Agent> deviators(const Deviation& d);
// "2->#1", "2->new", "group{1,2}"; agents and coalition indices 1-based.
std::string to_string(const Deviation& d);

// Snapshot of a running dynamics: partition pi^t, utilities u^t, and t.
struct DynamicState {
  Partition partition;
  UtilityMatrix utilities;
  std::size_t step = 0;
};

// Throws ContractError unless the deviation is well formed against the
// partition and actually changes it.
void check_well_formed(const Partition& partition, const Deviation& d);

Partition apply_deviation(const Partition& partition, const Deviation& d);

// Coalition the deviators end up in.
Coalition resulting_coalition(const Partition& partition, const Deviation& d);

// One side of a deviation inequality: `value` is (after - before) for an
// improvement condition, or the new coalition's value for a rationality
// condition. The inequality is value > 0 or value >= 0 depending on use.
struct Margin {
  Agent agent = 0;
  Rational value;
};

// Every quantity the five deviation definitions compare, evaluated under the
// state's current (pre-update) utilities.
struct DeviationAnalysis {
  bool group = false;
  std::vector<Margin> movers;     // each deviator: after - before
  std::vector<Margin> joined;     // members of the joined coalition (single moves)
  std::vector<Margin> abandoned;  // rest of the abandoned coalition (single moves)
  std::vector<Margin> rational;   // each deviator: value of the resulting coalition
};

DeviationAnalysis analyze(const Game& game, const DynamicState& state, const Deviation& d);

struct Classification {
  KindSet kinds;
  bool ir = false;
};

Classification classify(const DeviationAnalysis& analysis);
Classification classify_deviation(const Game& game, const DynamicState& state,
                                  const Deviation& d);

// Constraint a deviation has to meet beyond its kind.
//   kAny: none.
//   kIR: every deviator ends in an individually rational coalition.
//   kStrictSingleton: a deviator only ends in a non-singleton coalition she
//     strictly prefers to being alone.
enum class Filter : std::uint8_t { kAny, kIR, kStrictSingleton };

std::string_view to_string(Filter f);
// Accepts any|ir|strict-singleton.
Filter parse_filter(std::string_view text);
bool passes_filter(const DeviationAnalysis& analysis, Filter filter);

// The inequalities that make `d` a `kind` deviation (plus rationality under
// the filter), labelled for diagnostics. Used for rejection messages and for
// cycle certification.
struct Inequality {
  std::string label;
  Rational margin;
  bool strict = true;
  bool holds() const { return strict ? margin > Rational(0) : margin >= Rational(0); }
};
std::vector<Inequality> required_inequalities(const DeviationAnalysis& analysis, Kind kind,
                                              Filter filter);

// All single-agent deviations of a single-agent kind in deterministic order:
// agent, then target coalition index, with the new singleton last (and only
// offered when the agent is not already alone).
std::vector<Deviation> enumerate_single(const Game& game, const DynamicState& state, Kind kind,
                                        Filter filter);

// All group deviations of size <= size_cap (default n) that differ from every
// existing coalition, in lexicographic order of the sorted member lists.
std::vector<Deviation> enumerate_group(const Game& game, const DynamicState& state, Kind kind,
                                       Filter filter, std::optional<std::size_t> size_cap = {});

std::vector<Deviation> enumerate(const Game& game, const DynamicState& state, Kind kind,
                                 Filter filter, std::optional<std::size_t> size_cap = {});

// Absence of any `kind` deviation; never filtered.
bool is_stable(const Game& game, const DynamicState& state, Kind kind,
               std::optional<std::size_t> size_cap = {});

}  // namespace hde

#endif  // HDE_DEVIATION_HPP_
