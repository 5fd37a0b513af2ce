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

#ifndef HDE_AXIOMS_HPP_
#define HDE_AXIOMS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hde/game.hpp"

namespace hde {

enum class Axiom { kATE, kIR_ATE, kEM, kED, kFN, kSFD };

std::string_view to_string(Axiom axiom);
// Accepts ATE, IR_ATE (or IR-ATE), EM, ED, FN, SFD, case-insensitively.
Axiom parse_axiom(std::string_view text);

// A single agent's view of a violated axiom. `utilities` is u_i and, for the
// variable-utility axioms (EM, ED), `modified` is u'_i. The axiom demands
// `lhs relation rhs`; the record holds values for which it fails.
struct Counterexample {
  std::size_t n = 0;
  Agent agent = 0;
  Coalition coalition;
  std::optional<Agent> other;  // the agent j the axiom quantifies over
  std::vector<Rational> utilities;
  std::optional<std::vector<Rational>> modified;
  std::string relation;  // "<=", ">=", "<", ">" or "=>friend"
  Rational lhs;
  Rational rhs;
};

struct AxiomVerdict {
  Axiom axiom = Axiom::kATE;
  Caf caf = Caf::kAS;
  std::optional<Counterexample> counterexample;
  std::size_t samples_tried = 0;
  bool holds() const { return !counterexample.has_value(); }
};

// Randomized falsification over n in [2, max_n] and integer utilities in
// [-10, 10]. Stops at the first counterexample. For MF/ATE the instance of
// the textbook MF counterexample is always tried first.
AxiomVerdict check_axiom(Caf caf, Axiom axiom, std::size_t budget, std::uint64_t seed,
                         std::size_t max_n);

// Recomputes both sides through aggregate() and reports whether the axiom
// is still violated by the record.
bool replay(Caf caf, Axiom axiom, const Counterexample& ce);

// The enemy-domination constant min over C containing i and j of
// -1 - sum_{k in C \ {j}} u_i(k). Valid for AS and MF alike because MF has
// the sign of AS on every coalition.
Rational enemy_domination_constant(std::span<const Rational> utilities, Agent agent, Agent other);

}  // namespace hde

#endif  // HDE_AXIOMS_HPP_
