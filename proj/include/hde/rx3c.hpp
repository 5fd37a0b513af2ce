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

#ifndef HDE_RX3C_HPP_
#define HDE_RX3C_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hde/dynamics.hpp"

namespace hde {

using Triple = std::array<std::size_t, 3>;

// Restricted exact cover by 3-sets: universe {0..3t-1}, 3t triples, each
// element in exactly three triples.
struct Rx3cInstance {
  std::size_t t = 0;
  std::vector<Triple> family;
};

std::optional<std::string> validate_rx3c(std::size_t t, const std::vector<Triple>& family);

// Throws UsageError carrying the validate_rx3c diagnostic.
Rx3cInstance build_rx3c(std::size_t t, std::vector<Triple> family);

// Three copies of each block {3b, 3b+1, 3b+2}; always coverable.
Rx3cInstance default_rx3c(std::size_t t);

// Indices into the family of an exact cover, or nullopt.
std::optional<std::vector<std::size_t>> find_exact_cover(const Rx3cInstance& instance);

enum class Target { kNSIS, kCNS, kCS };
enum class Variant { kResentful, kAppreciative };

std::string_view to_string(Target target);
std::string_view to_string(Variant variant);
Target parse_target(std::string_view text);    // ns_is|ns|is|cns|cs
Variant parse_variant(std::string_view text);  // resentful|appreciative

struct ReductionOutput {
  Game game;
  std::size_t k = 0;
  Target target = Target::kNSIS;
  Variant variant = Variant::kResentful;
  DynamicsRule rule;  // kind used to replay witnesses (IS for the NS/IS target)
  std::vector<std::string> labels;  // role label per agent, e.g. "x1", "S2", "f1", "p0", "p1,2"
  std::vector<Agent> elements;
  std::vector<Agent> sets;
  std::vector<Agent> fillers;
  std::vector<Agent> penalizers;
};

ReductionOutput reduce(const Rx3cInstance& instance, Target target, Variant variant);

// The yes-direction script of length k built from an exact cover (indices
// into the family). Throws UsageError when the cover is not exact.
std::vector<Deviation> witness(const Rx3cInstance& instance, const std::vector<std::size_t>& cover,
                               const ReductionOutput& output);

}  // namespace hde

#endif  // HDE_RX3C_HPP_
