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

#ifndef HDE_PERCEPTION_HPP_
#define HDE_PERCEPTION_HPP_

#include <string_view>

#include "hde/deviation.hpp"

namespace hde {

// How utilities react to a deviation.
//   Resent: agents left behind lower their value for the deviator.
//   Appreciation: agents joined raise their value for the deviator.
//   ResentAppreciation: both (single-agent deviations only).
//   DeviatorResent: the deviator lowers her value for everyone she abandons.
enum class PerceptionKind { kNone, kResent, kAppreciation, kResentAppreciation, kDeviatorResent };

std::string_view to_string(PerceptionKind kind);
// Accepts none|resent|appreciation|both|deviator-resent.
PerceptionKind parse_perception(std::string_view text);

struct PerceptionModel {
  PerceptionKind kind = PerceptionKind::kNone;
  Rational coefficient = Rational(1);

  PerceptionModel() = default;
  PerceptionModel(PerceptionKind k, Rational c = Rational(1));
};

// Utilities after `d` moved the dynamics from `before` to apply(before, d).
// Each prescribed entry moves by exactly the coefficient; nothing else
// changes. Throws UsageError for ResentAppreciation with a group deviation.
UtilityMatrix update_utilities(const Partition& before, const UtilityMatrix& utilities,
                               const Deviation& d, const PerceptionModel& model);

}  // namespace hde

#endif  // HDE_PERCEPTION_HPP_
