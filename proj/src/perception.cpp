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

#include "hde/perception.hpp"

#include <string>

namespace hde {

std::string_view to_string(PerceptionKind kind) {
  switch (kind) {
    case PerceptionKind::kNone: return "none";
    case PerceptionKind::kResent: return "resent";
    case PerceptionKind::kAppreciation: return "appreciation";
    case PerceptionKind::kResentAppreciation: return "both";
    case PerceptionKind::kDeviatorResent: return "deviator-resent";
  }
  return "?";
}

PerceptionKind parse_perception(std::string_view text) {
  if (text == "none") return PerceptionKind::kNone;
  if (text == "resent") return PerceptionKind::kResent;
  if (text == "appreciation") return PerceptionKind::kAppreciation;
  if (text == "both") return PerceptionKind::kResentAppreciation;
  if (text == "deviator-resent") return PerceptionKind::kDeviatorResent;
  throw UsageError("unknown perception model '" + std::string(text) +
                   "' (expected none|resent|appreciation|both|deviator-resent)");
}

PerceptionModel::PerceptionModel(PerceptionKind k, Rational c) : kind(k), coefficient(c) {
  if (!(coefficient > Rational(0))) throw ContractError("change coefficient must be positive");
}

UtilityMatrix update_utilities(const Partition& before, const UtilityMatrix& utilities,
                               const Deviation& d, const PerceptionModel& model) {
  UtilityMatrix u = utilities;
  const Rational& c = model.coefficient;
  const bool resent = model.kind == PerceptionKind::kResent ||
                      model.kind == PerceptionKind::kResentAppreciation;
  const bool appreciation = model.kind == PerceptionKind::kAppreciation ||
                            model.kind == PerceptionKind::kResentAppreciation;

  if (const auto* s = std::get_if<SingleMove>(&d)) {
    check_well_formed(before, d);
    const Agent k = s->agent;
    for (Agent i : before.coalition_of(k)) {
      if (i == k) continue;
      if (resent) u.add(i, k, -c);
      if (model.kind == PerceptionKind::kDeviatorResent) u.add(k, i, -c);
    }
    if (appreciation && s->target) {
      for (Agent i : before[*s->target]) u.add(i, k, c);
    }
    return u;
  }

  if (model.kind == PerceptionKind::kResentAppreciation) {
    throw UsageError("combined resent and appreciation is not defined for group deviations");
  }
  check_well_formed(before, d);
  const Coalition& members = std::get<GroupMove>(d).members;
  switch (model.kind) {
    case PerceptionKind::kResent:
      for (Agent j : members) {
        for (Agent i : before.coalition_of(j)) {
          if (!contains(members, i)) u.add(i, j, -c);
        }
      }
      break;
    case PerceptionKind::kAppreciation:
      for (Agent i : members) {
        for (Agent j : members) {
          if (i != j) u.add(i, j, c);
        }
      }
      break;
    case PerceptionKind::kDeviatorResent:
      for (Agent i : members) {
        for (Agent j : before.coalition_of(i)) {
          if (!contains(members, j)) u.add(i, j, -c);
        }
      }
      break;
    default:
      break;
  }
  return u;
}

}  // namespace hde
