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

#include "hde/dynamics.hpp"

#include <cstdio>
#include <deque>
#include <unordered_map>

#include "hde/rng.hpp"

namespace hde {
namespace {

std::string first_failure(const std::vector<Inequality>& ineqs, std::optional<Rational>* margin) {
  for (const Inequality& q : ineqs) {
    if (!q.holds()) {
      if (margin) *margin = q.margin;
      return q.label + " is " + q.margin.to_string() + ", needs " + (q.strict ? "> 0" : ">= 0");
    }
  }
  return {};
}

DynamicState advance(const DynamicState& state, const Deviation& d, const DynamicsRule& rule) {
  DynamicState next;
  next.utilities = update_utilities(state.partition, state.utilities, d, rule.model);
  next.partition = apply_deviation(state.partition, d);
  next.step = state.step + 1;
  return next;
}

// Canonical byte key for the BFS visited set.
std::string state_key(const DynamicState& s) {
  std::string key;
  for (const Coalition& c : s.partition.coalitions()) {
    for (Agent a : c) key += std::to_string(a) + ",";
    key += "|";
  }
  const std::size_t n = s.utilities.size();
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      const Rational& r = s.utilities(i, j);
      key += std::to_string(r.num());
      if (!r.is_integer()) key += "/" + std::to_string(r.den());
      key += ";";
    }
  }
  return key;
}

}  // namespace

DynamicState initial_state(const Game& game, const Partition& partition) {
  if (partition.agent_count() != game.n()) throw ContractError("partition size does not match game");
  return DynamicState{partition, game.initial_utilities(), 0};
}

std::uint64_t digest(const UtilityMatrix& utilities) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::int64_t v) {
    auto x = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  const std::size_t n = utilities.size();
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      mix(utilities(i, j).num());
      mix(utilities(i, j).den());
    }
  }
  return h;
}

std::string digest_hex(const UtilityMatrix& utilities) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest(utilities)));
  return buf;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kConverged: return "converged";
    case Outcome::kStepLimit: return "step-limit";
    case Outcome::kScriptEnd: return "script-end";
    case Outcome::kStalled: return "stalled";
    case Outcome::kCycleCertified: return "cycle-certified";
  }
  return "?";
}

StepResult step(const Game& game, const DynamicState& state, const Deviation& d,
                const DynamicsRule& rule) {
  try {
    check_well_formed(state.partition, d);
  } catch (const ContractError& e) {
    return Rejection{std::string("malformed deviation: ") + e.what(), std::nullopt};
  }
  const DeviationAnalysis an = analyze(game, state, d);
  const auto ineqs = required_inequalities(an, rule.kind, rule.filter);
  Rejection rej;
  rej.reason = first_failure(ineqs, &rej.margin);
  if (!rej.reason.empty()) {
    rej.reason = "not a" + std::string(rule.filter == Filter::kAny ? "" : "n admissible") + " " +
                 std::string(to_string(rule.kind)) + " deviation: " + rej.reason;
    return rej;
  }
  return advance(state, d, rule);
}

ScriptError::ScriptError(std::size_t index, const std::string& reason)
    : std::runtime_error("script step " + std::to_string(index) + " rejected: " + reason),
      index_(index) {}

Trace run(const Game& game, const DynamicState& initial, const DynamicsRule& rule,
          const Policy& policy, const RunLimits& limits) {
  Trace trace;
  trace.rule = rule;
  trace.initial = initial;
  DynamicState state = initial;
  Rng rng(policy.seed, kChoiceStream);
  std::size_t cursor = 0;

  auto record = [&](const Deviation& d, const Classification& c) {
    if (!limits.record) return;
    trace.records.push_back({state.step, d, c, digest(state.utilities)});
  };

  for (;;) {
    if (policy.type == Policy::Type::kScripted) {
      if (cursor == policy.script.size()) {
        trace.outcome = is_stable(game, state, rule.kind, limits.size_cap) ? Outcome::kConverged
                                                                           : Outcome::kScriptEnd;
        break;
      }
      if (trace.steps >= limits.max_steps) {
        trace.outcome = Outcome::kStepLimit;
        break;
      }
      const Deviation& d = policy.script[cursor];
      const Classification c = [&] {
        try {
          return classify_deviation(game, state, d);
        } catch (const ContractError&) {
          return Classification{};
        }
      }();
      StepResult r = step(game, state, d, rule);
      if (auto* rej = std::get_if<Rejection>(&r)) throw ScriptError(cursor, rej->reason);
      state = std::get<DynamicState>(std::move(r));
      record(d, c);
      ++cursor;
      ++trace.steps;
      continue;
    }

    std::vector<Deviation> options = enumerate(game, state, rule.kind, rule.filter, limits.size_cap);
    if (options.empty()) {
      trace.outcome = (rule.filter == Filter::kAny || is_stable(game, state, rule.kind, limits.size_cap))
                          ? Outcome::kConverged
                          : Outcome::kStalled;
      break;
    }
    if (trace.steps >= limits.max_steps) {
      trace.outcome = Outcome::kStepLimit;
      break;
    }
    const std::size_t pick = policy.type == Policy::Type::kRandom ? rng.below(options.size()) : 0;
    const Deviation& d = options[pick];
    Classification c;
    if (limits.record) c = classify_deviation(game, state, d);
    state = advance(state, d, rule);
    record(d, c);
    ++trace.steps;
  }
  trace.final_state = std::move(state);
  return trace;
}

Certification certify_cycle(const Game& game, const DynamicsRule& rule, const Partition& initial,
                            const std::vector<Deviation>& warmup,
                            const std::vector<Deviation>& period) {
  Certification out;
  if (period.empty()) {
    out.failure = "empty period script";
    return out;
  }
  DynamicState state = initial_state(game, initial);
  for (std::size_t i = 0; i < warmup.size(); ++i) {
    StepResult r = step(game, state, warmup[i], rule);
    if (auto* rej = std::get_if<Rejection>(&r)) {
      out.failure = "warmup step " + std::to_string(i) + " invalid: " + rej->reason;
      return out;
    }
    state = std::get<DynamicState>(std::move(r));
  }

  CycleCertificate cert;
  cert.t0 = warmup.size();
  cert.period = period.size();
  cert.script = period;
  cert.evidence.resize(period.size());

  std::vector<DynamicState> starts{state};
  std::vector<Partition> first_partitions;
  for (int cycle = 0; cycle < 2; ++cycle) {
    for (std::size_t l = 0; l < period.size(); ++l) {
      if (cycle == 0) {
        first_partitions.push_back(state.partition);
      } else if (!(state.partition == first_partitions[l])) {
        out.failure = "partition mismatch at period step " + std::to_string(l);
        return out;
      }
      DeviationAnalysis an;
      try {
        an = analyze(game, state, period[l]);
      } catch (const ContractError& e) {
        out.failure = "period " + std::to_string(cycle + 1) + " step " + std::to_string(l) +
                      " invalid: malformed deviation: " + e.what();
        return out;
      }
      auto ineqs = required_inequalities(an, rule.kind, rule.filter);
      std::string fail = first_failure(ineqs, nullptr);
      if (!fail.empty()) {
        out.failure = "period " + std::to_string(cycle + 1) + " step " + std::to_string(l) +
                      " invalid: " + fail;
        return out;
      }
      (cycle == 0 ? cert.evidence[l].first : cert.evidence[l].second) = std::move(ineqs);
      state = advance(state, period[l], rule);
    }
    if (!(state.partition == starts.front().partition)) {
      out.failure = "partition after period " + std::to_string(cycle + 1) +
                    " differs from the period start";
      return out;
    }
    starts.push_back(state);
  }

  const std::size_t n = game.n();
  cert.pair_deltas = UtilityMatrix(n);
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      if (i == j) continue;
      Rational d1 = starts[1].utilities(i, j) - starts[0].utilities(i, j);
      Rational d2 = starts[2].utilities(i, j) - starts[1].utilities(i, j);
      if (d1 != d2) {
        out.failure = "per-period delta of pair (" + std::to_string(i + 1) + "," +
                      std::to_string(j + 1) + ") drifts";
        return out;
      }
      cert.pair_deltas.set(i, j, d1);
    }
  }

  for (std::size_t l = 0; l < period.size(); ++l) {
    const auto& a = cert.evidence[l].first;
    const auto& b = cert.evidence[l].second;
    if (a.size() != b.size()) {
      out.failure = "inequality structure changes at period step " + std::to_string(l);
      return out;
    }
    for (std::size_t q = 0; q < a.size(); ++q) {
      if (b[q].margin < a[q].margin) {
        out.failure = "margin drift at period step " + std::to_string(l) + ": " + a[q].label +
                      " falls from " + a[q].margin.to_string() + " to " + b[q].margin.to_string();
        return out;
      }
      if (b[q].margin != a[q].margin) cert.margins_constant = false;
    }
  }
  out.certificate = std::move(cert);
  return out;
}

ReversedCycle reverse_periodic(const Game& game, const DynamicsRule& rule, const Partition& initial,
                               const std::vector<Deviation>& warmup,
                               const std::vector<Deviation>& period) {
  PerceptionKind flipped;
  if (rule.model.kind == PerceptionKind::kResent) {
    flipped = PerceptionKind::kAppreciation;
  } else if (rule.model.kind == PerceptionKind::kAppreciation) {
    flipped = PerceptionKind::kResent;
  } else {
    throw ContractError("reversal needs a resentful or appreciative cycle");
  }
  for (const Deviation& d : period) {
    if (is_group(d)) throw ContractError("reversal is defined for single-agent cycles only");
  }
  Certification cert = certify_cycle(game, rule, initial, warmup, period);
  if (!cert.ok()) throw ContractError("input does not certify: " + cert.failure);

  DynamicState state = initial_state(game, initial);
  for (const Deviation& d : warmup) state = advance(state, d, rule);
  const UtilityMatrix start_utilities = state.utilities;

  // partitions[l] = pi^{t0+l}, l = 0..p
  std::vector<Partition> partitions{state.partition};
  for (const Deviation& d : period) {
    state = advance(state, d, rule);
    partitions.push_back(state.partition);
  }

  const std::size_t n = game.n();
  const std::size_t p = period.size();
  UtilityMatrix negated(n);
  for (Agent i = 0; i < n; ++i) {
    for (Agent j = 0; j < n; ++j) {
      if (i != j) negated.set(i, j, -start_utilities(i, j));
    }
  }

  // sigma^l = pi^{t0+p-l}; the step sigma^l -> sigma^{l+1} is taken by the
  // deviator of the original step p-l.
  std::vector<Deviation> reversed;
  for (std::size_t l = 0; l < p; ++l) {
    const Partition& from = partitions[p - l];
    const Partition& to = partitions[p - l - 1];
    const Agent mover = std::get<SingleMove>(period[p - l - 1]).agent;
    const Coalition& dest = to.coalition_of(mover);
    Deviation d;
    if (dest.size() == 1) {
      d = go_alone(mover);
    } else {
      const Agent mate = dest.front() == mover ? dest[1] : dest.front();
      d = join(mover, from.index_of(mate));
    }
    if (!(apply_deviation(from, d) == to)) throw ContractError("reversed step does not invert");
    reversed.push_back(d);
  }
  DynamicsRule out_rule{rule.kind, PerceptionModel(flipped, rule.model.coefficient), Filter::kAny};
  return ReversedCycle{Game(n, game.caf(), std::move(negated)), out_rule, partitions[p],
                       std::move(reversed)};
}

std::optional<std::vector<Deviation>> shortest_sequence(const Game& game,
                                                        const DynamicState& initial,
                                                        const DynamicsRule& rule,
                                                        const SearchLimits& limits) {
  struct Node {
    DynamicState state;
    std::size_t parent;
    Deviation via;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::size_t> frontier;
  nodes.push_back({initial, 0, Deviation{}, 0});
  seen.emplace(state_key(initial), 0);
  frontier.push_back(0);

  while (!frontier.empty()) {
    const std::size_t id = frontier.front();
    frontier.pop_front();
    if (is_stable(game, nodes[id].state, rule.kind, limits.size_cap)) {
      std::vector<Deviation> script;
      for (std::size_t at = id; at != 0; at = nodes[at].parent) script.push_back(nodes[at].via);
      return std::vector<Deviation>(script.rbegin(), script.rend());
    }
    if (nodes[id].depth >= limits.bound) continue;
    const auto options =
        enumerate(game, nodes[id].state, rule.kind, rule.filter, limits.size_cap);
    for (const Deviation& d : options) {
      DynamicState next = advance(nodes[id].state, d, rule);
      next.step = 0;
      auto [it, fresh] = seen.emplace(state_key(next), nodes.size());
      if (!fresh) continue;
      if (nodes.size() >= limits.max_states) {
        throw ResourceError("shortest_sequence exceeded " + std::to_string(limits.max_states) +
                            " states");
      }
      next.step = nodes[id].state.step + 1;
      nodes.push_back({std::move(next), id, d, nodes[id].depth + 1});
      frontier.push_back(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

}  // namespace hde
