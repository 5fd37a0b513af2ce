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

#include "hde/deviation.hpp"

#include <algorithm>

namespace hde {
namespace {

constexpr std::size_t kMaxGroupCandidates = std::size_t{1} << 26;

Coalition with_agent(const Coalition& c, Agent a) {
  Coalition out = c;
  out.insert(std::upper_bound(out.begin(), out.end(), a), a);
  return out;
}

Coalition without_agent(const Coalition& c, Agent a) {
  Coalition out;
  out.reserve(c.size());
  for (Agent x : c) {
    if (x != a) out.push_back(x);
  }
  return out;
}

std::string agent_str(Agent a) { return std::to_string(a + 1); }

// Values of every agent's current coalition.
std::vector<Rational> current_values(const Game& game, const DynamicState& state) {
  std::vector<Rational> values(game.n());
  for (Agent a = 0; a < game.n(); ++a) {
    values[a] = aggregate(game, a, state.partition.coalition_of(a), state.utilities);
  }
  return values;
}

bool kind_holds(const DeviationAnalysis& an, Kind kind) {
  auto all = [](const std::vector<Margin>& ms, bool strict) {
    return std::all_of(ms.begin(), ms.end(), [strict](const Margin& m) {
      return strict ? m.value > Rational(0) : m.value >= Rational(0);
    });
  };
  switch (kind) {
    case Kind::kNS:
      return !an.group && all(an.movers, true);
    case Kind::kIS:
      return !an.group && all(an.movers, true) && all(an.joined, false);
    case Kind::kCNS:
      return !an.group && all(an.movers, true) && all(an.abandoned, false);
    case Kind::kCS:
      return an.group && all(an.movers, true);
    case Kind::kSCS:
      return an.group && all(an.movers, false) &&
             std::any_of(an.movers.begin(), an.movers.end(),
                         [](const Margin& m) { return m.value > Rational(0); });
  }
  return false;
}

// Depth-first walk over member sets in lexicographic order. The visitor
// returns false to stop the walk.
bool walk_subsets(std::size_t n, std::size_t cap, Coalition& current, Agent start,
                  const std::function<bool(const Coalition&)>& visit) {
  for (Agent a = start; a < n; ++a) {
    current.push_back(a);
    if (!visit(current)) return false;
    if (current.size() < cap && !walk_subsets(n, cap, current, a + 1, visit)) return false;
    current.pop_back();
  }
  return true;
}

std::size_t candidate_count(std::size_t n, std::size_t cap) {
  // sum_{k=1..cap} C(n, k), saturating.
  std::size_t total = 0;
  long double binom = 1;
  for (std::size_t k = 1; k <= cap && k <= n; ++k) {
    binom = binom * static_cast<long double>(n - k + 1) / static_cast<long double>(k);
    if (binom > static_cast<long double>(kMaxGroupCandidates)) return kMaxGroupCandidates + 1;
    total += static_cast<std::size_t>(binom + 0.5L);
    if (total > kMaxGroupCandidates) return total;
  }
  return total;
}

// Shared driver for single-agent enumeration; `visit` returns false to stop.
void for_each_single(const Game& game, const DynamicState& state, Kind kind, Filter filter,
                     const std::function<bool(Deviation)>& visit) {
  if (is_group_kind(kind)) throw ContractError("single-agent enumeration needs NS, IS or CNS");
  const Partition& p = state.partition;
  const UtilityMatrix& u = state.utilities;
  const std::size_t m = p.size();
  std::vector<Rational> sums(m);
  for (Agent i = 0; i < game.n(); ++i) {
    const std::size_t own = p.index_of(i);
    std::fill(sums.begin(), sums.end(), Rational(0));
    for (Agent j = 0; j < game.n(); ++j) {
      if (j != i) sums[p.index_of(j)] += u(i, j);
    }
    const std::size_t own_size = p[own].size();
    Rational current = sums[own];
    if (game.caf() == Caf::kMF && own_size >= 2) current /= Rational(static_cast<std::int64_t>(own_size - 1));

    auto consider = [&](std::optional<std::size_t> target, const Rational& after) -> bool {
      if (!(after > current)) return true;
      if (kind == Kind::kNS && filter == Filter::kAny) return visit(SingleMove{i, target});
      Deviation d = SingleMove{i, target};
      DeviationAnalysis an = analyze(game, state, d);
      if (kind_holds(an, kind) && passes_filter(an, filter)) return visit(std::move(d));
      return true;
    };

    for (std::size_t k = 0; k < m; ++k) {
      if (k == own) continue;
      Rational after = sums[k];
      if (game.caf() == Caf::kMF) after /= Rational(static_cast<std::int64_t>(p[k].size()));
      if (!consider(k, after)) return;
    }
    if (own_size > 1 && !consider(std::nullopt, Rational(0))) return;
  }
}

void for_each_group(const Game& game, const DynamicState& state, Kind kind, Filter filter,
                    std::optional<std::size_t> size_cap,
                    const std::function<bool(Deviation)>& visit) {
  if (!is_group_kind(kind)) throw ContractError("group enumeration needs CS or SCS");
  if (size_cap && *size_cap < 1) throw UsageError("size cap must be at least 1");
  const std::size_t n = game.n();
  const std::size_t cap = std::min(size_cap.value_or(n), n);
  if (candidate_count(n, cap) > kMaxGroupCandidates) {
    throw ResourceError("group enumeration over " + std::to_string(n) +
                        " agents exceeds the candidate budget; pass a size cap");
  }
  const std::vector<Rational> before = current_values(game, state);
  Coalition current;
  walk_subsets(n, cap, current, 0, [&](const Coalition& c) {
    if (state.partition.coalition_of(c.front()) == c) return true;
    bool strict_any = false;
    for (Agent a : c) {
      Rational after = aggregate(game, a, c, state.utilities);
      if (after < before[a]) return true;
      if (after == before[a]) {
        if (kind == Kind::kCS) return true;
      } else {
        strict_any = true;
      }
      if (filter == Filter::kIR && after < Rational(0)) return true;
      if (filter == Filter::kStrictSingleton && c.size() > 1 && !(after > Rational(0))) return true;
    }
    if (!strict_any) return true;
    return visit(GroupMove{c});
  });
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::kNS: return "NS";
    case Kind::kIS: return "IS";
    case Kind::kCNS: return "CNS";
    case Kind::kCS: return "CS";
    case Kind::kSCS: return "SCS";
  }
  return "?";
}

Kind parse_kind(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  if (t == "NS") return Kind::kNS;
  if (t == "IS") return Kind::kIS;
  if (t == "CNS") return Kind::kCNS;
  if (t == "CS") return Kind::kCS;
  if (t == "SCS") return Kind::kSCS;
  throw UsageError("unknown stability kind '" + std::string(text) + "' (expected ns|is|cns|cs|scs)");
}

std::vector<Kind> KindSet::list() const {
  std::vector<Kind> out;
  for (Kind k : {Kind::kNS, Kind::kIS, Kind::kCNS, Kind::kCS, Kind::kSCS}) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::string KindSet::to_string() const {
  std::string out;
  for (Kind k : list()) {
    if (!out.empty()) out += ",";
    out += hde::to_string(k);
  }
  return out;
}

std::string_view to_string(Filter f) {
  switch (f) {
    case Filter::kAny: return "any";
    case Filter::kIR: return "ir";
    case Filter::kStrictSingleton: return "strict-singleton";
  }
  return "?";
}

Filter parse_filter(std::string_view text) {
  for (Filter f : {Filter::kAny, Filter::kIR, Filter::kStrictSingleton}) {
    if (text == to_string(f)) return f;
  }
  throw UsageError("unknown filter '" + std::string(text) + "' (expected any|ir|strict-singleton)");
}

bool is_group(const Deviation& d) { return std::holds_alternative<GroupMove>(d); }

std::vector<Agent> deviators(const Deviation& d) {
  if (const auto* s = std::get_if<SingleMove>(&d)) return {s->agent};
  return std::get<GroupMove>(d).members;
}

std::string to_string(const Deviation& d) {
  if (const auto* s = std::get_if<SingleMove>(&d)) {
    return agent_str(s->agent) + "->" + (s->target ? "#" + std::to_string(*s->target + 1) : "new");
  }
  return "group" + coalition_to_string(std::get<GroupMove>(d).members);
}

void check_well_formed(const Partition& partition, const Deviation& d) {
  const std::size_t n = partition.agent_count();
  if (const auto* s = std::get_if<SingleMove>(&d)) {
    if (s->agent >= n) throw ContractError("deviating agent " + agent_str(s->agent) + " out of range");
    const std::size_t own = partition.index_of(s->agent);
    if (s->target) {
      if (*s->target >= partition.size()) {
        throw ContractError("target coalition #" + std::to_string(*s->target + 1) + " does not exist");
      }
      if (*s->target == own) throw ContractError("agent " + agent_str(s->agent) + " already in target");
    } else if (partition[own].size() == 1) {
      throw ContractError("agent " + agent_str(s->agent) + " is already alone");
    }
    return;
  }
  const Coalition& members = std::get<GroupMove>(d).members;
  if (members.empty()) throw ContractError("group deviation without members");
  if (!std::is_sorted(members.begin(), members.end()) ||
      std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ContractError("group members must be sorted and distinct");
  }
  if (members.back() >= n) throw ContractError("group member out of range");
  if (partition.coalition_of(members.front()) == members) {
    throw ContractError("group " + coalition_to_string(members) + " is already a coalition");
  }
}

Coalition resulting_coalition(const Partition& partition, const Deviation& d) {
  check_well_formed(partition, d);
  if (const auto* s = std::get_if<SingleMove>(&d)) {
    if (!s->target) return {s->agent};
    return with_agent(partition[*s->target], s->agent);
  }
  return std::get<GroupMove>(d).members;
}

Partition apply_deviation(const Partition& partition, const Deviation& d) {
  Coalition formed = resulting_coalition(partition, d);
  std::vector<Coalition> out;
  out.reserve(partition.size() + 1);
  for (const Coalition& c : partition.coalitions()) {
    Coalition rest;
    for (Agent a : c) {
      if (!contains(formed, a)) rest.push_back(a);
    }
    if (!rest.empty()) out.push_back(std::move(rest));
  }
  out.push_back(std::move(formed));
  return Partition(partition.agent_count(), std::move(out));
}

DeviationAnalysis analyze(const Game& game, const DynamicState& state, const Deviation& d) {
  const Partition& p = state.partition;
  const UtilityMatrix& u = state.utilities;
  const Coalition formed = resulting_coalition(p, d);
  DeviationAnalysis an;
  an.group = is_group(d);
  for (Agent a : deviators(d)) {
    Rational after = aggregate(game, a, formed, u);
    Rational before = aggregate(game, a, p.coalition_of(a), u);
    an.movers.push_back({a, after - before});
    an.rational.push_back({a, after});
  }
  if (const auto* s = std::get_if<SingleMove>(&d)) {
    const Coalition& old = p.coalition_of(s->agent);
    const Coalition left = without_agent(old, s->agent);
    for (Agent j : left) {
      an.abandoned.push_back({j, aggregate(game, j, left, u) - aggregate(game, j, old, u)});
    }
    if (s->target) {
      const Coalition& target = p[*s->target];
      for (Agent j : target) {
        an.joined.push_back({j, aggregate(game, j, formed, u) - aggregate(game, j, target, u)});
      }
    }
  }
  return an;
}

Classification classify(const DeviationAnalysis& analysis) {
  Classification c;
  for (Kind k : {Kind::kNS, Kind::kIS, Kind::kCNS, Kind::kCS, Kind::kSCS}) {
    if (kind_holds(analysis, k)) c.kinds.insert(k);
  }
  c.ir = passes_filter(analysis, Filter::kIR);
  return c;
}

Classification classify_deviation(const Game& game, const DynamicState& state, const Deviation& d) {
  return classify(analyze(game, state, d));
}

bool passes_filter(const DeviationAnalysis& analysis, Filter filter) {
  switch (filter) {
    case Filter::kAny:
      return true;
    case Filter::kIR:
      return std::all_of(analysis.rational.begin(), analysis.rational.end(),
                         [](const Margin& m) { return m.value >= Rational(0); });
    case Filter::kStrictSingleton: {
      // Only a move into a singleton (value 0, nobody else) escapes the
      // strict requirement; a formed coalition of size >= 2 must beat 0.
      const bool into_singleton = analysis.rational.size() == 1 && analysis.joined.empty();
      if (into_singleton) return true;
      return std::all_of(analysis.rational.begin(), analysis.rational.end(),
                         [](const Margin& m) { return m.value > Rational(0); });
    }
  }
  return false;
}

std::vector<Inequality> required_inequalities(const DeviationAnalysis& an, Kind kind, Filter filter) {
  std::vector<Inequality> out;
  auto push = [&](const std::vector<Margin>& ms, const std::string& what, bool strict) {
    for (const Margin& m : ms) out.push_back({what + " of agent " + agent_str(m.agent), m.value, strict});
  };
  if (an.group != is_group_kind(kind)) {
    out.push_back({std::string(an.group ? "group deviation" : "single-agent deviation") +
                       " cannot be " + std::string(to_string(kind)),
                   Rational(-1), true});
    return out;
  }
  switch (kind) {
    case Kind::kNS:
      push(an.movers, "improvement", true);
      break;
    case Kind::kIS:
      push(an.movers, "improvement", true);
      push(an.joined, "consent (joined)", false);
      break;
    case Kind::kCNS:
      push(an.movers, "improvement", true);
      push(an.abandoned, "consent (abandoned)", false);
      break;
    case Kind::kCS:
      push(an.movers, "improvement", true);
      break;
    case Kind::kSCS: {
      push(an.movers, "weak improvement", false);
      Rational best = an.movers.empty() ? Rational(0) : an.movers.front().value;
      for (const Margin& m : an.movers) best = std::max(best, m.value);
      out.push_back({"best improvement in group", best, true});
      break;
    }
  }
  if (filter == Filter::kIR) push(an.rational, "rationality", false);
  if (filter == Filter::kStrictSingleton) {
    const bool into_singleton = an.rational.size() == 1 && an.joined.empty();
    if (!into_singleton) push(an.rational, "strict preference over singleton", true);
  }
  return out;
}

std::vector<Deviation> enumerate_single(const Game& game, const DynamicState& state, Kind kind,
                                        Filter filter) {
  std::vector<Deviation> out;
  for_each_single(game, state, kind, filter, [&](Deviation d) {
    out.push_back(std::move(d));
    return true;
  });
  return out;
}

std::vector<Deviation> enumerate_group(const Game& game, const DynamicState& state, Kind kind,
                                       Filter filter, std::optional<std::size_t> size_cap) {
  std::vector<Deviation> out;
  for_each_group(game, state, kind, filter, size_cap, [&](Deviation d) {
    out.push_back(std::move(d));
    return true;
  });
  return out;
}

std::vector<Deviation> enumerate(const Game& game, const DynamicState& state, Kind kind,
                                 Filter filter, std::optional<std::size_t> size_cap) {
  if (is_group_kind(kind)) return enumerate_group(game, state, kind, filter, size_cap);
  return enumerate_single(game, state, kind, filter);
}

bool is_stable(const Game& game, const DynamicState& state, Kind kind,
               std::optional<std::size_t> size_cap) {
  bool found = false;
  auto stop = [&](Deviation) {
    found = true;
    return false;
  };
  if (is_group_kind(kind)) {
    for_each_group(game, state, kind, Filter::kAny, size_cap, stop);
  } else {
    for_each_single(game, state, kind, Filter::kAny, stop);
  }
  return !found;
}

}  // namespace hde
