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

#include "hde/axioms.hpp"

#include <algorithm>
#include <cctype>

#include "hde/rng.hpp"

namespace hde {
namespace {

constexpr std::int64_t kLow = -10;
constexpr std::int64_t kHigh = 10;

Rational value(Caf caf, Agent agent, const Coalition& coalition, const std::vector<Rational>& u) {
  UtilityMatrix m(u.size());
  for (Agent j = 0; j < u.size(); ++j) {
    if (j != agent) m.set(agent, j, u[j]);
  }
  return aggregate(caf, agent, coalition, m);
}

Coalition without(const Coalition& c, Agent j) {
  Coalition out;
  for (Agent k : c) {
    if (k != j) out.push_back(k);
  }
  return out;
}

bool violated(const std::string& relation, const Rational& lhs, const Rational& rhs) {
  if (relation == "<=") return !(lhs <= rhs);
  if (relation == ">=") return !(lhs >= rhs);
  if (relation == "<") return !(lhs < rhs);
  if (relation == ">") return !(lhs > rhs);
  throw ContractError("unknown relation " + relation);
}

struct Sampler {
  Rng rng;
  std::size_t max_n;

  std::size_t agents() { return static_cast<std::size_t>(rng.between(2, static_cast<std::int64_t>(max_n))); }
  Rational draw(std::int64_t lo, std::int64_t hi) { return Rational(rng.between(lo, hi)); }

  std::vector<Rational> vector(std::size_t n, Agent agent) {
    std::vector<Rational> u(n);
    for (Agent j = 0; j < n; ++j) {
      if (j != agent) u[j] = draw(kLow, kHigh);
    }
    return u;
  }

  // Random coalition containing `agent` and every agent in `forced`.
  Coalition coalition(std::size_t n, Agent agent, std::initializer_list<Agent> forced) {
    Coalition c;
    for (Agent k = 0; k < n; ++k) {
      bool in = k == agent || std::find(forced.begin(), forced.end(), k) != forced.end();
      if (in || rng.below(2) == 1) c.push_back(k);
    }
    return c;
  }

  Agent other_than(std::size_t n, Agent agent) {
    Agent j = rng.below(n - 1);
    return j >= agent ? j + 1 : j;
  }
};

Counterexample record(std::size_t n, Agent i, Coalition c, std::optional<Agent> j,
                      std::vector<Rational> u, std::optional<std::vector<Rational>> u2,
                      std::string relation, Rational lhs, Rational rhs) {
  return Counterexample{n, i, std::move(c), j, std::move(u), std::move(u2), std::move(relation), lhs, rhs};
}

// Evaluates one axiom instance; returns the record if it is violated.
std::optional<Counterexample> test_instance(Caf caf, Axiom axiom, const Counterexample& inst) {
  if (replay(caf, axiom, inst)) return inst;
  return std::nullopt;
}

// Draws one instance of the axiom's premise. Returns nullopt when the
// premise is not met (only IR_ATE conditions on a premise that is not
// directly constructible).
std::optional<Counterexample> draw_instance(Caf caf, Axiom axiom, Sampler& s) {
  const std::size_t n = s.agents();
  const Agent i = s.rng.below(n);
  const Agent j = s.other_than(n, i);
  std::vector<Rational> u = s.vector(n, i);
  switch (axiom) {
    case Axiom::kATE:
    case Axiom::kIR_ATE: {
      u[j] = s.draw(kLow, -1);
      Coalition c = s.coalition(n, i, {j});
      if (axiom == Axiom::kIR_ATE && value(caf, i, c, u) < Rational(0)) return std::nullopt;
      return record(n, i, c, j, u, std::nullopt, "<=", Rational(0), Rational(0));
    }
    case Axiom::kEM: {
      u[j] = s.draw(kLow, -1);
      std::vector<Rational> u2 = u;
      u2[j] = u[j] - s.draw(1, 10);
      Coalition c = s.coalition(n, i, {});
      return record(n, i, c, j, u, u2, ">=", Rational(0), Rational(0));
    }
    case Axiom::kED: {
      const Rational bound = enemy_domination_constant(u, i, j);
      std::vector<Rational> u2 = u;
      for (Agent k = 0; k < n; ++k) {
        if (k == i) continue;
        // Zero decrements are drawn often so the boundary is exercised.
        const std::int64_t dec = std::max<std::int64_t>(0, s.rng.between(-3, 5));
        u2[k] = (k == j ? bound : u[k]) - Rational(dec);
      }
      Coalition c = s.coalition(n, i, {j});
      return record(n, i, c, j, u, u2, "<", Rational(0), Rational(0));
    }
    case Axiom::kFN: {
      Coalition c = s.coalition(n, i, {});
      return record(n, i, c, std::nullopt, u, std::nullopt, "=>friend", Rational(0), Rational(0));
    }
    case Axiom::kSFD: {
      Coalition c = s.coalition(n, i, {j});
      for (Agent k : c) {
        if (k != i) u[k] = s.draw(kLow, 0);
      }
      u[j] = s.draw(1, kHigh);
      return record(n, i, c, j, u, std::nullopt, ">", Rational(0), Rational(0));
    }
  }
  return std::nullopt;
}

Counterexample example_seed() {
  // Agents a, b, c; u_a(b) = -1, u_a(c) = -3.
  return record(3, 0, {0, 1, 2}, Agent{1}, {Rational(0), Rational(-1), Rational(-3)}, std::nullopt,
                "<=", Rational(0), Rational(0));
}

}  // namespace

std::string_view to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::kATE: return "ATE";
    case Axiom::kIR_ATE: return "IR_ATE";
    case Axiom::kEM: return "EM";
    case Axiom::kED: return "ED";
    case Axiom::kFN: return "FN";
    case Axiom::kSFD: return "SFD";
  }
  return "?";
}

Axiom parse_axiom(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
  std::replace(t.begin(), t.end(), '-', '_');
  for (Axiom a : {Axiom::kATE, Axiom::kIR_ATE, Axiom::kEM, Axiom::kED, Axiom::kFN, Axiom::kSFD}) {
    if (t == to_string(a)) return a;
  }
  throw UsageError("unknown axiom '" + std::string(text) + "' (expected ATE|IR_ATE|EM|ED|FN|SFD)");
}

Rational enemy_domination_constant(std::span<const Rational> utilities, Agent agent, Agent other) {
  // The minimum is attained by adding every friend other than j.
  Rational friends;
  for (Agent k = 0; k < utilities.size(); ++k) {
    if (k != agent && k != other && utilities[k] > Rational(0)) friends += utilities[k];
  }
  return Rational(-1) - friends;
}

bool replay(Caf caf, Axiom axiom, const Counterexample& ce) {
  const Agent i = ce.agent;
  const Coalition& c = ce.coalition;
  switch (axiom) {
    case Axiom::kATE:
    case Axiom::kIR_ATE: {
      const Agent j = ce.other.value();
      if (!(ce.utilities[j] < Rational(0)) || !contains(c, j)) return false;
      const Rational lhs = value(caf, i, c, ce.utilities);
      if (axiom == Axiom::kIR_ATE && lhs < Rational(0)) return false;
      return violated("<=", lhs, value(caf, i, without(c, j), ce.utilities));
    }
    case Axiom::kEM: {
      const auto& u2 = ce.modified.value();
      return violated(">=", value(caf, i, c, ce.utilities), value(caf, i, c, u2));
    }
    case Axiom::kED: {
      const auto& u2 = ce.modified.value();
      const Agent j = ce.other.value();
      if (!contains(c, j)) return false;
      return violated("<", value(caf, i, c, u2), Rational(0));
    }
    case Axiom::kFN: {
      if (!(value(caf, i, c, ce.utilities) > Rational(0))) return false;
      return std::none_of(c.begin(), c.end(),
                          [&](Agent k) { return k != i && ce.utilities[k] > Rational(0); });
    }
    case Axiom::kSFD: {
      const Agent j = ce.other.value();
      return violated(">", value(caf, i, c, ce.utilities), value(caf, i, without(c, j), ce.utilities));
    }
  }
  return false;
}

AxiomVerdict check_axiom(Caf caf, Axiom axiom, std::size_t budget, std::uint64_t seed,
                         std::size_t max_n) {
  if (budget < 1) throw UsageError("axiom budget must be at least 1");
  if (max_n < 2) throw UsageError("axiom max_n must be at least 2");
  AxiomVerdict verdict{axiom, caf, std::nullopt, 0};

  auto finish = [&](Counterexample ce) {
    // Fill in the witnessed sides of the violated inequality.
    const Agent i = ce.agent;
    switch (axiom) {
      case Axiom::kATE:
      case Axiom::kIR_ATE:
        ce.lhs = value(caf, i, ce.coalition, ce.utilities);
        ce.rhs = value(caf, i, without(ce.coalition, *ce.other), ce.utilities);
        break;
      case Axiom::kEM:
        ce.lhs = value(caf, i, ce.coalition, ce.utilities);
        ce.rhs = value(caf, i, ce.coalition, *ce.modified);
        break;
      case Axiom::kED:
        ce.lhs = value(caf, i, ce.coalition, *ce.modified);
        break;
      case Axiom::kFN:
        ce.lhs = value(caf, i, ce.coalition, ce.utilities);
        break;
      case Axiom::kSFD:
        ce.lhs = value(caf, i, ce.coalition, ce.utilities);
        ce.rhs = value(caf, i, without(ce.coalition, *ce.other), ce.utilities);
        break;
    }
    verdict.counterexample = std::move(ce);
  };

  if (caf == Caf::kMF && axiom == Axiom::kATE) {
    ++verdict.samples_tried;
    if (auto ce = test_instance(caf, axiom, example_seed())) {
      finish(*ce);
      return verdict;
    }
  }

  Sampler sampler{Rng(seed, kAxiomStream), max_n};
  // IR_ATE rejects instances whose coalition is not individually rational;
  // the attempt cap keeps a pathological sampler from spinning forever.
  std::size_t attempts = 0;
  const std::size_t max_attempts = budget * 100;
  while (verdict.samples_tried < budget && attempts++ < max_attempts) {
    auto inst = draw_instance(caf, axiom, sampler);
    if (!inst) continue;
    ++verdict.samples_tried;
    if (auto ce = test_instance(caf, axiom, *inst)) {
      finish(*ce);
      return verdict;
    }
  }
  return verdict;
}

}  // namespace hde
