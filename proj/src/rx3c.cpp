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

#include "hde/rx3c.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "hde/scenarios.hpp"

namespace hde {
namespace {

std::string lower(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t;
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

class Builder {
 public:
  Builder(std::size_t n, std::int64_t fallback) : u_(n) {
    for (Agent i = 0; i < n; ++i) {
      for (Agent j = 0; j < n; ++j) {
        if (i != j) u_.set(i, j, Rational(fallback));
      }
    }
  }
  void set(Agent i, Agent j, std::int64_t v) { u_.set(i, j, Rational(v)); }
  void both(Agent i, Agent j, std::int64_t v) {
    set(i, j, v);
    set(j, i, v);
  }
  UtilityMatrix take() { return std::move(u_); }

 private:
  UtilityMatrix u_;
};

bool in_set(const Triple& s, std::size_t x) { return std::find(s.begin(), s.end(), x) != s.end(); }

// Element, set and filler agents come first in every construction.
void lay_out_common(const Rx3cInstance& inst, ReductionOutput& out) {
  const std::size_t t = inst.t;
  for (std::size_t i = 0; i < 3 * t; ++i) {
    out.elements.push_back(i);
    out.labels.push_back("x" + idx(i));
  }
  for (std::size_t i = 0; i < 3 * t; ++i) {
    out.sets.push_back(3 * t + i);
    out.labels.push_back("S" + idx(i));
  }
  for (std::size_t i = 0; i < 2 * t; ++i) {
    out.fillers.push_back(6 * t + i);
    out.labels.push_back("f" + idx(i));
  }
}

void check_cover(const Rx3cInstance& inst, const std::vector<std::size_t>& cover) {
  std::vector<int> hits(3 * inst.t, 0);
  std::vector<bool> used(inst.family.size(), false);
  for (std::size_t s : cover) {
    if (s >= inst.family.size()) throw UsageError("cover names set " + idx(s) + " outside the family");
    if (used[s]) throw UsageError("cover names set " + idx(s) + " twice");
    used[s] = true;
    for (std::size_t x : inst.family[s]) ++hits[x];
  }
  for (std::size_t x = 0; x < hits.size(); ++x) {
    if (hits[x] != 1) {
      throw UsageError("cover is not exact: element " + idx(x) + " covered " +
                       std::to_string(hits[x]) + " times");
    }
  }
}

}  // namespace

std::optional<std::string> validate_rx3c(std::size_t t, const std::vector<Triple>& family) {
  if (t == 0) return "t must be at least 1";
  if (family.size() != 3 * t) {
    return "family has " + std::to_string(family.size()) + " sets, expected " + std::to_string(3 * t);
  }
  std::vector<int> count(3 * t, 0);
  for (std::size_t s = 0; s < family.size(); ++s) {
    Triple sorted = family[s];
    std::sort(sorted.begin(), sorted.end());
    if (sorted[0] == sorted[1] || sorted[1] == sorted[2]) {
      return "set " + idx(s) + " does not have 3 distinct elements";
    }
    for (std::size_t x : sorted) {
      if (x >= 3 * t) return "set " + idx(s) + " names element " + idx(x) + " outside the universe";
      ++count[x];
    }
  }
  for (std::size_t x = 0; x < count.size(); ++x) {
    if (count[x] != 3) {
      return "element " + idx(x) + " occurs in " + std::to_string(count[x]) + " sets, expected 3";
    }
  }
  return std::nullopt;
}

Rx3cInstance build_rx3c(std::size_t t, std::vector<Triple> family) {
  if (auto diag = validate_rx3c(t, family)) throw UsageError("invalid RX3C instance: " + *diag);
  for (Triple& s : family) std::sort(s.begin(), s.end());
  return Rx3cInstance{t, std::move(family)};
}

Rx3cInstance default_rx3c(std::size_t t) {
  std::vector<Triple> family;
  for (std::size_t copy = 0; copy < 3; ++copy) {
    for (std::size_t b = 0; b < t; ++b) family.push_back({3 * b, 3 * b + 1, 3 * b + 2});
  }
  return build_rx3c(t, std::move(family));
}

std::optional<std::vector<std::size_t>> find_exact_cover(const Rx3cInstance& inst) {
  std::vector<bool> covered(3 * inst.t, false);
  std::vector<std::size_t> chosen;
  std::function<bool()> search = [&]() -> bool {
    auto first = std::find(covered.begin(), covered.end(), false);
    if (first == covered.end()) return true;
    const std::size_t x = static_cast<std::size_t>(first - covered.begin());
    for (std::size_t s = 0; s < inst.family.size(); ++s) {
      const Triple& set = inst.family[s];
      if (!in_set(set, x)) continue;
      if (std::any_of(set.begin(), set.end(), [&](std::size_t y) { return covered[y]; })) continue;
      for (std::size_t y : set) covered[y] = true;
      chosen.push_back(s);
      if (search()) return true;
      chosen.pop_back();
      for (std::size_t y : set) covered[y] = false;
    }
    return false;
  };
  if (search()) return chosen;
  return std::nullopt;
}

std::string_view to_string(Target target) {
  switch (target) {
    case Target::kNSIS: return "ns_is";
    case Target::kCNS: return "cns";
    case Target::kCS: return "cs";
  }
  return "?";
}

std::string_view to_string(Variant variant) {
  return variant == Variant::kResentful ? "resentful" : "appreciative";
}

Target parse_target(std::string_view text) {
  const std::string t = lower(text);
  if (t == "ns_is" || t == "ns-is" || t == "ns" || t == "is") return Target::kNSIS;
  if (t == "cns") return Target::kCNS;
  if (t == "cs") return Target::kCS;
  throw UsageError("unknown reduction target '" + std::string(text) + "' (expected ns_is|cns|cs)");
}

Variant parse_variant(std::string_view text) {
  const std::string t = lower(text);
  if (t == "resentful" || t == "resent") return Variant::kResentful;
  if (t == "appreciative" || t == "appreciation") return Variant::kAppreciative;
  throw UsageError("unknown variant '" + std::string(text) + "' (expected resentful|appreciative)");
}

ReductionOutput reduce(const Rx3cInstance& inst, Target target, Variant variant) {
  if (auto diag = validate_rx3c(inst.t, inst.family)) throw UsageError("invalid RX3C instance: " + *diag);
  const std::size_t t = inst.t;
  const auto T = static_cast<std::int64_t>(t);
  ReductionOutput out{Game(1, Caf::kAS, UtilityMatrix(1)), 0, target, variant, {}, {}, {}, {}, {}, {}};
  lay_out_common(inst, out);
  const Agent base = 8 * t;

  std::size_t n = 0;
  switch (target) {
    case Target::kNSIS:
      n = 18 * t + 1;
      out.k = 10 * t;
      out.penalizers.push_back(base);
      out.labels.push_back("p");
      for (std::size_t i = 0; i < 5 * t; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          out.penalizers.push_back(base + 1 + 2 * i + j);
          out.labels.push_back("p" + idx(i) + "," + idx(j));
        }
      }
      break;
    case Target::kCNS:
      n = 8 * t + 5;
      out.k = 5 * t + 1;
      break;
    case Target::kCS:
      n = 8 * t + 7;
      out.k = 3 * t + 2;
      break;
  }
  if (target != Target::kNSIS) {
    for (Agent q = base; q < n; ++q) {
      out.penalizers.push_back(q);
      out.labels.push_back("p" + std::to_string(q - base));
    }
  }

  Builder b(n, -1000 * T);
  const auto& xs = out.elements;
  const auto& ss = out.sets;
  const auto& fs = out.fillers;
  const auto& ps = out.penalizers;

  // Set agents value their three elements, every filler and p / p0 alike in
  // all three constructions.
  for (std::size_t s = 0; s < ss.size(); ++s) {
    for (std::size_t x : inst.family[s]) b.set(ss[s], xs[x], 20 * T);
    for (Agent f : fs) b.set(ss[s], f, 60 * T);
    b.set(ss[s], ps[0], 60 * T);
  }

  switch (target) {
    case Target::kNSIS: {
      for (Agent x : xs) {
        for (Agent y : xs) {
          if (x != y) b.set(x, y, 0);
        }
        for (Agent s : ss) b.set(x, s, 1);
      }
      for (Agent f : fs) {
        for (Agent s : ss) b.set(f, s, 1);
      }
      const Agent p = ps[0];
      for (Agent s : ss) b.set(p, s, 10 * T);
      for (std::size_t q = 1; q < ps.size(); ++q) {
        const Agent pq = ps[q];
        for (Agent s : ss) {
          b.set(s, pq, 0);
          b.set(pq, s, 30 * T);
        }
        b.set(p, pq, 0);
        b.set(pq, p, 30 * T);
        for (std::size_t r = 1; r < ps.size(); ++r) {
          if (r != q) b.set(pq, ps[r], 0);
        }
      }
      for (std::size_t i = 0; i < 5 * t; ++i) b.both(ps[1 + 2 * i], ps[2 + 2 * i], 40 * T);
      break;
    }
    case Target::kCNS: {
      for (Agent x : xs) {
        for (Agent y : xs) {
          if (x != y) b.set(x, y, 1);
        }
      }
      const Agent p0 = ps[0], p1 = ps[1], p2 = ps[2], p3 = ps[3], p4 = ps[4];
      for (Agent s : ss) {
        b.set(s, p1, 0);
        b.set(p0, s, 10 * T);
      }
      b.set(p0, p1, variant == Variant::kAppreciative ? -1 : 0);
      b.set(p1, p0, 1);
      for (Agent q : {p2, p3, p4}) b.set(q, p1, 200 * T);
      b.set(p2, p3, -100 * T);
      b.set(p2, p4, -400 * T);
      b.set(p3, p4, -100 * T);
      b.set(p3, p2, -400 * T);
      b.set(p4, p2, -100 * T);
      b.set(p4, p3, -400 * T);
      break;
    }
    case Target::kCS: {
      for (Agent x : xs) {
        for (Agent y : xs) {
          if (x != y) b.set(x, y, 0);
        }
        for (Agent s : ss) b.set(x, s, 1);
      }
      for (Agent f : fs) {
        for (Agent s : ss) b.set(f, s, 1);
      }
      for (Agent s : ss) b.set(ps[0], s, 20 * T);
      b.set(ps[0], ps[1], 10 * T);
      b.set(ps[1], ps[0], 300 * T);
      b.both(ps[1], ps[3], 40 * T);
      b.both(ps[3], ps[5], 40 * T);
      b.both(ps[5], ps[1], 40 * T);
      b.both(ps[1], ps[2], 60 * T);
      b.both(ps[3], ps[4], 60 * T);
      b.both(ps[5], ps[6], 60 * T);
      b.both(ps[2], ps[3], 50 * T);
      b.both(ps[4], ps[5], 50 * T);
      b.both(ps[6], ps[1], 50 * T);
      break;
    }
  }

  out.game = Game(n, Caf::kAS, b.take());
  const PerceptionModel model(variant == Variant::kResentful ? PerceptionKind::kResent
                                                             : PerceptionKind::kAppreciation);
  const Kind kind = target == Target::kNSIS ? Kind::kIS : target == Target::kCNS ? Kind::kCNS : Kind::kCS;
  out.rule = DynamicsRule{kind, model, Filter::kAny};
  return out;
}

std::vector<Deviation> witness(const Rx3cInstance& inst, const std::vector<std::size_t>& cover,
                               const ReductionOutput& out) {
  check_cover(inst, cover);
  std::vector<bool> in_cover(inst.family.size(), false);
  for (std::size_t s : cover) in_cover[s] = true;
  std::vector<std::size_t> rest;
  for (std::size_t s = 0; s < inst.family.size(); ++s) {
    if (!in_cover[s]) rest.push_back(s);
  }

  const auto& xs = out.elements;
  const auto& ss = out.sets;
  const auto& fs = out.fillers;
  const auto& ps = out.penalizers;
  ScriptBuilder b(Partition::singletons(out.game.n()));
  switch (out.target) {
    case Target::kNSIS:
      for (std::size_t s : cover) {
        for (std::size_t x : inst.family[s]) b.join(xs[x], ss[s]);
      }
      for (std::size_t r = 0; r < rest.size(); ++r) b.join(fs[r], ss[rest[r]]);
      for (std::size_t i = 0; i < 5 * inst.t; ++i) b.join(ps[2 + 2 * i], ps[1 + 2 * i]);
      break;
    case Target::kCNS:
      for (std::size_t s : cover) {
        const Triple& set = inst.family[s];
        b.join(xs[set[0]], xs[set[2]]).join(xs[set[1]], xs[set[2]]).join(ss[s], xs[set[2]]);
      }
      for (std::size_t r = 0; r < rest.size(); ++r) b.join(ss[rest[r]], fs[r]);
      b.join(ps[1], ps[0]);
      break;
    case Target::kCS:
      for (std::size_t s : cover) {
        const Triple& set = inst.family[s];
        b.group({ss[s], xs[set[0]], xs[set[1]], xs[set[2]]});
      }
      for (std::size_t r = 0; r < rest.size(); ++r) b.group({ss[rest[r]], fs[r]});
      b.group({ps[0], ps[1]});
      b.group({ps[3], ps[4], ps[5]});
      break;
  }
  return b.take();
}

}  // namespace hde
