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

#ifndef HDE_RNG_HPP_
#define HDE_RNG_HPP_

#include <cstdint>

namespace hde {

// xoshiro256** 1.0 seeded through SplitMix64. Standard library distributions
// are implementation-defined, so bounded integers and normals are derived
// here to keep seeded runs identical across toolchains.
//
// Seeding scheme (version 1): state = SplitMix64 stream started at
// seed ^ (stream * 0x9E3779B97F4A7C15). Distinct streams of one seed are
// independent for all practical purposes.
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next();
  // Uniform in [0, bound); bound must be positive. Lemire's unbiased method.
  std::uint64_t below(std::uint64_t bound);
  // Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  // Uniform double in [0, 1).
  double unit();
  // Standard normal via Box-Muller (one draw per call).
  double normal();

 private:
  std::uint64_t s_[4];
};

// Named streams used by the engine.
enum RngStream : std::uint64_t {
  kGameStream = 1,
  kChoiceStream = 2,
  kAxiomStream = 3,
};

}  // namespace hde

#endif  // HDE_RNG_HPP_
