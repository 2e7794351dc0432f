// Copyright 2026 The regret-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace regret_audit {

/// SplitMix64 finalizer. Used for seeding and for deriving child streams.
std::uint64_t splitmix64(std::uint64_t x);

/// xoshiro256** seeded through SplitMix64.
///
/// Everything downstream (uniforms, normals) is computed from the raw 64-bit
/// output with portable arithmetic, so a given seed yields the same doubles on
/// every platform. std::*_distribution is deliberately not used: its output is
/// implementation-defined.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal by the Marsaglia polar method (the paired value is dropped).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Uniform integer in [lo, hi] (inclusive) by rejection, no modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::array<std::uint64_t, 4> s_;
};

/// A named, splittable seed.
///
/// `child(i)` derives an independent-looking seed from (this seed, i) by two
/// rounds of SplitMix64, so streams can be addressed by path, e.g.
/// `Stream(seed).child(kValuations).child(sample_index)`, without consuming
/// anything from a parent generator. That is what makes per-sample and
/// per-candidate draws independent of scheduling order.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t seed) : seed_(seed) {}

  Stream child(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }
  Xoshiro256 generator() const { return Xoshiro256(seed_); }

 private:
  std::uint64_t seed_;
};

/// Top-level stream tags. Values are part of the reproducibility contract.
namespace stream_tag {
inline constexpr std::uint64_t kValuations = 0x76616c75;  // "valu"
inline constexpr std::uint64_t kContexts = 0x63747874;    // "ctxt"
inline constexpr std::uint64_t kPga = 0x70676121;         // "pga!"
inline constexpr std::uint64_t kGuided = 0x67756964;      // "guid"
inline constexpr std::uint64_t kWeights = 0x77676874;     // "wght"
}  // namespace stream_tag

}  // namespace regret_audit
