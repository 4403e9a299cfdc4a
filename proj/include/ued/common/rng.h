// Copyright 2026 The UED Authors.
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

#include <cstdint>
#include <limits>

namespace ued {

/// Splittable counter-based random stream.
///
/// A stream is a 64-bit key plus a draw counter. Draw `i` is a pure hash of
/// (key, i), so two streams with the same key produce the same sequence, and
/// `split(i)` derives an independent child key without advancing the parent.
/// Batched operations split their parent once per flattened lane index in
/// row-major order, which is what makes batch and sequential execution
/// comparable bit for bit.
///
/// Satisfies UniformRandomBitGenerator so it can drive std::shuffle.
class Rng {
 public:
  using result_type = std::uint64_t;

  constexpr Rng() = default;
  constexpr explicit Rng(std::uint64_t seed) : key_(Mix(seed ^ kSeedSalt)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }

  // Rebuilds a stream from a checkpointed (key, counter) pair.
  static constexpr Rng FromState(std::uint64_t key, std::uint64_t counter) {
    Rng r;
    r.key_ = key;
    r.counter_ = counter;
    return r;
  }

  /// Child stream `i`. Does not consume draws from this stream.
  constexpr Rng split(std::uint64_t i) const {
    Rng child;
    child.key_ = Mix(key_ ^ Mix(i + kSplitSalt));
    return child;
  }

  /// Child stream for a named purpose; same as split() on a tag.
  constexpr Rng fold_in(std::uint64_t tag) const {
    return split(tag ^ kFoldSalt);
  }

  /// Returns the next child stream and advances the counter by one draw.
  constexpr Rng next_split() { return split(counter_++ ^ kNextSalt); }

  constexpr result_type operator()() { return next_u64(); }

  constexpr std::uint64_t next_u64() {
    return Mix(key_ + (counter_++) * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be > 0.
  constexpr std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  /// Uniform integer in [lo, hi], inclusive.
  constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool operator==(const Rng&) const = default;

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x243f6a8885a308d3ULL;
  static constexpr std::uint64_t kSplitSalt = 0x13198a2e03707344ULL;
  static constexpr std::uint64_t kFoldSalt = 0xa4093822299f31d0ULL;
  static constexpr std::uint64_t kNextSalt = 0x082efa98ec4e6c89ULL;

  // splitmix64 finalizer.
  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace ued
