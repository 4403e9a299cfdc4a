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

#include <any>
#include <array>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "ued/common/rng.h"

namespace ued {

/// Small fixed-capacity scalar map for per-step environment metadata.
/// Keys must be string literals (views are stored, not copied).
class Info {
 public:
  static constexpr int kCapacity = 6;

  void set(std::string_view key, double value) {
    for (int i = 0; i < size_; ++i) {
      if (entries_[i].first == key) {
        entries_[i].second = value;
        return;
      }
    }
    if (size_ < kCapacity) entries_[size_++] = {key, value};
  }

  std::optional<double> get(std::string_view key) const {
    for (int i = 0; i < size_; ++i) {
      if (entries_[i].first == key) return entries_[i].second;
    }
    return std::nullopt;
  }

  double get_or(std::string_view key, double fallback) const {
    return get(key).value_or(fallback);
  }

  int size() const { return size_; }

  bool operator==(const Info& other) const {
    if (size_ != other.size_) return false;
    for (int i = 0; i < size_; ++i) {
      if (entries_[i] != other.entries_[i]) return false;
    }
    return true;
  }

 private:
  std::array<std::pair<std::string_view, double>, kCapacity> entries_{};
  int size_ = 0;
};

/// Wrapper-owned state, carried through step/reset without being inspected
/// by the environment itself.
using Extras = std::map<std::string, std::any>;

template <class State, class Obs>
struct StepResult {
  Obs observation;
  State state;
  float reward = 0.0f;
  bool done = false;
  Info info;
  Extras extras;
};

/// Population × evaluations × instances. The last two are flattened.
struct BatchShape {
  int n_agents = 1;
  int n_evals = 1;
  int n_envs = 1;

  int inner() const { return n_evals * n_envs; }
  int total() const { return n_agents * inner(); }
};

void ValidateBatchShape(const BatchShape& shape);

/// Single-instance environment contract. All members are pure.
template <class E>
concept Environment = requires(const E& env, Rng rng,
                               const typename E::State& state, int action) {
  typename E::State;
  typename E::Observation;
  { env.reset(rng) } -> std::same_as<typename E::Result>;
  { env.step(rng, state, action) } -> std::same_as<typename E::Result>;
  { env.num_actions() } -> std::convertible_to<int>;
};

}  // namespace ued
