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

#include <span>
#include <vector>

#include "ued/common/errors.h"
#include "ued/common/rng.h"
#include "ued/core/env.h"

namespace ued {

/// Lifts a single-instance environment over (n_agents, n_evals * n_envs).
///
/// States and actions are flat arrays in row-major order: index
/// `agent * shape.inner() + j`. Every call splits its rng once per flat index,
/// so element i of a batched call equals `env.step(rng.split(i), ...)`.
template <Environment Env>
class BatchEnv {
 public:
  using State = typename Env::State;
  using Observation = typename Env::Observation;
  using Result = typename Env::Result;

  BatchEnv(Env env, BatchShape shape) : env_(std::move(env)), shape_(shape) {
    ValidateBatchShape(shape_);
  }

  const Env& env() const { return env_; }
  const BatchShape& shape() const { return shape_; }
  int size() const { return shape_.total(); }

  std::vector<Result> reset(Rng rng) const {
    std::vector<Result> out;
    out.reserve(size());
    for (int i = 0; i < size(); ++i) out.push_back(env_.reset(rng.split(i)));
    return out;
  }

  std::vector<Result> step(Rng rng, std::span<const State> states,
                           std::span<const int> actions) const {
    CheckSize(states.size(), "states");
    CheckSize(actions.size(), "actions");
    std::vector<Result> out;
    out.reserve(size());
    for (int i = 0; i < size(); ++i) {
      out.push_back(env_.step(rng.split(i), states[i], actions[i]));
    }
    return out;
  }

  /// Allocation-free variant: advances `states` in place and writes
  /// observation/reward/done per lane. Same rng scheme as step().
  void step_inplace(Rng rng, std::span<State> states,
                    std::span<const int> actions,
                    std::span<Observation> observations,
                    std::span<float> rewards,
                    std::span<std::uint8_t> dones) const {
    CheckSize(states.size(), "states");
    CheckSize(actions.size(), "actions");
    CheckSize(observations.size(), "observations");
    CheckSize(rewards.size(), "rewards");
    CheckSize(dones.size(), "dones");
    for (int i = 0; i < size(); ++i) {
      Result r = env_.step(rng.split(i), states[i], actions[i]);
      states[i] = r.state;
      observations[i] = r.observation;
      rewards[i] = r.reward;
      dones[i] = r.done;
    }
  }

 private:
  void CheckSize(std::size_t n, const char* what) const {
    if (static_cast<int>(n) != size()) {
      throw ShapeError(std::string("BatchEnv: ") + what + " has length " +
                       std::to_string(n) + ", expected " +
                       std::to_string(size()));
    }
  }

  Env env_;
  BatchShape shape_;
};

}  // namespace ued
