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

#include <barrier>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ued/agents/ppo.h"
#include "ued/runners/runner.h"

namespace ued::runners {

/// Shared state of one reduction group. Each worker calls through its own
/// BarrierReducer; the reduction runs once per call in the barrier's
/// completion step, summing ranks in index order so every worker sees
/// bit-identical results.
class ReductionGroup {
 public:
  explicit ReductionGroup(int n_workers);

  int size() const { return n_; }

  void mean(int rank, std::span<float> values);
  void sum(int rank, std::span<double> values);

 private:
  struct Complete {
    ReductionGroup* group;
    void operator()() noexcept { group->reduce(); }
  };
  void reduce() noexcept;

  int n_;
  std::vector<std::span<float>> float_slots_;
  std::vector<std::span<double>> double_slots_;
  std::vector<float> float_out_;
  std::vector<double> double_out_;
  bool doubles_ = false;
  std::barrier<Complete> barrier_;
};

class BarrierReducer final : public agents::GradientReducer {
 public:
  BarrierReducer(ReductionGroup& group, int rank) : group_(group), rank_(rank) {}
  void mean(std::span<float> values) override { group_.mean(rank_, values); }
  void sum(std::span<double> values) override { group_.sum(rank_, values); }

 private:
  ReductionGroup& group_;
  int rank_;
};

/// Synchronous data-parallel training over D shards. Each shard owns
/// n_envs / D lanes and a private buffer of buffer_size / D entries; the
/// replay branch is drawn once per iteration and shared.
class ShardedRunner {
 public:
  ShardedRunner(const RunnerConfig& global, int n_shards);

  int n_shards() const { return n_shards_; }
  const Runner& shard_runner() const { return runner_; }

  struct State {
    std::vector<RunnerState> shards;
    Rng decision_rng;
    std::int64_t iteration = 0;
  };

  State init(std::uint64_t seed) const;

  /// One synchronized iteration on every shard; returns the merged stats.
  /// Throws ContractViolation if shard parameters diverge.
  IterationStats step(State& state) const;

  // Per-shard stats of the most recent step (for tests and logging).
  const std::vector<IterationStats>& last_shard_stats() const { return last_; }

 private:
  int n_shards_;
  Runner runner_;
  mutable std::vector<IterationStats> last_;
};

RunnerConfig ShardConfig(const RunnerConfig& global, int n_shards);

/// Max |a - b| over all student parameters of two runner states.
double MaxParamDifference(const RunnerState& a, const RunnerState& b);

}  // namespace ued::runners
