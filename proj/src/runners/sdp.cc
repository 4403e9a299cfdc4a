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

#include "ued/runners/sdp.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "ued/common/errors.h"

namespace ued::runners {

ReductionGroup::ReductionGroup(int n)
    : n_(n), float_slots_(n), double_slots_(n), barrier_(n, Complete{this}) {
  if (n < 1) throw ConfigError("reduction group needs at least one worker");
}

void ReductionGroup::reduce() noexcept {
  if (doubles_) {
    const std::size_t len = double_slots_[0].size();
    double_out_.assign(len, 0.0);
    for (int r = 0; r < n_; ++r) {
      for (std::size_t i = 0; i < len; ++i) double_out_[i] += double_slots_[r][i];
    }
  } else {
    const std::size_t len = float_slots_[0].size();
    float_out_.assign(len, 0.0f);
    for (int r = 0; r < n_; ++r) {
      for (std::size_t i = 0; i < len; ++i) float_out_[i] += float_slots_[r][i];
    }
    const float inv = 1.0f / static_cast<float>(n_);
    for (float& v : float_out_) v *= inv;
  }
}

void ReductionGroup::mean(int rank, std::span<float> values) {
  float_slots_[rank] = values;
  if (rank == 0) doubles_ = false;
  barrier_.arrive_and_wait();  // completion reduces into float_out_
  std::copy(float_out_.begin(), float_out_.end(), values.begin());
  barrier_.arrive_and_wait();  // nobody reuses the slots before all copied
}

void ReductionGroup::sum(int rank, std::span<double> values) {
  double_slots_[rank] = values;
  if (rank == 0) doubles_ = true;
  barrier_.arrive_and_wait();
  std::copy(double_out_.begin(), double_out_.end(), values.begin());
  barrier_.arrive_and_wait();
}

RunnerConfig ShardConfig(const RunnerConfig& global, int d) {
  if (d < 1) throw ConfigError("n_shards must be >= 1");
  if (d > 1 && global.kind == RunnerKind::kPaired) {
    throw ConfigError("sharded training supports DR and the PLR family only");
  }
  if (global.n_envs % d != 0) throw ConfigError("n_envs must be divisible by n_shards");
  RunnerConfig c = global;
  c.n_envs = global.n_envs / d;
  if (global.kind == RunnerKind::kPlr || global.kind == RunnerKind::kPlrParallel) {
    if (global.plr.buffer_size % d != 0) {
      throw ConfigError("plr.buffer_size must be divisible by n_shards");
    }
    c.plr.buffer_size = global.plr.buffer_size / d;
  }
  return c;
}

ShardedRunner::ShardedRunner(const RunnerConfig& global, int n_shards)
    : n_shards_(n_shards), runner_(ShardConfig(global, n_shards)) {}

ShardedRunner::State ShardedRunner::init(std::uint64_t seed) const {
  const Rng root(seed);
  State s;
  s.decision_rng = root.fold_in(2);
  for (int d = 0; d < n_shards_; ++d) {
    // Same agent stream everywhere so shards start identical. With one
    // shard this is exactly Runner::init(seed).
    const Rng iter = n_shards_ == 1 ? root.fold_in(2) : root.fold_in(2).split(d);
    s.shards.push_back(runner_.init(root.fold_in(1), iter));
  }
  return s;
}

double MaxParamDifference(const RunnerState& a, const RunnerState& b) {
  double worst = 0.0;
  for (std::size_t m = 0; m < a.students.size(); ++m) {
    const auto pa = a.students[m].params.flat();
    const auto pb = b.students[m].params.flat();
    for (std::size_t i = 0; i < pa.size(); ++i) {
      worst = std::max(worst, static_cast<double>(std::abs(pa[i] - pb[i])));
    }
  }
  return worst;
}

IterationStats ShardedRunner::step(State& state) const {
  const int d = n_shards_;
  last_.assign(d, IterationStats{});

  // One replay draw for everyone; every shard must be able to replay.
  Runner::Plan plan;
  const auto& kind = runner_.config().kind;
  if (kind == RunnerKind::kPlr || kind == RunnerKind::kPlrParallel) {
    bool all_nonempty = true;
    for (const auto& s : state.shards) all_nonempty = all_nonempty && !s.buffer.empty();
    plan.replay = runner_.decide_replay(state.decision_rng, state.iteration, all_nonempty);
  }

  if (d == 1) {
    agents::LocalReducer local;
    last_[0] = runner_.step(state.shards[0], plan, local);
  } else {
    ReductionGroup group(d);
    std::vector<std::exception_ptr> errors(d);
    {
      std::vector<std::jthread> workers;
      for (int r = 0; r < d; ++r) {
        workers.emplace_back([&, r] {
          BarrierReducer reducer(group, r);
          try {
            last_[r] = runner_.step(state.shards[r], plan, reducer);
          } catch (...) {
            errors[r] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (int r = 1; r < d; ++r) {
      const double diff = MaxParamDifference(state.shards[0], state.shards[r]);
      if (diff > 1e-6) {
        throw ContractViolation("shard " + std::to_string(r) +
                                " parameters diverged by " + std::to_string(diff));
      }
    }
  }
  state.iteration++;

  IterationStats merged = last_[0];
  for (int r = 1; r < d; ++r) {
    const auto& o = last_[r];
    merged.env_steps += o.env_steps;
    merged.episodes += o.episodes;
    merged.solved += o.solved;
    merged.return_sum += o.return_sum;
    merged.fresh.merge(o.fresh);
    merged.replay.merge(o.replay);
    merged.mutant.merge(o.mutant);
    merged.buffer_size += o.buffer_size;
    merged.buffer_max_score = std::max(merged.buffer_max_score, o.buffer_max_score);
    merged.n_mutants += o.n_mutants;
    merged.lanes_new += o.lanes_new;
    merged.lanes_replay += o.lanes_replay;
    merged.lanes_mutant += o.lanes_mutant;
  }
  if (d > 1) {
    double score_sum = 0.0;
    for (const auto& s : state.shards) score_sum += s.buffer.mean_score() * s.buffer.size();
    merged.buffer_mean_score = merged.buffer_size ? score_sum / merged.buffer_size : 0.0;
  }
  return merged;
}

}  // namespace ued::runners
