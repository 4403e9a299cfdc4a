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

#include <cmath>
#include <span>
#include <vector>

#include "ued/agents/params.h"
#include "ued/agents/policy.h"
#include "ued/agents/trajectory.h"
#include "ued/common/errors.h"
#include "ued/common/rng.h"

namespace ued::agents {

enum class ActionMode { kSample, kGreedy };

/// Live per-lane environment results plus the recurrent carry.
template <class Env>
struct LaneStates {
  std::vector<typename Env::Result> current;
  RowMat<float> hidden;

  int lanes() const { return static_cast<int>(current.size()); }
};

template <class Env, class Level>
LaneStates<Env> StartLanes(const Env& env, std::span<const Level> levels,
                           int hidden) {
  LaneStates<Env> s;
  s.current.reserve(levels.size());
  for (const auto& l : levels) s.current.push_back(env.reset_to_level(l));
  s.hidden = RowMat<float>::Zero(static_cast<int>(levels.size()), hidden);
  return s;
}

// log-softmax of one row, in float to match the training loss exactly.
inline void LogSoftmax(std::span<const float> logits, std::span<float> out) {
  float mx = logits[0];
  for (float v : logits) mx = std::max(mx, v);
  float z = 0.0f;
  for (float v : logits) z += std::exp(v - mx);
  const float log_z = mx + std::log(z);
  for (std::size_t j = 0; j < logits.size(); ++j) out[j] = logits[j] - log_z;
}

inline int SampleCategorical(std::span<const float> log_probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t j = 0; j < log_probs.size(); ++j) {
    acc += std::exp(static_cast<double>(log_probs[j]));
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(log_probs.size()) - 1;
}

inline int Argmax(std::span<const float> v) {
  int best = 0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) best = static_cast<int>(j);
  }
  return best;
}

/// Runs `length` steps on every lane. Lanes that finish an episode are
/// restarted with env.auto_reset and their hidden state zeroed; if `finals`
/// is given, it receives each lane's most recent terminal result.
///
/// Step t of lane l draws its action from rng.split(t).split(l) and steps
/// the environment with rng.split(t).fold_in(1).split(l).
template <class Env>
TrajectoryBatch Rollout(const Env& env, const RecurrentPolicy<float>& policy,
                        const ParamSet<float>& params, LaneStates<Env>& lanes,
                        int length, Rng rng,
                        ActionMode mode = ActionMode::kSample,
                        std::vector<typename Env::Result>* finals = nullptr) {
  if (length < 1) throw ContractViolation("rollout length must be >= 1");
  const NetSpec& spec = policy.spec();
  const int n_lanes = lanes.lanes();
  const int cells = spec.grid_cells;
  const int aux_dim = spec.aux_dim;
  const int n_act = spec.n_actions;
  if (lanes.hidden.rows() != n_lanes || lanes.hidden.cols() != spec.hidden) {
    throw ShapeError("lane hidden state has the wrong shape");
  }

  if (finals != nullptr) finals->resize(n_lanes);
  TrajectoryBatch traj;
  traj.allocate(length, n_lanes, cells, aux_dim, spec.hidden);
  traj.initial_hidden = lanes.hidden;

  std::vector<float> logp(n_act);
  auto featurize_step = [&](std::uint8_t* tiles, float* aux) {
    for (int l = 0; l < n_lanes; ++l) {
      env.featurize(lanes.current[l].observation,
                    std::span<std::uint8_t>(tiles + l * cells, cells),
                    std::span<float>(aux + l * aux_dim, aux_dim));
    }
  };

  for (int t = 0; t < length; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * n_lanes;
    std::uint8_t* tiles = traj.tiles.data() + base * cells;
    float* aux = traj.aux.data() + base * aux_dim;
    featurize_step(tiles, aux);
    const InputView in{n_lanes,
                       std::span<const std::uint8_t>(tiles, n_lanes * cells),
                       std::span<const float>(aux, n_lanes * aux_dim)};
    auto out = policy.step(params, in, lanes.hidden);
    lanes.hidden = std::move(out.hidden);

    const Rng step_rng = rng.split(t);
    const Rng env_rng = step_rng.fold_in(1);
    for (int l = 0; l < n_lanes; ++l) {
      const std::size_t i = base + l;
      LogSoftmax(std::span<const float>(out.logits.row(l).data(), n_act), logp);
      Rng action_rng = step_rng.split(l);
      const int a = mode == ActionMode::kGreedy ? Argmax(logp)
                                                : SampleCategorical(logp, action_rng);
      traj.actions[i] = a;
      traj.log_probs[i] = logp[a];
      traj.values[i] = out.values(l);

      auto next = env.step(env_rng.split(l), lanes.current[l].state, a);
      traj.rewards[i] = next.reward;
      traj.dones[i] = next.done ? 1 : 0;
      traj.successes[i] = next.info.get_or("success", 0.0) > 0.0 ? 1 : 0;
      if (next.done) {
        lanes.current[l] = env.auto_reset(next.state);
        if (finals != nullptr) (*finals)[l] = std::move(next);
        lanes.hidden.row(l).setZero();
        if (t + 1 < length) traj.resets[base + n_lanes + l] = 1;
      } else {
        lanes.current[l] = std::move(next);
      }
    }
  }

  // Bootstrap values; the carry itself is left as it was after step T-1.
  std::vector<std::uint8_t> tiles(static_cast<std::size_t>(n_lanes) * cells);
  std::vector<float> aux(static_cast<std::size_t>(n_lanes) * aux_dim);
  featurize_step(tiles.data(), aux.data());
  const auto boot = policy.step(params, InputView{n_lanes, tiles, aux}, lanes.hidden);
  for (int l = 0; l < n_lanes; ++l) traj.last_values[l] = boot.values(l);
  return traj;
}

}  // namespace ued::agents
