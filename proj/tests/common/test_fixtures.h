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

// Shared fixtures and oracles for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ued/agents/policy.h"
#include "ued/agents/ppo.h"
#include "ued/agents/trajectory.h"
#include "ued/common/rng.h"

namespace ued::testing {

inline agents::NetSpec TinySpec() {
  agents::NetSpec s;
  s.grid_cells = 25;
  s.n_codes = 4;
  s.tile_embed_dim = 3;
  s.aux_dim = 4;
  s.aux_embed_dim = 2;
  s.encoder_dim = 6;
  s.hidden = 8;
  s.n_actions = 3;
  return s;
}

inline double Gaussian(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

struct GaeInputs {
  std::vector<float> rewards;
  std::vector<float> values;
  std::vector<std::uint8_t> dones;
  std::vector<float> last_values;
};

inline GaeInputs RandomGaeInputs(Rng rng, int steps, int lanes) {
  GaeInputs g;
  const int n = steps * lanes;
  for (int i = 0; i < n; ++i) {
    g.rewards.push_back(rng.uniform() < 0.3 ? static_cast<float>(rng.uniform()) : 0.0f);
    g.values.push_back(static_cast<float>(rng.uniform() * 2.0 - 0.5));
    g.dones.push_back(rng.uniform() < 0.1 ? 1 : 0);
  }
  for (int l = 0; l < lanes; ++l) g.last_values.push_back(static_cast<float>(rng.uniform()));
  return g;
}

/// Definitional GAE: A_t = sum_k (gamma lambda)^(k-t) delta_k, truncated at
/// the first done in [t, k), evaluated by a direct double loop.
inline std::vector<double> GaeOracle(const GaeInputs& g, int steps, int lanes,
                                     double gamma, double lambda) {
  std::vector<double> adv(static_cast<std::size_t>(steps) * lanes, 0.0);
  auto at = [lanes](int t, int l) { return static_cast<std::size_t>(t) * lanes + l; };
  for (int l = 0; l < lanes; ++l) {
    std::vector<double> delta(steps);
    for (int t = 0; t < steps; ++t) {
      const double next = t + 1 < steps ? g.values[at(t + 1, l)] : g.last_values[l];
      const double live = g.dones[at(t, l)] ? 0.0 : 1.0;
      delta[t] = g.rewards[at(t, l)] + gamma * live * next - g.values[at(t, l)];
    }
    for (int t = 0; t < steps; ++t) {
      double sum = 0.0;
      double weight = 1.0;
      for (int k = t; k < steps; ++k) {
        sum += weight * delta[k];
        if (g.dones[at(k, l)]) break;
        weight *= gamma * lambda;
      }
      adv[at(t, l)] = sum;
    }
  }
  return adv;
}

/// Random inputs of the right shape; resets follow the done flags.
inline agents::TrajectoryBatch RandomTrajectory(Rng rng, const agents::NetSpec& s,
                                                int steps, int lanes) {
  agents::TrajectoryBatch traj;
  traj.allocate(steps, lanes, s.grid_cells, s.aux_dim, s.hidden);
  for (auto& t : traj.tiles) t = static_cast<std::uint8_t>(rng.uniform_index(s.n_codes));
  for (int i = 0; i < traj.size(); ++i) {
    if (s.aux_dim > 0) traj.aux[i * s.aux_dim + rng.uniform_index(s.aux_dim)] = 1.0f;
    traj.actions[i] = static_cast<int>(rng.uniform_index(s.n_actions));
    traj.log_probs[i] = static_cast<float>(std::log(1.0 / s.n_actions) + 0.3 * Gaussian(rng));
    traj.values[i] = static_cast<float>(Gaussian(rng) * 0.5);
    traj.rewards[i] = rng.uniform() < 0.2 ? static_cast<float>(rng.uniform()) : 0.0f;
    traj.dones[i] = rng.uniform() < 0.15 ? 1 : 0;
  }
  for (int t = 1; t < steps; ++t) {
    for (int l = 0; l < lanes; ++l) traj.resets[traj.index(t, l)] = traj.dones[traj.index(t - 1, l)];
  }
  for (int i = 0; i < traj.initial_hidden.size(); ++i) {
    traj.initial_hidden.data()[i] = static_cast<float>(0.5 * Gaussian(rng));
  }
  for (auto& v : traj.last_values) v = static_cast<float>(Gaussian(rng) * 0.5);
  return traj;
}

/// Overwrites the stored behaviour log-probs and values with the current
/// policy's, so the importance ratio is exactly 1 (up to rounding).
template <class S>
void SetOldPolicy(const agents::RecurrentPolicy<S>& policy,
                  const agents::ParamSet<S>& params, agents::TrajectoryBatch& traj) {
  typename agents::RecurrentPolicy<S>::SequenceCache cache;
  policy.forward_sequence(params, traj.sequence(), traj.initial_hidden.template cast<S>(), cache);
  for (int i = 0; i < traj.size(); ++i) {
    const auto row = cache.logits.row(i);
    const S mx = row.maxCoeff();
    const S lz = mx + std::log((row.array() - mx).exp().sum());
    traj.log_probs[i] = static_cast<float>(row(traj.actions[i]) - lz);
    traj.values[i] = static_cast<float>(cache.values(i));
  }
}

template <class S>
agents::ParamSet<S> PerturbedInit(const agents::RecurrentPolicy<S>& policy, Rng rng) {
  auto params = policy.init(rng);
  Rng noise = rng.fold_in(77);
  // Non-zero biases and larger heads so every term carries gradient.
  for (auto& v : params.flat()) v += static_cast<S>(0.1 * Gaussian(noise));
  return params;
}

/// Max over parameters of |analytic - numeric| / max(|analytic| + |numeric|, 1e-6),
/// for the full PPO loss on one random batch.
inline double GradCheckRelError(const agents::RecurrentPolicy<double>& policy,
                                const agents::PpoConfig& cfg, Rng rng) {
  auto params = PerturbedInit(policy, rng.fold_in(1));
  auto traj = RandomTrajectory(rng.fold_in(2), policy.spec(), 6, 3);
  SetOldPolicy(policy, params, traj);
  Rng noise = rng.fold_in(3);
  // Move the behaviour policy away so some ratios fall outside the clip range.
  for (auto& lp : traj.log_probs) lp += static_cast<float>(0.2 * Gaussian(noise));
  for (auto& v : traj.values) v += static_cast<float>(0.3 * Gaussian(noise));
  std::vector<float> adv(traj.size()), ret(traj.size());
  for (auto& a : adv) a = static_cast<float>(Gaussian(noise));
  for (auto& r : ret) r = static_cast<float>(Gaussian(noise));

  auto grads = policy.zeros();
  agents::PpoLoss<double>(policy, params, traj, adv, ret, cfg, &grads);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params.flat()[i];
    params.flat()[i] = saved + h;
    const double up = agents::PpoLoss<double>(policy, params, traj, adv, ret, cfg, nullptr).total;
    params.flat()[i] = saved - h;
    const double down = agents::PpoLoss<double>(policy, params, traj, adv, ret, cfg, nullptr).total;
    params.flat()[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double analytic = grads.flat()[i];
    const double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  }
  return worst;
}

/// Finite-difference gradient of -mean_t A_t log pi(a_t | s_t).
inline agents::ParamSet<double> VanillaPolicyGradient(
    const agents::RecurrentPolicy<double>& policy, agents::ParamSet<double> params,
    const agents::TrajectoryBatch& traj, const std::vector<float>& adv) {
  auto objective = [&](const agents::ParamSet<double>& p) {
    typename agents::RecurrentPolicy<double>::SequenceCache cache;
    policy.forward_sequence(p, traj.sequence(), traj.initial_hidden.cast<double>(), cache);
    double sum = 0.0;
    for (int i = 0; i < traj.size(); ++i) {
      const auto row = cache.logits.row(i);
      const double mx = row.maxCoeff();
      const double lz = mx + std::log((row.array() - mx).exp().sum());
      sum += adv[i] * (row(traj.actions[i]) - lz);
    }
    return -sum / traj.size();
  };
  auto out = policy.zeros();
  const double h = 1e-6;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params.flat()[i];
    params.flat()[i] = saved + h;
    const double up = objective(params);
    params.flat()[i] = saved - h;
    const double down = objective(params);
    params.flat()[i] = saved;
    out.flat()[i] = (up - down) / (2 * h);
  }
  return out;
}

}  // namespace ued::testing

#include <thread>

#include "ued/runners/runner.h"
#include "ued/runners/sdp.h"

namespace ued::testing {

/// A small, fast runner configuration: 7x7 mazes, tiny network.
inline runners::RunnerConfig TinyRunnerConfig(runners::RunnerKind kind) {
  runners::RunnerConfig c;
  c.kind = kind;
  c.env.height = c.env.width = 7;
  c.env.wall_budget = 8;
  c.env.max_episode_steps = 20;
  c.model.tile_embed_dim = 2;
  c.model.aux_embed_dim = 2;
  c.model.encoder_dim = 8;
  c.model.hidden = 8;
  c.rollout_length = 24;
  c.n_envs = 4;
  c.ppo.epochs = 1;
  c.plr.buffer_size = 16;
  return c;
}

/// Max |g_sharded - g_full| where g_full is the PPO gradient on the whole
/// batch and g_sharded averages per-shard gradients (lanes split evenly,
/// advantage statistics reduced globally) through a ReductionGroup.
inline double ShardedGradientDifference(const agents::RecurrentPolicy<float>& policy,
                                        const agents::ParamSet<float>& params,
                                        const agents::TrajectoryBatch& traj,
                                        const std::vector<float>& adv,
                                        const std::vector<float>& ret,
                                        const agents::PpoConfig& cfg, int shards) {
  agents::LocalReducer local;
  const auto norm = agents::NormalizeAdvantages(adv, local);
  auto full = policy.zeros();
  agents::PpoLoss<float>(policy, params, traj, norm, ret, cfg, &full);

  runners::ReductionGroup group(shards);
  std::vector<agents::ParamSet<float>> grads(shards, policy.zeros());
  {
    std::vector<std::jthread> workers;
    for (int r = 0; r < shards; ++r) {
      workers.emplace_back([&, r] {
        runners::BarrierReducer reducer(group, r);
        const int per = traj.lanes / shards;
        std::vector<int> lanes(per);
        for (int i = 0; i < per; ++i) lanes[i] = r * per + i;
        const auto part = agents::SliceLanes(traj, lanes);
        const auto a = agents::SliceLaneValues(adv, traj.steps, traj.lanes, lanes);
        const auto rt = agents::SliceLaneValues(ret, traj.steps, traj.lanes, lanes);
        const auto an = agents::NormalizeAdvantages(a, reducer);
        agents::PpoLoss<float>(policy, params, part, an, rt, cfg, &grads[r]);
        reducer.mean(grads[r].flat());
      });
    }
  }
  double worst = 0.0;
  for (int r = 0; r < shards; ++r) {
    for (std::size_t i = 0; i < full.size(); ++i) {
      worst = std::max(worst, static_cast<double>(std::abs(grads[r].flat()[i] - full.flat()[i])));
    }
  }
  return worst;
}

}  // namespace ued::testing
