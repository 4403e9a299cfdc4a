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
#include <span>
#include <vector>

#include "ued/agents/params.h"
#include "ued/agents/policy.h"
#include "ued/agents/trajectory.h"
#include "ued/common/rng.h"

namespace ued::agents {

struct PpoConfig {
  double gamma = 0.995;
  double gae_lambda = 0.98;
  double clip_range = 0.2;
  int epochs = 5;
  int minibatches = 1;
  double lr = 1e-4;
  double adam_eps = 1e-5;
  double max_grad_norm = 0.5;
  double value_loss_coef = 0.5;
  double entropy_coef = 1e-3;
  bool value_clipping = true;
};

void ValidatePpoConfig(const PpoConfig& cfg);

struct GaeResult {
  std::vector<float> advantages;
  std::vector<float> returns;
};

/// delta_t = r_t + gamma (1 - done_t) V_{t+1} - V_t,
/// A_t = delta_t + gamma lambda (1 - done_t) A_{t+1}, returns = A + V.
/// Arrays are [steps, lanes] time-major; last_values holds V_T per lane.
GaeResult ComputeGae(std::span<const float> rewards,
                     std::span<const float> values,
                     std::span<const std::uint8_t> dones,
                     std::span<const float> last_values, int steps, int lanes,
                     double gamma, double lambda);

inline GaeResult ComputeGae(const TrajectoryBatch& traj, double gamma,
                            double lambda) {
  return ComputeGae(traj.rewards, traj.values, traj.dones, traj.last_values,
                    traj.steps, traj.lanes, gamma, lambda);
}

/// Cross-worker reductions used by synchronous data-parallel training.
/// A single process uses LocalReducer, for which both calls are no-ops.
class GradientReducer {
 public:
  virtual ~GradientReducer() = default;
  // In-place elementwise mean across workers.
  virtual void mean(std::span<float> values) = 0;
  // In-place elementwise sum across workers.
  virtual void sum(std::span<double> values) = 0;
};

class LocalReducer final : public GradientReducer {
 public:
  void mean(std::span<float>) override {}
  void sum(std::span<double>) override {}
};

/// (A - mean) / (std + 1e-8), statistics taken over every worker's batch.
std::vector<float> NormalizeAdvantages(std::span<const float> advantages,
                                       GradientReducer& reducer);

struct LossStats {
  double total = 0.0;
  double policy = 0.0;
  double value = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

/// PPO objective on a whole trajectory batch, averaged over its entries:
///   policy_loss + value_loss_coef * value_loss - entropy_coef * entropy.
/// `advantages` must already be normalized. When `grads` is non-null the
/// gradient is accumulated into it.
template <class S>
LossStats PpoLoss(const RecurrentPolicy<S>& policy, const ParamSet<S>& params,
                  const TrajectoryBatch& traj,
                  std::span<const float> advantages,
                  std::span<const float> returns, const PpoConfig& cfg,
                  ParamSet<S>* grads);

extern template LossStats PpoLoss<float>(const RecurrentPolicy<float>&,
                                         const ParamSet<float>&,
                                         const TrajectoryBatch&,
                                         std::span<const float>,
                                         std::span<const float>,
                                         const PpoConfig&, ParamSet<float>*);
extern template LossStats PpoLoss<double>(const RecurrentPolicy<double>&,
                                          const ParamSet<double>&,
                                          const TrajectoryBatch&,
                                          std::span<const float>,
                                          std::span<const float>,
                                          const PpoConfig&, ParamSet<double>*);

struct AdamState {
  ParamSet<float> m;
  ParamSet<float> v;
  std::int64_t step = 0;

  static AdamState ZerosLike(const ParamSet<float>& params);
  bool operator==(const AdamState&) const = default;
};

/// Adam (beta1 0.9, beta2 0.999) with bias correction.
void AdamStep(ParamSet<float>& params, const ParamSet<float>& grads,
              AdamState& state, double lr, double eps);

/// Scales grads so the global L2 norm is at most max_norm; returns the
/// pre-clip norm.
double ClipGlobalNorm(ParamSet<float>& grads, double max_norm);

struct UpdateStats {
  LossStats loss;  // averaged over minibatch passes
  double grad_norm = 0.0;
  int passes = 0;
};

/// epochs x minibatches Adam steps on one batch. Minibatches split whole
/// lanes so recurrent sequences stay intact. Gradients go through
/// `reducer` once per pass. Throws NonFiniteError on a non-finite loss or
/// gradient.
UpdateStats PpoUpdate(const RecurrentPolicy<float>& policy,
                      ParamSet<float>& params, AdamState& opt,
                      const TrajectoryBatch& traj,
                      std::span<const float> advantages,
                      std::span<const float> returns, const PpoConfig& cfg,
                      Rng rng, GradientReducer& reducer);

}  // namespace ued::agents
