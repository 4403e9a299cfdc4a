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

#include "ued/agents/ppo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ued/common/errors.h"

namespace ued::agents {

void ValidatePpoConfig(const PpoConfig& c) {
  if (!(c.gamma > 0.0 && c.gamma <= 1.0)) {
    throw ConfigError("ppo.gamma must lie in (0, 1]");
  }
  if (!(c.gae_lambda > 0.0 && c.gae_lambda <= 1.0)) {
    throw ConfigError("ppo.gae_lambda must lie in (0, 1]");
  }
  if (c.epochs < 1) throw ConfigError("ppo.epochs must be >= 1");
  if (c.minibatches < 1) throw ConfigError("ppo.minibatches must be >= 1");
  if (!(c.clip_range > 0.0)) throw ConfigError("ppo.clip_range must be > 0");
  if (!(c.lr > 0.0)) throw ConfigError("ppo.lr must be > 0");
  if (!(c.adam_eps > 0.0)) throw ConfigError("ppo.adam_eps must be > 0");
  if (!(c.max_grad_norm > 0.0)) {
    throw ConfigError("ppo.max_grad_norm must be > 0");
  }
  if (c.value_loss_coef < 0.0 || c.entropy_coef < 0.0) {
    throw ConfigError("ppo loss coefficients must be >= 0");
  }
}

GaeResult ComputeGae(std::span<const float> rewards,
                     std::span<const float> values,
                     std::span<const std::uint8_t> dones,
                     std::span<const float> last_values, int steps, int lanes,
                     double gamma, double lambda) {
  const std::size_t n = static_cast<std::size_t>(steps) * lanes;
  if (rewards.size() != n || values.size() != n || dones.size() != n ||
      last_values.size() != static_cast<std::size_t>(lanes)) {
    throw ShapeError("GAE inputs disagree in length");
  }
  GaeResult out;
  out.advantages.assign(n, 0.0f);
  out.returns.assign(n, 0.0f);
  for (int l = 0; l < lanes; ++l) {
    double next_value = last_values[l];
    double next_adv = 0.0;
    for (int t = steps - 1; t >= 0; --t) {
      const std::size_t i = static_cast<std::size_t>(t) * lanes + l;
      const double live = dones[i] ? 0.0 : 1.0;
      const double delta = rewards[i] + gamma * live * next_value - values[i];
      next_adv = delta + gamma * lambda * live * next_adv;
      out.advantages[i] = static_cast<float>(next_adv);
      out.returns[i] = static_cast<float>(next_adv + values[i]);
      next_value = values[i];
    }
  }
  return out;
}

std::vector<float> NormalizeAdvantages(std::span<const float> advantages,
                                       GradientReducer& reducer) {
  double stats[3] = {static_cast<double>(advantages.size()), 0.0, 0.0};
  for (float a : advantages) stats[1] += a;
  reducer.sum(stats);
  const double mean = stats[0] > 0 ? stats[1] / stats[0] : 0.0;
  // Second pass around the global mean keeps the variance well conditioned.
  double sq[1] = {0.0};
  for (float a : advantages) sq[0] += (a - mean) * (a - mean);
  reducer.sum(sq);
  const double sd = stats[0] > 0 ? std::sqrt(sq[0] / stats[0]) : 0.0;
  std::vector<float> out(advantages.size());
  for (std::size_t i = 0; i < advantages.size(); ++i) {
    out[i] = static_cast<float>((advantages[i] - mean) / (sd + 1e-8));
  }
  return out;
}

template <class S>
LossStats PpoLoss(const RecurrentPolicy<S>& policy, const ParamSet<S>& params,
                  const TrajectoryBatch& traj,
                  std::span<const float> advantages,
                  std::span<const float> returns, const PpoConfig& cfg,
                  ParamSet<S>* grads) {
  using Mat = typename RecurrentPolicy<S>::Mat;
  using Vec = typename RecurrentPolicy<S>::Vec;
  const int n = traj.size();
  if (static_cast<int>(advantages.size()) != n ||
      static_cast<int>(returns.size()) != n) {
    throw ShapeError("advantages/returns must match the trajectory size");
  }
  typename RecurrentPolicy<S>::SequenceCache cache;
  const Mat h0 = traj.initial_hidden.template cast<S>();
  policy.forward_sequence(params, traj.sequence(), h0, cache);

  const int a_dim = static_cast<int>(cache.logits.cols());
  const S inv_n = S(1) / static_cast<S>(n);
  const S eps = static_cast<S>(cfg.clip_range);
  const S cv = static_cast<S>(cfg.value_loss_coef);
  const S ce = static_cast<S>(cfg.entropy_coef);
  Mat dlogits(n, a_dim);
  Vec dvalues(n);
  LossStats st;
  std::vector<S> logp(a_dim);
  std::vector<S> prob(a_dim);
  for (int i = 0; i < n; ++i) {
    // Stable log-softmax.
    S mx = cache.logits(i, 0);
    for (int j = 1; j < a_dim; ++j) mx = std::max(mx, cache.logits(i, j));
    S z = 0;
    for (int j = 0; j < a_dim; ++j) z += std::exp(cache.logits(i, j) - mx);
    const S log_z = mx + std::log(z);
    S entropy = 0;
    for (int j = 0; j < a_dim; ++j) {
      logp[j] = cache.logits(i, j) - log_z;
      prob[j] = std::exp(logp[j]);
      entropy -= prob[j] * logp[j];
    }
    const int act = traj.actions[i];
    const S adv = static_cast<S>(advantages[i]);
    const S old_logp = static_cast<S>(traj.log_probs[i]);
    const S ratio = std::exp(logp[act] - old_logp);
    const S clipped = std::clamp(ratio, S(1) - eps, S(1) + eps);
    const S unclipped_obj = ratio * adv;
    const S clipped_obj = clipped * adv;
    const bool use_unclipped = unclipped_obj <= clipped_obj;
    const S pg = -std::min(unclipped_obj, clipped_obj);
    st.policy += static_cast<double>(pg);
    st.entropy += static_cast<double>(entropy);
    st.approx_kl += static_cast<double>(old_logp - logp[act]);
    if (!use_unclipped) st.clip_fraction += 1.0;

    // Value loss.
    const S v = cache.values(i);
    const S ret = static_cast<S>(returns[i]);
    const S v_old = static_cast<S>(traj.values[i]);
    S vl = S(0.5) * (v - ret) * (v - ret);
    S dv = v - ret;
    if (cfg.value_clipping) {
      const S delta = v - v_old;
      const S vc = v_old + std::clamp(delta, -eps, eps);
      const S vlc = S(0.5) * (vc - ret) * (vc - ret);
      if (vlc > vl) {
        vl = vlc;
        dv = (std::abs(delta) < eps) ? (vc - ret) : S(0);
      }
    }
    st.value += static_cast<double>(vl);

    // d/dlogits of the per-entry objective, scaled by 1/N.
    const S dpg_dlogp = use_unclipped ? -adv * ratio : S(0);
    for (int j = 0; j < a_dim; ++j) {
      const S onehot = (j == act) ? S(1) : S(0);
      const S dent = -prob[j] * (logp[j] + entropy);
      dlogits(i, j) = (dpg_dlogp * (onehot - prob[j]) - ce * dent) * inv_n;
    }
    dvalues(i) = cv * dv * inv_n;
  }
  st.policy /= n;
  st.value /= n;
  st.entropy /= n;
  st.approx_kl /= n;
  st.clip_fraction /= n;
  st.total = st.policy + cfg.value_loss_coef * st.value -
             cfg.entropy_coef * st.entropy;
  if (grads != nullptr) {
    policy.backward_sequence(params, traj.sequence(), cache, dlogits, dvalues,
                             *grads);
  }
  return st;
}

template LossStats PpoLoss<float>(const RecurrentPolicy<float>&,
                                  const ParamSet<float>&,
                                  const TrajectoryBatch&,
                                  std::span<const float>,
                                  std::span<const float>, const PpoConfig&,
                                  ParamSet<float>*);
template LossStats PpoLoss<double>(const RecurrentPolicy<double>&,
                                   const ParamSet<double>&,
                                   const TrajectoryBatch&,
                                   std::span<const float>,
                                   std::span<const float>, const PpoConfig&,
                                   ParamSet<double>*);

AdamState AdamState::ZerosLike(const ParamSet<float>& params) {
  AdamState s;
  s.m = ParamSet<float>(params.layout_ptr());
  s.v = ParamSet<float>(params.layout_ptr());
  return s;
}

void AdamStep(ParamSet<float>& params, const ParamSet<float>& grads,
              AdamState& state, double lr, double eps) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  state.step++;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
  auto p = params.flat();
  auto g = grads.flat();
  auto m = state.m.flat();
  auto v = state.v.flat();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = static_cast<float>(kBeta1 * m[i] + (1.0 - kBeta1) * g[i]);
    v[i] = static_cast<float>(kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i]);
    const double mh = m[i] / c1;
    const double vh = v[i] / c2;
    p[i] = static_cast<float>(p[i] - lr * mh / (std::sqrt(vh) + eps));
  }
}

double ClipGlobalNorm(ParamSet<float>& grads, double max_norm) {
  double sq = 0.0;
  for (float g : grads.flat()) sq += static_cast<double>(g) * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const float scale = static_cast<float>(max_norm / (norm + 1e-6));
    for (float& g : grads.flat()) g *= scale;
  }
  return norm;
}

UpdateStats PpoUpdate(const RecurrentPolicy<float>& policy,
                      ParamSet<float>& params, AdamState& opt,
                      const TrajectoryBatch& traj,
                      std::span<const float> advantages,
                      std::span<const float> returns, const PpoConfig& cfg,
                      Rng rng, GradientReducer& reducer) {
  if (cfg.minibatches > traj.lanes) {
    throw ConfigError("ppo.minibatches exceeds the number of lanes");
  }
  const std::vector<float> adv = NormalizeAdvantages(advantages, reducer);
  ParamSet<float> grads(params.layout_ptr());
  UpdateStats out;
  std::vector<int> order(traj.lanes);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    if (cfg.minibatches > 1) {
      Rng shuffle = rng.split(epoch);
      std::shuffle(order.begin(), order.end(), shuffle);
    }
    for (int mb = 0; mb < cfg.minibatches; ++mb) {
      grads.set_zero();
      LossStats ls;
      if (cfg.minibatches == 1) {
        ls = PpoLoss<float>(policy, params, traj, adv, returns, cfg, &grads);
      } else {
        const int begin = mb * traj.lanes / cfg.minibatches;
        const int end = (mb + 1) * traj.lanes / cfg.minibatches;
        const std::span<const int> lanes(order.data() + begin, end - begin);
        const TrajectoryBatch part = SliceLanes(traj, lanes);
        const auto a = SliceLaneValues(adv, traj.steps, traj.lanes, lanes);
        const auto r = SliceLaneValues(returns, traj.steps, traj.lanes, lanes);
        ls = PpoLoss<float>(policy, params, part, a, r, cfg, &grads);
      }
      reducer.mean(grads.flat());
      const double norm = ClipGlobalNorm(grads, cfg.max_grad_norm);
      if (!std::isfinite(ls.total) || !std::isfinite(norm)) {
        std::ostringstream msg;
        msg << "non-finite PPO update at epoch " << epoch << ", minibatch "
            << mb << ": loss=" << ls.total << " policy=" << ls.policy
            << " value=" << ls.value << " entropy=" << ls.entropy
            << " grad_norm=" << norm;
        throw NonFiniteError(msg.str());
      }
      AdamStep(params, grads, opt, cfg.lr, cfg.adam_eps);
      out.loss.total += ls.total;
      out.loss.policy += ls.policy;
      out.loss.value += ls.value;
      out.loss.entropy += ls.entropy;
      out.loss.approx_kl += ls.approx_kl;
      out.loss.clip_fraction += ls.clip_fraction;
      out.grad_norm += norm;
      out.passes++;
    }
  }
  const double k = out.passes;
  out.loss.total /= k;
  out.loss.policy /= k;
  out.loss.value /= k;
  out.loss.entropy /= k;
  out.loss.approx_kl /= k;
  out.loss.clip_fraction /= k;
  out.grad_norm /= k;
  return out;
}

}  // namespace ued::agents
