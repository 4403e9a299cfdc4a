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

#include "ued/experiment/registry.h"

namespace ued::experiment {

namespace {

using runners::RunnerConfig;
using runners::RunnerKind;

// Shared PPO settings; per-runner values below.
void Common(RunnerConfig& c) {
  c.rollout_length = 256;
  c.n_envs = 32;
  c.ppo.epochs = 5;
  c.ppo.minibatches = 1;
  c.ppo.clip_range = 0.2;
  c.ppo.adam_eps = 1e-5;
  c.ppo.max_grad_norm = 0.5;
  c.ppo.value_loss_coef = 0.5;
  c.ppo.value_clipping = true;
  c.plr.buffer_size = 4000;
  c.plr.score_fn = runners::ScoreFn::kMaxMc;
  c.plr.prioritization = runners::Prioritization::kRank;
  c.plr.temperature = 0.3;
  c.accel.n_mutations = 20;
  c.accel.subsample_size = 4;
}

void Ppo(RunnerConfig& c, double gamma, double lambda, double lr, double ent) {
  c.ppo.gamma = gamma;
  c.ppo.gae_lambda = lambda;
  c.ppo.lr = lr;
  c.ppo.entropy_coef = ent;
}

void Plr(RunnerConfig& c, double p, double rho) {
  c.plr.replay_rate = p;
  c.plr.staleness_coef = rho;
  c.plr.robust = true;
}

}  // namespace

Registries BuiltinRegistries() {
  Registries r;
  r.envs.add("amaze", {StaticParams{}, "recurrent_policy"});
  r.models.add("recurrent_policy", {runners::StudentNetSpec});

  r.runners.add("dr", {[](RunnerConfig& c) {
    Common(c);
    c.kind = RunnerKind::kDr;
    Ppo(c, 0.995, 0.98, 1e-4, 1e-3);
  }});
  r.runners.add("paired", {[](RunnerConfig& c) {
    Common(c);
    c.kind = RunnerKind::kPaired;
    Ppo(c, 0.995, 0.98, 1e-4, 1e-3);
    c.paired.generator_entropy_coef = 0.05;
  }});
  r.runners.add("plr", {[](RunnerConfig& c) {
    Common(c);
    c.kind = RunnerKind::kPlr;
    Ppo(c, 0.999, 0.98, 3e-4, 0.0);
    Plr(c, 0.5, 0.3);
  }});
  r.runners.add("plr_parallel", {[](RunnerConfig& c) {
    Common(c);
    c.kind = RunnerKind::kPlrParallel;
    Ppo(c, 0.999, 0.95, 3e-4, 0.0);
    Plr(c, 0.5, 0.5);
  }});
  r.runners.add("accel", {[](RunnerConfig& c) {
    Common(c);
    c.kind = RunnerKind::kPlr;
    c.accel.enabled = true;
    Ppo(c, 0.999, 0.98, 3e-4, 0.0);
    Plr(c, 0.8, 0.5);
  }});
  r.runners.add("accel_parallel", {[](RunnerConfig& c) {
    Common(c);
    c.kind = RunnerKind::kPlrParallel;
    c.accel.enabled = true;
    Ppo(c, 0.999, 0.98, 1e-4, 1e-3);
    Plr(c, 0.8, 0.5);
  }});
  return r;
}

const Registries& DefaultRegistries() {
  static const Registries r = BuiltinRegistries();
  return r;
}

}  // namespace ued::experiment
