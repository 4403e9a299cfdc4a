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

#include "ued/agents/agent.h"

#include "ued/common/errors.h"

namespace ued::agents {

Agent InitAgent(const RecurrentPolicy<float>& policy, Rng rng) {
  Agent a;
  a.params = policy.init(rng);
  a.opt = AdamState::ZerosLike(a.params);
  return a;
}

AgentPop::AgentPop(RecurrentPolicy<float> policy, int n, Rng rng,
                   bool shared_seed)
    : policy_(std::move(policy)) {
  if (n < 1) throw ConfigError("population size must be >= 1");
  members_.reserve(n);
  for (int i = 0; i < n; ++i) {
    members_.push_back(InitAgent(policy_, shared_seed ? rng : rng.split(i)));
  }
}

std::vector<UpdateStats> AgentPop::update(std::span<const TrajectoryBatch> trajs,
                                          std::span<const GaeResult> gae,
                                          const PpoConfig& cfg, Rng rng) {
  if (trajs.size() != members_.size() || gae.size() != members_.size()) {
    throw ShapeError("one trajectory and GAE result per member expected");
  }
  std::vector<UpdateStats> out;
  out.reserve(members_.size());
  LocalReducer local;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    out.push_back(PpoUpdate(policy_, members_[i].params, members_[i].opt,
                            trajs[i], gae[i].advantages, gae[i].returns, cfg,
                            rng.split(i), local));
  }
  return out;
}

}  // namespace ued::agents
