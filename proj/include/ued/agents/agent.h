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

#include "ued/agents/params.h"
#include "ued/agents/policy.h"
#include "ued/agents/ppo.h"
#include "ued/common/rng.h"

namespace ued::agents {

/// One learner: parameters plus optimizer moments.
struct Agent {
  ParamSet<float> params;
  AdamState opt;

  bool operator==(const Agent&) const = default;
};

Agent InitAgent(const RecurrentPolicy<float>& policy, Rng rng);

/// n independent learners sharing one architecture. Member i is initialized
/// from rng.split(i), or from rng itself when `shared_seed` is set.
class AgentPop {
 public:
  AgentPop(RecurrentPolicy<float> policy, int n, Rng rng,
           bool shared_seed = false);

  const RecurrentPolicy<float>& policy() const { return policy_; }
  int size() const { return static_cast<int>(members_.size()); }
  Agent& operator[](int i) { return members_[i]; }
  const Agent& operator[](int i) const { return members_[i]; }
  std::vector<Agent>& members() { return members_; }
  const std::vector<Agent>& members() const { return members_; }

  /// Member-wise PPO updates; member i uses rng.split(i).
  std::vector<UpdateStats> update(std::span<const TrajectoryBatch> trajs,
                                  std::span<const GaeResult> gae,
                                  const PpoConfig& cfg, Rng rng);

 private:
  RecurrentPolicy<float> policy_;
  std::vector<Agent> members_;
};

}  // namespace ued::agents
