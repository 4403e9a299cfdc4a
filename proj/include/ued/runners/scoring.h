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

#include "ued/agents/ppo.h"
#include "ued/agents/trajectory.h"

namespace ued::runners {

enum class ScoreFn { kMaxMc, kPvl };

/// Positive value loss: mean over t of max(A_t, 0). Throws on an empty slice.
double ScorePvl(std::span<const float> advantages);

/// Maximum Monte Carlo regret: mean over t of (max_return - V(s_t)).
/// Throws on an empty slice.
double ScoreMaxMc(std::span<const float> values, double max_return);

struct LaneScore {
  double score = 0.0;       // clamped to >= 0
  double max_return = 0.0;  // running max including this rollout
  double mean_return = 0.0;
  int episodes = 0;
  int solved = 0;
};

/// Scores every lane of a rollout, one level per lane. `prior_max_return`
/// holds the running maximum carried by each lane's level (0 for new ones).
std::vector<LaneScore> ScoreLanes(const agents::TrajectoryBatch& traj,
                                  const agents::GaeResult& gae, ScoreFn fn,
                                  std::span<const double> prior_max_return,
                                  bool discounted_max_return, double gamma);

}  // namespace ued::runners
