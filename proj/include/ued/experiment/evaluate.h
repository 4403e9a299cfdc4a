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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ued/agents/policy.h"
#include "ued/amaze/maze.h"
#include "ued/common/rng.h"
#include "ued/core/static_params.h"

namespace ued::experiment {

struct EvalLevel {
  std::string name;
  amaze::MazeLevel level;
};

/// Each spec is a shipped level name or a level file path. An empty list
/// selects every shipped level. Decode errors name the file.
std::vector<EvalLevel> ResolveEvalLevels(const std::vector<std::string>& specs);

struct LevelEvalResult {
  std::string name;
  int episodes = 0;
  int solved = 0;
  double return_sum = 0.0;
  double length_sum = 0.0;

  double solved_rate() const { return episodes ? double(solved) / episodes : 0.0; }
  double mean_return() const { return episodes ? return_sum / episodes : 0.0; }
  double mean_length() const { return episodes ? length_sum / episodes : 0.0; }
};

struct EvalResult {
  std::vector<LevelEvalResult> levels;

  int episodes() const;
  // Unweighted means over levels.
  double mean_solved_rate() const;
  double mean_return() const;
};

nlohmann::json ToJson(const EvalResult& r);

/// Chooses actions for every lane from their current step results.
using ActionSource =
    std::function<void(std::span<const amaze::MazeEnv::Result> current, std::span<int> actions)>;

/// Runs `episodes` independent episodes of one level in lock-step lanes;
/// each lane stops at its first terminal step. `make_source` is called once
/// per level with the lane count.
EvalResult EvaluateWith(const StaticParams& env_params, std::span<const EvalLevel> levels,
                        int episodes,
                        const std::function<ActionSource(int lanes)>& make_source);

/// Student evaluation: greedy (argmax) or sampled actions from the policy.
/// Never modifies the parameters.
EvalResult Evaluate(const agents::RecurrentPolicy<float>& policy,
                    const agents::ParamSet<float>& params, const StaticParams& env_params,
                    std::span<const EvalLevel> levels, int episodes, bool greedy, Rng rng);

}  // namespace ued::experiment
