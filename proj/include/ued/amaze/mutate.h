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

#include "ued/amaze/level.h"
#include "ued/common/rng.h"
#include "ued/core/static_params.h"

namespace ued::amaze {

struct MutationConfig {
  int n_mutations = 20;
  double goal_move_prob = 0.05;
};

/// Applies `n_mutations` independent edits. Each edit either relocates the
/// goal to a uniform free cell or toggles the wall state of a uniform interior
/// cell other than the agent and goal cells. Throws ContractViolation when
/// n_mutations < 1.
MazeLevel MutateLevel(Rng rng, const MazeLevel& level,
                      const MutationConfig& config,
                      const StaticParams& params);

}  // namespace ued::amaze
