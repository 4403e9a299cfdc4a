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

#include "ued/amaze/mutate.h"

#include <vector>

#include "ued/common/errors.h"

namespace ued::amaze {

MazeLevel MutateLevel(Rng rng, const MazeLevel& level,
                      const MutationConfig& config,
                      const StaticParams& /*params*/) {
  if (config.n_mutations < 1) {
    throw ContractViolation("n_mutations must be >= 1");
  }
  MazeLevel out = level;
  const int h = level.height();
  const int w = level.width();
  std::vector<Cell> candidates;
  candidates.reserve((h - 2) * (w - 2));

  for (int m = 0; m < config.n_mutations; ++m) {
    Rng edit = rng.split(m);
    const bool move_goal = edit.uniform() < config.goal_move_prob;
    candidates.clear();
    for (int r = 1; r < h - 1; ++r) {
      for (int c = 1; c < w - 1; ++c) {
        const Cell cell{r, c};
        if (cell == out.agent_pos || cell == out.goal_pos) continue;
        if (move_goal && out.walls.wall(cell)) continue;
        candidates.push_back(cell);
      }
    }
    if (candidates.empty()) continue;
    const Cell pick = candidates[edit.uniform_index(candidates.size())];
    if (move_goal) {
      out.goal_pos = pick;
    } else {
      out.walls.set(pick, !out.walls.wall(pick));
    }
  }
  return out;
}

}  // namespace ued::amaze
