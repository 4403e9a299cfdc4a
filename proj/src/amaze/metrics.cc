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

#include "ued/amaze/metrics.h"

#include "ued/amaze/apsp.h"

namespace ued::amaze {

EnvMetrics ComputeEnvMetrics(const MazeLevel& level) {
  EnvMetrics m;
  m.n_walls = level.walls.interior_wall_count();
  const int interior = (level.height() - 2) * (level.width() - 2);
  m.passable_ratio =
      interior > 0 ? static_cast<double>(interior - m.n_walls) / interior : 0.0;
  const DistanceMatrix dist = SeidelApsp(level.walls);
  const int d = dist.distance(level.agent_pos, level.goal_pos);
  m.solvable = d != DistanceMatrix::kUnreachable;
  m.shortest_path_length = m.solvable ? d : 0;
  return m;
}

}  // namespace ued::amaze
