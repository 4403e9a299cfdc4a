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

namespace ued::amaze {

struct EnvMetrics {
  int n_walls = 0;               // interior walls only
  int shortest_path_length = 0;  // agent to goal; 0 when unsolvable
  bool solvable = false;
  double passable_ratio = 0.0;   // free interior cells / interior cells
};

/// Agent-to-goal distance comes from the Seidel APSP matrix.
EnvMetrics ComputeEnvMetrics(const MazeLevel& level);

}  // namespace ued::amaze
