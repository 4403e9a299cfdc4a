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

#include "ued/amaze/teacher.h"

#include <algorithm>

#include "ued/common/errors.h"

namespace ued::amaze {

namespace {

Cell ActionCell(int action, const StaticParams& params) {
  const int inner_w = params.width - 2;
  if (action < 0 || action >= TeacherNumActions(params)) {
    throw ContractViolation("teacher action out of range: " +
                            std::to_string(action));
  }
  return {1 + action / inner_w, 1 + action % inner_w};
}

}  // namespace

TeacherState InitialTeacherState(const StaticParams& params) {
  TeacherState s;
  s.partial_walls = WallGrid::Bordered(params.height, params.width);
  s.phase = params.wall_budget > 0 ? TeacherPhase::kPlacingWalls
                                   : TeacherPhase::kPlacingGoal;
  return s;
}

int TeacherNumActions(const StaticParams& params) {
  return params.interior_cells();
}

TeacherState TeacherStep(const TeacherState& state, int action,
                         const StaticParams& params) {
  TeacherState next = state;
  const Cell cell = ActionCell(action, params);
  switch (state.phase) {
    case TeacherPhase::kPlacingWalls:
      next.partial_walls.set(cell, true);
      ++next.n_placed;
      if (next.n_placed >= params.wall_budget) {
        next.phase = TeacherPhase::kPlacingGoal;
      }
      break;
    case TeacherPhase::kPlacingGoal:
      next.partial_walls.set(cell, false);
      next.goal_pos = cell;
      next.phase = TeacherPhase::kPlacingAgent;
      break;
    case TeacherPhase::kPlacingAgent: {
      const WallGrid& g = next.partial_walls;
      const int inner_w = params.width - 2;
      const int n = params.interior_cells();
      const int start = action;
      for (int k = 0; k < n; ++k) {
        const int a = (start + k) % n;
        const Cell c{1 + a / inner_w, 1 + a % inner_w};
        if (!g.wall(c) && c != *next.goal_pos) {
          next.agent_pos = c;
          break;
        }
      }
      if (!next.agent_pos) {
        throw ContractViolation("no free cell left for the agent");
      }
      next.phase = TeacherPhase::kDone;
      break;
    }
    case TeacherPhase::kDone:
      throw ContractViolation("teacher step on a finished design");
  }
  return next;
}

TeacherObservation TeacherObserve(const TeacherState& state,
                                  const StaticParams& params) {
  TeacherObservation obs;
  obs.height = params.height;
  obs.width = params.width;
  obs.grid.assign(params.height * params.width, kTeacherEmpty);
  const WallGrid& g = state.partial_walls;
  for (int i = 0; i < g.cells(); ++i) {
    if (g.wall(i)) obs.grid[i] = kTeacherWall;
  }
  if (state.goal_pos) obs.grid[g.index(*state.goal_pos)] = kTeacherGoal;
  if (state.agent_pos) obs.grid[g.index(*state.agent_pos)] = kTeacherAgent;
  obs.phase[static_cast<int>(state.phase)] = 1.0f;
  obs.n_placed = state.n_placed;
  obs.placed_fraction =
      params.wall_budget > 0
          ? static_cast<float>(state.n_placed) / params.wall_budget
          : 0.0f;
  return obs;
}

TeacherPhase DecodeTeacherPhase(const TeacherObservation& obs) {
  const auto it = std::max_element(obs.phase.begin(), obs.phase.end());
  return static_cast<TeacherPhase>(it - obs.phase.begin());
}

MazeLevel DecodeTeacherLevel(const TeacherState& state) {
  if (state.phase != TeacherPhase::kDone || !state.goal_pos ||
      !state.agent_pos) {
    throw ContractViolation("teacher design is not complete");
  }
  MazeLevel level;
  level.walls = state.partial_walls;
  level.goal_pos = *state.goal_pos;
  level.agent_pos = *state.agent_pos;
  level.agent_dir = state.agent_dir;
  return level;
}

MazeTeacherEnv::MazeTeacherEnv(StaticParams params) : params_(params) {
  ValidateStaticParams(params_);
}

MazeTeacherEnv::Result MazeTeacherEnv::reset(Rng /*rng*/) const {
  Result r;
  r.state = InitialTeacherState(params_);
  r.observation = TeacherObserve(r.state, params_);
  return r;
}

MazeTeacherEnv::Result MazeTeacherEnv::step(Rng rng, const State& state,
                                            int action) const {
  Result r;
  r.state = TeacherStep(state, action, params_);
  if (state.phase == TeacherPhase::kPlacingAgent) {
    // Heading is not part of the teacher's action space.
    r.state.agent_dir = static_cast<Dir>(rng.uniform_index(4));
  }
  r.done = r.state.phase == TeacherPhase::kDone;
  r.observation = TeacherObserve(r.state, params_);
  return r;
}

void MazeTeacherEnv::featurize(const Observation& obs,
                               std::span<std::uint8_t> tiles,
                               std::span<float> aux) const {
  if (tiles.size() != obs.grid.size() || aux.size() != 5) {
    throw ShapeError("teacher featurize: output spans have the wrong size");
  }
  std::copy(obs.grid.begin(), obs.grid.end(), tiles.begin());
  std::copy(obs.phase.begin(), obs.phase.end(), aux.begin());
  aux[4] = obs.placed_fraction;
}

}  // namespace ued::amaze
