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

#include "ued/amaze/maze.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "ued/common/errors.h"

namespace ued::amaze {

EnvState StateFromLevel(const MazeLevel& level) {
  EnvState s;
  s.level = level;
  s.agent_pos = level.agent_pos;
  s.agent_dir = level.agent_dir;
  return s;
}

EnvState Transition(const EnvState& state, int action) {
  EnvState next = state;
  switch (action) {
    case kTurnLeft:
      next.agent_dir = TurnLeft(state.agent_dir);
      break;
    case kTurnRight:
      next.agent_dir = TurnRight(state.agent_dir);
      break;
    case kForward: {
      Cell d = Offset(state.agent_dir);
      Cell target{state.agent_pos.row + d.row, state.agent_pos.col + d.col};
      const WallGrid& g = state.level.walls;
      if (g.in_bounds(target) && !g.is_border(target) && !g.wall(target)) {
        next.agent_pos = target;
      }
      break;
    }
    default:
      throw ContractViolation("action out of range: " + std::to_string(action));
  }
  next.time = state.time + 1;
  return next;
}

float ComputeReward(const EnvState& after, const StaticParams& params) {
  if (after.agent_pos != after.level.goal_pos) return 0.0f;
  return 1.0f - 0.9f * (static_cast<float>(after.time) /
                        static_cast<float>(params.max_episode_steps));
}

Observation Observe(const EnvState& state, const StaticParams& params) {
  Observation obs;
  const int v = params.agent_view_size;
  obs.size = v;
  obs.dir = state.agent_dir;
  const Cell fwd = Offset(state.agent_dir);
  const Cell right = Offset(TurnRight(state.agent_dir));
  const WallGrid& g = state.level.walls;
  const int half = v / 2;
  for (int vr = 0; vr < v; ++vr) {
    const int ahead = v - 1 - vr;
    for (int vc = 0; vc < v; ++vc) {
      const int lateral = vc - half;
      Cell c{state.agent_pos.row + ahead * fwd.row + lateral * right.row,
             state.agent_pos.col + ahead * fwd.col + lateral * right.col};
      std::uint8_t tile;
      if (!g.in_bounds(c)) {
        tile = kOutOfBounds;
      } else if (g.wall(c)) {
        tile = kWall;
      } else if (c == state.level.goal_pos) {
        tile = kGoal;
      } else {
        tile = kEmpty;
      }
      obs.view[vr * v + vc] = tile;
    }
  }
  // TODO: shadow-casting occlusion for see_through_walls=false.
  return obs;
}

MazeLevel SampleRandomLevel(Rng rng, const StaticParams& params) {
  ValidateStaticParams(params);
  MazeLevel level;
  level.walls = WallGrid::Bordered(params.height, params.width);

  const int inner_w = params.width - 2;
  std::vector<int> cells(params.interior_cells());
  std::iota(cells.begin(), cells.end(), 0);
  auto to_cell = [inner_w](int i) { return Cell{1 + i / inner_w, 1 + i % inner_w}; };

  const int n_walls = static_cast<int>(rng.uniform_int(0, params.wall_budget));
  // Partial Fisher-Yates: the first n_walls + 2 slots become walls, goal,
  // agent, each uniform over what remains.
  const int n_draw = n_walls + 2;
  for (int i = 0; i < n_draw; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_index(cells.size() - i));
    std::swap(cells[i], cells[j]);
  }
  for (int i = 0; i < n_walls; ++i) level.walls.set(to_cell(cells[i]), true);
  level.goal_pos = to_cell(cells[n_walls]);
  level.agent_pos = to_cell(cells[n_walls + 1]);
  level.agent_dir = static_cast<Dir>(rng.uniform_index(4));
  return level;
}

MazeEnv::MazeEnv(StaticParams params) : params_(params) {
  ValidateStaticParams(params_);
}

MazeEnv::Result MazeEnv::reset(Rng rng) const {
  return reset_to_level(SampleRandomLevel(rng, params_));
}

MazeEnv::Result MazeEnv::reset_to_level(const MazeLevel& level) const {
  Result r;
  r.state = StateFromLevel(level);
  r.observation = Observe(r.state, params_);
  return r;
}

MazeEnv::Result MazeEnv::step(Rng /*rng*/, const State& state,
                              int action) const {
  if (state.terminal) {
    throw ContractViolation("step() called on a terminal state");
  }
  Result r;
  r.state = Transition(state, action);
  r.reward = ComputeReward(r.state, params_);
  const bool success = r.state.agent_pos == r.state.level.goal_pos;
  const bool timeout = r.state.time >= params_.max_episode_steps;
  r.done = success || timeout;
  r.state.terminal = r.done;
  r.observation = Observe(r.state, params_);
  // Success wins when the goal is reached on the last allowed step.
  r.info.set("success", success ? 1.0 : 0.0);
  r.info.set("timeout", (timeout && !success) ? 1.0 : 0.0);
  return r;
}

EnvState MazeEnv::set_env_state(const State& /*state*/,
                                const MazeLevel& level) const {
  ValidateLevel(level);
  if (level.height() != params_.height || level.width() != params_.width) {
    throw ValidationError("level dimensions do not match static params");
  }
  return StateFromLevel(level);
}

void MazeEnv::featurize(const Observation& obs, std::span<std::uint8_t> tiles,
                        std::span<float> aux) const {
  const int n = obs.size * obs.size;
  if (static_cast<int>(tiles.size()) != n || aux.size() != 4) {
    throw ShapeError("featurize: output spans have the wrong size");
  }
  std::copy_n(obs.view.begin(), n, tiles.begin());
  std::fill(aux.begin(), aux.end(), 0.0f);
  aux[static_cast<int>(obs.dir)] = 1.0f;
}

}  // namespace ued::amaze
