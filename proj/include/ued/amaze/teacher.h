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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ued/amaze/level.h"
#include "ued/core/env.h"
#include "ued/core/static_params.h"

namespace ued::amaze {

enum class TeacherPhase : std::uint8_t {
  kPlacingWalls = 0,
  kPlacingGoal = 1,
  kPlacingAgent = 2,
  kDone = 3,
};

/// The teacher's design MDP state. Actions index interior cells in
/// row-major order.
struct TeacherState {
  WallGrid partial_walls;
  int n_placed = 0;  // wall-placement steps taken, including no-ops
  TeacherPhase phase = TeacherPhase::kPlacingWalls;
  std::optional<Cell> goal_pos;
  std::optional<Cell> agent_pos;
  Dir agent_dir = Dir::kNorth;

  bool operator==(const TeacherState&) const = default;
};

TeacherState InitialTeacherState(const StaticParams& params);

int TeacherNumActions(const StaticParams& params);

// Number of design steps in one teacher episode.
inline int TeacherEpisodeLength(const StaticParams& params) {
  return params.wall_budget + 2;
}

/// One design decision. Re-walling a wall is a no-op step; a goal dropped on
/// a wall clears it; an agent dropped on a wall or the goal slides to the
/// next free interior cell in row-major order (wrapping).
TeacherState TeacherStep(const TeacherState& state, int action,
                         const StaticParams& params);

/// Full-grid teacher observation: tile codes plus phase one-hot and
/// normalized placement count.
struct TeacherObservation {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> grid;  // kTeacher* codes, row-major
  std::array<float, 4> phase{};
  float placed_fraction = 0.0f;
  int n_placed = 0;

  bool operator==(const TeacherObservation&) const = default;
};

enum TeacherTile : std::uint8_t {
  kTeacherEmpty = 0,
  kTeacherWall = 1,
  kTeacherGoal = 2,
  kTeacherAgent = 3,
};

TeacherObservation TeacherObserve(const TeacherState& state,
                                  const StaticParams& params);

TeacherPhase DecodeTeacherPhase(const TeacherObservation& obs);

/// Level described by a finished design. Throws ContractViolation if the
/// design is incomplete.
MazeLevel DecodeTeacherLevel(const TeacherState& state);

/// The design MDP as an Environment. Reward is always 0 here; the runner
/// pays the teacher its regret at the terminal step.
class MazeTeacherEnv {
 public:
  using State = TeacherState;
  using Observation = TeacherObservation;
  using Result = StepResult<State, Observation>;

  explicit MazeTeacherEnv(StaticParams params);

  const StaticParams& params() const { return params_; }
  int num_actions() const { return TeacherNumActions(params_); }
  int episode_length() const { return TeacherEpisodeLength(params_); }

  Result reset(Rng rng) const;
  Result step(Rng rng, const State& state, int action) const;
  Result auto_reset(const State&) const { return reset(Rng(0)); }

  bool is_complete(const State& state) const {
    return state.phase == TeacherPhase::kDone;
  }
  MazeLevel decode(const State& state) const {
    return DecodeTeacherLevel(state);
  }

  int feature_cells() const { return params_.height * params_.width; }
  int feature_codes() const { return 4; }
  int feature_aux() const { return 5; }
  void featurize(const Observation& obs, std::span<std::uint8_t> tiles,
                 std::span<float> aux) const;

 private:
  StaticParams params_;
};

}  // namespace ued::amaze
