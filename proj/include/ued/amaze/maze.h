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
#include <span>

#include "ued/amaze/level.h"
#include "ued/common/rng.h"
#include "ued/core/env.h"
#include "ued/core/static_params.h"

namespace ued::amaze {

enum Action : int { kTurnLeft = 0, kTurnRight = 1, kForward = 2 };
inline constexpr int kNumActions = 3;

// Tile codes of the egocentric view.
enum Tile : std::uint8_t { kEmpty = 0, kWall = 1, kGoal = 2, kOutOfBounds = 3 };
inline constexpr int kNumTileCodes = 4;

struct EnvState {
  MazeLevel level;  // as instantiated; agent pose here is the start pose
  Cell agent_pos;
  Dir agent_dir = Dir::kNorth;
  int time = 0;
  bool terminal = false;

  bool operator==(const EnvState&) const = default;
};

/// Egocentric view: row 0 is farthest ahead, the agent sits at the bottom
/// row, centre column, facing up.
struct Observation {
  int size = 0;
  std::array<std::uint8_t, kMaxViewSize * kMaxViewSize> view{};
  Dir dir = Dir::kNorth;

  std::uint8_t at(int row, int col) const { return view[row * size + col]; }
  bool operator==(const Observation&) const = default;
};

// Fresh state positioned at the level's start pose.
EnvState StateFromLevel(const MazeLevel& level);

/// Applies one action. Moves into walls are no-ops; time always advances.
EnvState Transition(const EnvState& state, int action);

/// 1 - 0.9 t/T when the agent stands on the goal, otherwise 0.
float ComputeReward(const EnvState& after, const StaticParams& params);

Observation Observe(const EnvState& state, const StaticParams& params);

/// Uniform wall count in [0, wall_budget], walls placed without replacement,
/// then goal, then agent with a uniform heading.
MazeLevel SampleRandomLevel(Rng rng, const StaticParams& params);

/// The goal-reaching maze as an Environment.
class MazeEnv {
 public:
  using State = EnvState;
  using Observation = amaze::Observation;
  using Result = StepResult<State, Observation>;

  explicit MazeEnv(StaticParams params);

  const StaticParams& params() const { return params_; }
  int num_actions() const { return kNumActions; }

  Result reset(Rng rng) const;
  Result step(Rng rng, const State& state, int action) const;

  // Restarts an episode on `level` (no validation; used for auto-replay).
  Result reset_to_level(const MazeLevel& level) const;
  // Episode restart after done: same level, start pose.
  Result auto_reset(const State& state) const {
    return reset_to_level(state.level);
  }

  MazeLevel get_env_state(const State& state) const { return state.level; }
  State set_env_state(const State& state, const MazeLevel& level) const;

  // Network input layout: one tile code per view cell, plus a one-hot heading.
  int feature_cells() const {
    return params_.agent_view_size * params_.agent_view_size;
  }
  int feature_codes() const { return kNumTileCodes; }
  int feature_aux() const { return 4; }
  void featurize(const Observation& obs, std::span<std::uint8_t> tiles,
                 std::span<float> aux) const;

 private:
  StaticParams params_;
};

}  // namespace ued::amaze
