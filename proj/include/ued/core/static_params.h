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

#include <string>

namespace ued {

// Largest supported grid side, including the border.
inline constexpr int kMaxGridSide = 32;
inline constexpr int kMaxGridCells = kMaxGridSide * kMaxGridSide;
inline constexpr int kMaxViewSize = 15;

/// Fixed aspects of an environment family, set once at construction.
/// Per-instance ("free") parameters live in the environment state.
struct StaticParams {
  int height = 13;  // includes the border walls
  int width = 13;
  int max_episode_steps = 250;
  int agent_view_size = 5;
  int wall_budget = 60;
  bool see_through_walls = true;

  int interior_cells() const { return (height - 2) * (width - 2); }

  bool operator==(const StaticParams&) const = default;
};

/// Throws ConfigError naming the first violated invariant.
void ValidateStaticParams(const StaticParams& params);

}  // namespace ued
