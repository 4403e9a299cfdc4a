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

#include "ued/amaze/level.h"

#include <functional>

#include "ued/common/errors.h"

namespace ued::amaze {

WallGrid WallGrid::Bordered(int height, int width) {
  WallGrid g(height, width);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (g.is_border({r, c})) g.set({r, c}, true);
    }
  }
  return g;
}

int WallGrid::interior_wall_count() const {
  int n = 0;
  for (int r = 1; r < height_ - 1; ++r) {
    for (int c = 1; c < width_ - 1; ++c) n += wall(Cell{r, c});
  }
  return n;
}

std::size_t WallGrid::hash() const {
  std::size_t h = std::hash<std::bitset<kMaxGridCells>>{}(bits_);
  h ^= static_cast<std::size_t>(height_) * 0x9e3779b97f4a7c15ULL +
       static_cast<std::size_t>(width_);
  return h;
}

std::optional<std::string> LevelViolation(const MazeLevel& level) {
  const WallGrid& g = level.walls;
  if (g.height() < 3 || g.width() < 3 || g.height() > kMaxGridSide ||
      g.width() > kMaxGridSide) {
    return "grid dimensions out of range";
  }
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      if (g.is_border({r, c}) && !g.wall(Cell{r, c})) {
        return "border cell (" + std::to_string(r) + "," + std::to_string(c) +
               ") is not a wall";
      }
    }
  }
  auto interior_free = [&](Cell c) {
    return g.in_bounds(c) && !g.is_border(c) && !g.wall(c);
  };
  if (!interior_free(level.agent_pos)) {
    return "agent is not on a free interior cell";
  }
  if (!interior_free(level.goal_pos)) {
    return "goal is not on a free interior cell";
  }
  if (level.agent_pos == level.goal_pos) return "agent and goal coincide";
  if (static_cast<int>(level.agent_dir) > 3) return "invalid agent direction";
  return std::nullopt;
}

void ValidateLevel(const MazeLevel& level) {
  if (auto v = LevelViolation(level)) throw ValidationError(*v);
}

std::size_t LevelHash(const MazeLevel& level) {
  std::size_t h = level.walls.hash();
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::size_t>(level.goal_pos.row));
  mix(static_cast<std::size_t>(level.goal_pos.col));
  mix(static_cast<std::size_t>(level.agent_pos.row));
  mix(static_cast<std::size_t>(level.agent_pos.col));
  mix(static_cast<std::size_t>(level.agent_dir));
  return h;
}

int CellDiff(const MazeLevel& a, const MazeLevel& b) {
  const WallGrid& g = a.walls;
  int diff = 0;
  for (int i = 0; i < g.cells(); ++i) {
    Cell c = g.cell(i);
    auto tile = [c](const MazeLevel& l) {
      if (l.walls.wall(c)) return 1;
      if (l.goal_pos == c) return 2;
      if (l.agent_pos == c) return 3;
      return 0;
    };
    diff += tile(a) != tile(b);
  }
  return diff;
}

}  // namespace ued::amaze
