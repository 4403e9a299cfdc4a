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

#include <bitset>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ued/core/static_params.h"

namespace ued::amaze {

enum class Dir : std::uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

inline Dir TurnLeft(Dir d) {
  return static_cast<Dir>((static_cast<int>(d) + 3) % 4);
}
inline Dir TurnRight(Dir d) {
  return static_cast<Dir>((static_cast<int>(d) + 1) % 4);
}

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

// Row/col offset of one step forward.
inline Cell Offset(Dir d) {
  switch (d) {
    case Dir::kNorth: return {-1, 0};
    case Dir::kEast: return {0, 1};
    case Dir::kSouth: return {1, 0};
    case Dir::kWest: return {0, -1};
  }
  return {0, 0};
}

/// Fixed-capacity wall bitmap. Value type, no heap allocation.
class WallGrid {
 public:
  WallGrid() = default;
  WallGrid(int height, int width) : height_(height), width_(width) {}

  // Grid with only the border walled.
  static WallGrid Bordered(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  int cells() const { return height_ * width_; }

  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
  }
  bool is_border(Cell c) const {
    return c.row == 0 || c.col == 0 || c.row == height_ - 1 ||
           c.col == width_ - 1;
  }
  int index(Cell c) const { return c.row * width_ + c.col; }
  Cell cell(int index) const { return {index / width_, index % width_}; }

  bool wall(Cell c) const { return bits_.test(index(c)); }
  bool wall(int index) const { return bits_.test(index); }
  void set(Cell c, bool value) { bits_.set(index(c), value); }
  void set(int index, bool value) { bits_.set(index, value); }

  int count() const { return static_cast<int>(bits_.count()); }
  int interior_wall_count() const;

  std::size_t hash() const;

  bool operator==(const WallGrid&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::bitset<kMaxGridCells> bits_;
};

/// One fully specified maze instance: the free parameters of the family.
struct MazeLevel {
  WallGrid walls;
  Cell agent_pos;
  Dir agent_dir = Dir::kNorth;
  Cell goal_pos;

  int height() const { return walls.height(); }
  int width() const { return walls.width(); }

  bool operator==(const MazeLevel&) const = default;
};

// Returns a description of the first broken invariant, or nullopt.
std::optional<std::string> LevelViolation(const MazeLevel& level);

// Throws ValidationError if LevelViolation() reports anything.
void ValidateLevel(const MazeLevel& level);

// Hash of the full layout. Used for duplicate detection.
std::size_t LevelHash(const MazeLevel& level);

// Number of cells whose tile differs (wall/goal/agent) between two levels of
// identical dimensions.
int CellDiff(const MazeLevel& a, const MazeLevel& b);

}  // namespace ued::amaze
