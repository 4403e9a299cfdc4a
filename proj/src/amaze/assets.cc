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

#include "ued/amaze/assets.h"


#include "ued/amaze/level_io.h"
#include "ued/common/errors.h"

namespace ued::amaze {

namespace {

// 15x15 grids (13x13 interior) reconstructed to resemble the classic
// out-of-distribution maze set. Layouts are approximations, not copies.
const std::vector<NamedLevel>& Table() {
  static const std::vector<NamedLevel> table = {
      {"SixteenRooms", R"(###############
#>..#......#..#
#......#......#
#...#..#...#..#
#.####.#.###.##
#..........#..#
#...#..#......#
#.######.###.##
#...#..#...#..#
#...#..#......#
#...#..#...#..#
###.####.######
#...#..#......#
#......#...#.G#
###############
)"},
      {"SixteenRooms2", R"(###############
#..........#.G#
#...#..#...#..#
#...#..#......#
#.###.######.##
#......#......#
#...#......#..#
###.#.##.###.##
#..........#..#
#...#..#...#..#
#...#..#......#
###.#.####.##.#
#...#..#...#..#
#^............#
###############
)"},
      {"Labyrinth", R"(###############
#......#......#
#.#########.#.#
#.#....#....#.#
#.#.#######.#.#
#.#.#.....#.#.#
#.#.#.###.#.#.#
#.#.#.#G#.#.#.#
#.#.#.#.#.#.#.#
#.#.#.......#.#
#.#.#######.#.#
#.#.........#.#
#.###########.#
#^............#
###############
)"},
      {"Labyrinth2", R"(###############
#>.....#......#
#.###########.#
#.#....#....#.#
#.#.#######.#.#
#.#.#.....#.#.#
#.#.#.###.#.#.#
#.#.#..G#.#.#.#
#.#.#.###.#.#.#
#.#.#.....#.#.#
#.#.#.#####.#.#
#.#...........#
#.###########.#
#.............#
###############
)"},
      {"StandardMaze", R"(###############
#.......#....G#
#######.#.#.###
#.#...#.#.#...#
#.#.#.#.#.###.#
#...#...#...#.#
#.###########.#
#.#...#.......#
#.#.#.###.###.#
#.#.#.#...#.#.#
#.#.#.#.###.#.#
#...#.#.#.#...#
#####.#.#.#.###
#^......#.....#
###############
)"},
      {"StandardMaze2", R"(###############
#>..#.........#
###.#.#.#####.#
#.#.#.#.......#
#.#.#.#####.#.#
#...........#.#
#.###.#.#.###.#
#.....#.#...#.#
#.###.#.###.#.#
#.#...#...#.#.#
#.#.#####.#.#.#
#.#.....#.#.#.#
#.#####.#.#.#.#
#...........#G#
###############
)"},
      {"StandardMaze3", R"(###############
#.#...........#
#.#.#########.#
#.#.#.....#.#.#
#.#.#.#.#.#.#.#
#...#...#...#.#
#####.#######.#
#>........#..G#
#.#######.#.###
#.#.....#...#.#
#.#.###.###.#.#
#.#.....#.....#
#.#.#.#####.#.#
#...#.......#.#
###############
)"},
      {"SmallCorridor", R"(###############
###############
###############
###############
###############
###############
###############
#>............#
##.###.###.####
##.###.###.####
##.###.###G####
###############
###############
###############
###############
)"},
      {"LargeCorridor", R"(###############
###############
##.###.#####.##
##.###.#####.##
##.###.#####.##
##.###.#####.##
##.###.#####.##
#>............#
####.###.#.####
####.###.#.####
####.###.#.####
####.###.#.####
####.###.#G####
###############
###############
)"},
      {"FourRooms", R"(###############
#......#......#
#.v....#......#
#.............#
#......#......#
#......#......#
#......#......#
###.#######.###
#......#......#
#......#......#
#.............#
#......#......#
#......#....G.#
#......#......#
###############
)"},
  };
  return table;
}

}  // namespace

const std::vector<NamedLevel>& ShippedLevels() { return Table(); }

std::vector<std::string> ShippedLevelNames() {
  std::vector<std::string> names;
  for (const auto& l : Table()) names.emplace_back(l.name);
  return names;
}

MazeLevel ShippedLevel(std::string_view name) {
  for (const auto& l : Table()) {
    if (l.name == name) return DecodeLevel(l.text);
  }
  std::string known;
  for (const auto& l : Table()) {
    known += (known.empty() ? "" : ", ") + std::string(l.name);
  }
  throw ConfigError("unknown level '" + std::string(name) +
                    "' (known: " + known + ")");
}

}  // namespace ued::amaze
