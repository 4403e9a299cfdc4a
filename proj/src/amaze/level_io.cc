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

#include "ued/amaze/level_io.h"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "ued/common/errors.h"

namespace ued::amaze {

namespace {

char AgentChar(Dir d) {
  switch (d) {
    case Dir::kNorth: return '^';
    case Dir::kEast: return '>';
    case Dir::kSouth: return 'v';
    case Dir::kWest: return '<';
  }
  return '^';
}

std::optional<Dir> AgentDir(char ch) {
  switch (ch) {
    case '^': return Dir::kNorth;
    case '>': return Dir::kEast;
    case 'v': return Dir::kSouth;
    case '<': return Dir::kWest;
    default: return std::nullopt;
  }
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // A trailing newline leaves one empty line behind.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

std::string EncodeLevel(const MazeLevel& level) {
  std::string out;
  out.reserve((level.width() + 1) * level.height());
  for (int r = 0; r < level.height(); ++r) {
    for (int c = 0; c < level.width(); ++c) {
      const Cell cell{r, c};
      if (level.walls.wall(cell)) {
        out.push_back('#');
      } else if (cell == level.agent_pos) {
        out.push_back(AgentChar(level.agent_dir));
      } else if (cell == level.goal_pos) {
        out.push_back('G');
      } else {
        out.push_back('.');
      }
    }
    out.push_back('\n');
  }
  return out;
}

MazeLevel DecodeLevel(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty()) throw ParseError("empty level text", 0, 0);
  const int height = static_cast<int>(lines.size());
  const int width = static_cast<int>(lines.front().size());
  if (height < 3 || width < 3 || height > kMaxGridSide ||
      width > kMaxGridSide) {
    throw ParseError("grid must be between 3 and " +
                         std::to_string(kMaxGridSide) + " cells per side",
                     1, 1);
  }

  MazeLevel level;
  level.walls = WallGrid(height, width);
  std::optional<Cell> agent;
  std::optional<Cell> goal;
  for (int r = 0; r < height; ++r) {
    const std::string_view line = lines[r];
    if (static_cast<int>(line.size()) != width) {
      throw ParseError("row has " + std::to_string(line.size()) +
                           " cells, expected " + std::to_string(width),
                       r + 1, static_cast<int>(std::min<std::size_t>(
                                  line.size(), width)) + 1);
    }
    for (int c = 0; c < width; ++c) {
      const char ch = line[c];
      const Cell cell{r, c};
      const bool border = level.walls.is_border(cell);
      if (ch == '#') {
        level.walls.set(cell, true);
        continue;
      }
      if (border) throw ParseError("border cell must be '#'", r + 1, c + 1);
      if (ch == '.') continue;
      if (ch == 'G') {
        if (goal) throw ParseError("duplicate goal", r + 1, c + 1);
        goal = cell;
      } else if (auto d = AgentDir(ch)) {
        if (agent) throw ParseError("duplicate agent", r + 1, c + 1);
        agent = cell;
        level.agent_dir = *d;
      } else {
        throw ParseError(std::string("illegal character '") + ch + "'", r + 1,
                         c + 1);
      }
    }
  }
  if (!goal) throw ParseError("level has no goal 'G'", 0, 0);
  if (!agent) throw ParseError("level has no agent", 0, 0);
  level.goal_pos = *goal;
  level.agent_pos = *agent;
  return level;
}

MazeLevel DecodeLevel(std::string_view text, const StaticParams& params) {
  MazeLevel level = DecodeLevel(text);
  if (level.height() != params.height) {
    throw ParseError("expected " + std::to_string(params.height) +
                         " rows, found " + std::to_string(level.height()),
                     level.height(), 1);
  }
  if (level.width() != params.width) {
    throw ParseError("expected " + std::to_string(params.width) +
                         " columns, found " + std::to_string(level.width()),
                     1, level.width());
  }
  return level;
}

MazeLevel LoadLevelFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open level file " + path.string(), 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return DecodeLevel(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0, 0);
  }
}

void SaveLevelFile(const std::filesystem::path& path, const MazeLevel& level) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << EncodeLevel(level);
}

}  // namespace ued::amaze
