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

#include <filesystem>
#include <string>
#include <string_view>

#include "ued/amaze/level.h"
#include "ued/core/static_params.h"

namespace ued::amaze {

// Text grid format, one row per line:
//   '#' wall   '.' empty   'G' goal   '^' '>' 'v' '<' agent facing N/E/S/W
std::string EncodeLevel(const MazeLevel& level);

/// Dimensions are taken from the text. Malformed input (bad characters,
/// ragged rows, an open border, a missing or repeated agent/goal) throws
/// ParseError with a 1-based line/col.
MazeLevel DecodeLevel(std::string_view text);

/// As above, but also requires the grid to match params.height × width.
MazeLevel DecodeLevel(std::string_view text, const StaticParams& params);

// Reads and decodes a level file; errors name the file.
MazeLevel LoadLevelFile(const std::filesystem::path& path);
void SaveLevelFile(const std::filesystem::path& path, const MazeLevel& level);

}  // namespace ued::amaze
