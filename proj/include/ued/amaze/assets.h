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
#include <string_view>
#include <vector>

#include "ued/amaze/level.h"

namespace ued::amaze {

struct NamedLevel {
  std::string_view name;
  std::string_view text;
};

// Held-out test mazes bundled with the library.
const std::vector<NamedLevel>& ShippedLevels();
std::vector<std::string> ShippedLevelNames();

// Throws ConfigError listing the known names if `name` is not shipped.
MazeLevel ShippedLevel(std::string_view name);

}  // namespace ued::amaze
