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

#include "ued/core/static_params.h"

#include "ued/common/errors.h"

namespace ued {

void ValidateStaticParams(const StaticParams& p) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (p.height < 3 || p.width < 3) fail("height and width must be >= 3");
  if (p.height > kMaxGridSide || p.width > kMaxGridSide) {
    fail("height and width must be <= " + std::to_string(kMaxGridSide));
  }
  if (p.agent_view_size < 3 || p.agent_view_size % 2 == 0) {
    fail("agent_view_size must be odd and >= 3");
  }
  if (p.agent_view_size > kMaxViewSize) {
    fail("agent_view_size must be <= " + std::to_string(kMaxViewSize));
  }
  if (p.max_episode_steps < 1) fail("max_episode_steps must be >= 1");
  if (p.wall_budget < 0) fail("wall_budget must be >= 0");
  if (p.wall_budget > p.interior_cells() - 2) {
    fail("wall_budget must leave at least two free interior cells (max " +
         std::to_string(p.interior_cells() - 2) + ")");
  }
}

}  // namespace ued
