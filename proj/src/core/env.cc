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

#include "ued/core/env.h"

#include "ued/common/errors.h"

namespace ued {

void ValidateBatchShape(const BatchShape& shape) {
  if (shape.n_agents < 1 || shape.n_evals < 1 || shape.n_envs < 1) {
    throw ShapeError("batch shape dimensions must all be >= 1");
  }
}

}  // namespace ued
