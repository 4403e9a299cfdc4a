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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ued/core/static_params.h"

namespace ued::experiment {

struct SpsRow {
  int batch = 0;
  std::int64_t env_steps = 0;
  double seconds = 0.0;

  double sps() const { return seconds > 0 ? env_steps / seconds : 0.0; }
  // Amortized wall time per single-environment step.
  double ns_per_env_step() const { return env_steps ? seconds * 1e9 / env_steps : 0.0; }
};

struct SpsOptions {
  int n_steps = 1000;  // batched steps per batch size
  int warmup_steps = 50;
  int threads = 0;     // 0: hardware concurrency
  std::uint64_t seed = 0;
};

/// Random-action stepping throughput of the maze environment, with
/// auto-reset, for each batch size. Lanes are split across worker threads.
std::vector<SpsRow> BenchmarkSps(const StaticParams& params, std::span<const int> batches,
                                 const SpsOptions& opt);

std::string FormatSpsTable(std::span<const SpsRow> rows);
void WriteSpsCsv(const std::filesystem::path& path, std::span<const SpsRow> rows);

}  // namespace ued::experiment
