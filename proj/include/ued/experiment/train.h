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
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ued/agents/checkpoint.h"
#include "ued/experiment/config.h"
#include "ued/runners/sdp.h"

namespace ued::experiment {

// Training hit a fault it cannot continue from (a crash checkpoint was saved).
class TrainingFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainOptions {
  bool resume = false;           // continue from <run_dir>/latest when present
  std::ostream* log = nullptr;   // progress lines
  // Stop after this many iterations of the current process without the
  // final checkpoint, as if killed (used by the resume harness).
  std::optional<std::int64_t> stop_after = {};
};

struct TrainResult {
  std::filesystem::path run_dir;
  std::int64_t iteration = 0;
  std::int64_t start_iteration = 0;  // > 0 when resumed
  int eval_records = 0;
  bool completed = false;
};

/// Output root: $UED_OUTPUT_ROOT if set, else ./runs.
std::filesystem::path OutputRoot();
/// Where a config's run goes: output_dir (relative ones under the root),
/// defaulting to <root>/<runner>_s<seed>.
std::filesystem::path RunDirectory(const ExperimentConfig& cfg);

TrainResult Train(const ExperimentConfig& cfg, const std::filesystem::path& run_dir,
                  const TrainOptions& opt = {});

// Checkpoint contents for a sharded runner state.
agents::Checkpoint MakeCheckpoint(const ExperimentConfig& cfg,
                                  const runners::ShardedRunner::State& state);
runners::ShardedRunner::State RestoreState(const agents::Checkpoint& ckpt,
                                           const runners::ShardedRunner& runner,
                                           std::uint64_t seed);

/// Config stored in a checkpoint's metadata.
ExperimentConfig CheckpointConfig(const agents::Checkpoint& ckpt);

/// Path of the checkpoint named by <run_dir>/latest, if any.
std::optional<std::filesystem::path> LatestCheckpoint(const std::filesystem::path& run_dir);

}  // namespace ued::experiment
