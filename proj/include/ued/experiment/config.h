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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ued/experiment/registry.h"
#include "ued/runners/runner.h"

namespace ued::experiment {

struct EvalConfig {
  int interval = 500;           // iterations between evaluations; 0 disables
  int episodes_per_level = 10;
  bool greedy = true;
  // Shipped level names or level file paths; empty means every shipped level.
  std::vector<std::string> levels;
};

struct ExperimentConfig {
  std::string runner = "dr";
  std::string env_id = "amaze";
  std::string model_id;  // empty: the environment's default model
  runners::RunnerConfig run;
  int n_shards = 1;
  std::uint64_t seed = 0;
  std::int64_t num_updates = 30000;  // runner iterations
  int checkpoint_interval = 1000;    // 0: only the final checkpoint
  int log_interval = 10;
  EvalConfig eval;
  std::string output_dir;  // relative paths resolve against the output root
};

/// Resolved config for a runner id with nothing overridden.
nlohmann::json DefaultConfigJson(const std::string& runner_id,
                                 const Registries& reg = DefaultRegistries());

nlohmann::json ToJson(const ExperimentConfig& cfg);

/// Reads a complete config object (as produced by ToJson) and validates it.
ExperimentConfig FromJson(const nlohmann::json& j,
                          const Registries& reg = DefaultRegistries());

/// Throws ConfigError naming the offending key.
void ValidateExperimentConfig(const ExperimentConfig& cfg,
                              const Registries& reg = DefaultRegistries());

/// Dotted paths of every settable leaf, e.g. "ppo.gamma".
std::vector<std::string> ConfigKeys();

struct ConfigSources {
  std::optional<nlohmann::json> file = {};  // parsed config file contents
  // Dotted key / raw string value pairs, applied in order.
  std::vector<std::pair<std::string, std::string>> overrides = {};
};

/// defaults(runner) < file < overrides. The runner id itself may come from
/// either source. Unknown keys and type mismatches raise ConfigError.
ExperimentConfig ResolveConfig(const ConfigSources& src,
                               const Registries& reg = DefaultRegistries());

nlohmann::json LoadConfigFile(const std::filesystem::path& path);

/// Stable content hash of a resolved config (hex), stored in checkpoints.
std::string ConfigHash(const ExperimentConfig& cfg);

}  // namespace ued::experiment
