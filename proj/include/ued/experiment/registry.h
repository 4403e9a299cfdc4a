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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ued/agents/policy.h"
#include "ued/common/errors.h"
#include "ued/core/static_params.h"
#include "ued/runners/runner.h"

namespace ued::experiment {

/// Write-once id -> value table. Lookups of unknown ids list the known ones.
template <class T>
class Registry {
 public:
  explicit Registry(std::string kind) : kind_(std::move(kind)) {}

  void add(const std::string& id, T value) {
    if (!table_.emplace(id, std::move(value)).second) {
      throw ConfigError(kind_ + " '" + id + "' is already registered");
    }
  }
  bool contains(const std::string& id) const { return table_.count(id) > 0; }
  const T& get(const std::string& id) const {
    auto it = table_.find(id);
    if (it == table_.end()) {
      throw ConfigError("unknown " + kind_ + " '" + id + "'; known: " + known());
    }
    return it->second;
  }
  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& [id, v] : table_) out.push_back(id);
    return out;
  }
  std::string known() const {
    std::string s;
    for (const auto& [id, v] : table_) s += (s.empty() ? "" : ", ") + id;
    return s;
  }

 private:
  std::string kind_;
  std::map<std::string, T> table_;
};

struct EnvEntry {
  StaticParams defaults;
  std::string default_model;
};

struct ModelEntry {
  std::function<agents::NetSpec(const StaticParams&, const runners::ModelConfig&)> student;
};

/// A runner id fixes the runner kind and seeds its hyperparameter defaults.
struct RunnerEntry {
  std::function<void(runners::RunnerConfig&)> apply_defaults;
};

struct Registries {
  Registry<EnvEntry> envs{"env"};
  Registry<ModelEntry> models{"model"};
  Registry<RunnerEntry> runners{"runner"};

  std::string default_model(const std::string& env_id) const {
    return envs.get(env_id).default_model;
  }
};

/// Registries holding every built-in component.
Registries BuiltinRegistries();
const Registries& DefaultRegistries();

}  // namespace ued::experiment
