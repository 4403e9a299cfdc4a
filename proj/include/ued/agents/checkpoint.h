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
#include <vector>

#include "json.hpp"
#include "ued/agents/agent.h"
#include "ued/agents/params.h"

namespace ued::agents {

/// A named 2-D float32 tensor.
struct TensorRecord {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  bool operator==(const TensorRecord&) const = default;
};

/// Self-describing checkpoint: tensors plus a JSON metadata block.
/// The byte layout is documented in docs/checkpoint_format.md.
struct Checkpoint {
  std::vector<TensorRecord> tensors;
  nlohmann::json meta = nlohmann::json::object();

  const TensorRecord* find(const std::string& name) const;
};

void WriteCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint ReadCheckpoint(const std::filesystem::path& path);

std::string SerializeCheckpoint(const Checkpoint& ckpt);
Checkpoint DeserializeCheckpoint(const std::string& bytes);

// Stores every tensor of `params` as "<prefix>/<tensor name>".
void AddParams(Checkpoint& ckpt, const std::string& prefix,
               const ParamSet<float>& params);
// Fills `params` (already laid out) from the matching records.
void LoadParams(const Checkpoint& ckpt, const std::string& prefix,
                ParamSet<float>& params);

// params, Adam moments and the Adam step counter under "<prefix>/...".
void AddAgent(Checkpoint& ckpt, const std::string& prefix, const Agent& agent);
void LoadAgent(const Checkpoint& ckpt, const std::string& prefix, Agent& agent);

}  // namespace ued::agents
