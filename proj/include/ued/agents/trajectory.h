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
#include <span>
#include <vector>

#include "ued/agents/params.h"
#include "ued/agents/policy.h"

namespace ued::agents {

/// Rollout storage, time-major: entry (t, l) lives at index t * lanes + l.
///
/// resets[t, l] = 1 means the lane's hidden state was zeroed before step t
/// (the previous step ended an episode). dones[t, l] = 1 means step t ended
/// an episode; GAE stops bootstrapping there.
struct TrajectoryBatch {
  int steps = 0;
  int lanes = 0;
  int cells = 0;    // tile codes per observation
  int aux_dim = 0;  // aux floats per observation

  std::vector<std::uint8_t> tiles;
  AlignedVector<float> aux;  // mapped into Eigen, so kept aligned
  std::vector<std::uint8_t> resets;
  std::vector<int> actions;
  std::vector<float> log_probs;
  std::vector<float> values;
  std::vector<float> rewards;
  std::vector<std::uint8_t> dones;
  std::vector<std::uint8_t> successes;

  RowMat<float> initial_hidden;  // lanes x H
  std::vector<float> last_values;  // bootstrap V(s_T), one per lane

  int size() const { return steps * lanes; }
  int index(int t, int l) const { return t * lanes + l; }

  void allocate(int steps, int lanes, int cells, int aux_dim, int hidden);

  SequenceView sequence() const {
    return SequenceView{steps, lanes, tiles, aux, resets};
  }
};

/// Copies lanes `which` (in that order) into a new batch.
TrajectoryBatch SliceLanes(const TrajectoryBatch& traj, std::span<const int> which);

/// Gathers the same lanes out of a [T, L] per-step array.
std::vector<float> SliceLaneValues(std::span<const float> values, int steps,
                                   int lanes, std::span<const int> which);

/// Lane-wise concatenation; all parts must have the same shape per lane.
TrajectoryBatch ConcatLanes(std::span<const TrajectoryBatch> parts);

/// Per-lane episode summary over one rollout.
struct LaneEpisodes {
  int completed = 0;
  int solved = 0;
  double return_sum = 0.0;  // undiscounted, completed episodes only
  double max_return = 0.0;
  double max_discounted_return = 0.0;

  double mean_return() const { return completed ? return_sum / completed : 0.0; }
};

std::vector<LaneEpisodes> SummarizeEpisodes(const TrajectoryBatch& traj,
                                            double gamma);

}  // namespace ued::agents
