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

#include "ued/runners/scoring.h"

#include <algorithm>

#include "ued/common/errors.h"

namespace ued::runners {

double ScorePvl(std::span<const float> advantages) {
  if (advantages.empty()) throw ContractViolation("PVL of an empty slice");
  double sum = 0.0;
  for (float a : advantages) sum += std::max(0.0f, a);
  return sum / static_cast<double>(advantages.size());
}

double ScoreMaxMc(std::span<const float> values, double max_return) {
  if (values.empty()) throw ContractViolation("MaxMC of an empty slice");
  double sum = 0.0;
  for (float v : values) sum += max_return - v;
  return sum / static_cast<double>(values.size());
}

std::vector<LaneScore> ScoreLanes(const agents::TrajectoryBatch& traj,
                                  const agents::GaeResult& gae, ScoreFn fn,
                                  std::span<const double> prior_max_return,
                                  bool discounted_max_return, double gamma) {
  if (static_cast<int>(prior_max_return.size()) != traj.lanes) {
    throw ShapeError("one prior max return per lane expected");
  }
  const auto episodes = agents::SummarizeEpisodes(traj, gamma);
  std::vector<LaneScore> out(traj.lanes);
  std::vector<float> column(traj.steps);
  for (int l = 0; l < traj.lanes; ++l) {
    const auto& e = episodes[l];
    LaneScore& s = out[l];
    s.episodes = e.completed;
    s.solved = e.solved;
    s.mean_return = e.mean_return();
    const double observed = discounted_max_return ? e.max_discounted_return : e.max_return;
    s.max_return = std::max(prior_max_return[l], e.completed ? observed : 0.0);
    if (fn == ScoreFn::kPvl) {
      for (int t = 0; t < traj.steps; ++t) column[t] = gae.advantages[traj.index(t, l)];
      s.score = ScorePvl(column);
    } else {
      for (int t = 0; t < traj.steps; ++t) column[t] = traj.values[traj.index(t, l)];
      s.score = ScoreMaxMc(column, s.max_return);
    }
    s.score = std::max(0.0, s.score);
  }
  return out;
}

}  // namespace ued::runners
