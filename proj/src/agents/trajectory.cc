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

#include "ued/agents/trajectory.h"

#include <algorithm>
#include <cmath>

#include "ued/common/errors.h"

namespace ued::agents {

void TrajectoryBatch::allocate(int t, int l, int c, int a, int hidden) {
  steps = t;
  lanes = l;
  cells = c;
  aux_dim = a;
  const std::size_t n = static_cast<std::size_t>(t) * l;
  tiles.assign(n * c, 0);
  aux.assign(n * a, 0.0f);
  resets.assign(n, 0);
  actions.assign(n, 0);
  log_probs.assign(n, 0.0f);
  values.assign(n, 0.0f);
  rewards.assign(n, 0.0f);
  dones.assign(n, 0);
  successes.assign(n, 0);
  initial_hidden = RowMat<float>::Zero(l, hidden);
  last_values.assign(l, 0.0f);
}

namespace {

template <class Vec>
void CopyLane(const Vec& src, int src_lanes, int src_lane,
              Vec& dst, int dst_lanes, int dst_lane, int steps,
              int width) {
  for (int t = 0; t < steps; ++t) {
    const auto from = (static_cast<std::size_t>(t) * src_lanes + src_lane) * width;
    const auto to = (static_cast<std::size_t>(t) * dst_lanes + dst_lane) * width;
    std::copy_n(src.begin() + from, width, dst.begin() + to);
  }
}

void CopyLaneAll(const TrajectoryBatch& src, int sl, TrajectoryBatch& dst,
                 int dl) {
  const int t = src.steps;
  CopyLane(src.tiles, src.lanes, sl, dst.tiles, dst.lanes, dl, t, src.cells);
  CopyLane(src.aux, src.lanes, sl, dst.aux, dst.lanes, dl, t, src.aux_dim);
  CopyLane(src.resets, src.lanes, sl, dst.resets, dst.lanes, dl, t, 1);
  CopyLane(src.actions, src.lanes, sl, dst.actions, dst.lanes, dl, t, 1);
  CopyLane(src.log_probs, src.lanes, sl, dst.log_probs, dst.lanes, dl, t, 1);
  CopyLane(src.values, src.lanes, sl, dst.values, dst.lanes, dl, t, 1);
  CopyLane(src.rewards, src.lanes, sl, dst.rewards, dst.lanes, dl, t, 1);
  CopyLane(src.dones, src.lanes, sl, dst.dones, dst.lanes, dl, t, 1);
  CopyLane(src.successes, src.lanes, sl, dst.successes, dst.lanes, dl, t, 1);
  dst.initial_hidden.row(dl) = src.initial_hidden.row(sl);
  dst.last_values[dl] = src.last_values[sl];
}

}  // namespace

TrajectoryBatch SliceLanes(const TrajectoryBatch& traj,
                           std::span<const int> which) {
  TrajectoryBatch out;
  out.allocate(traj.steps, static_cast<int>(which.size()), traj.cells,
               traj.aux_dim, static_cast<int>(traj.initial_hidden.cols()));
  for (std::size_t i = 0; i < which.size(); ++i) {
    if (which[i] < 0 || which[i] >= traj.lanes) {
      throw ShapeError("lane index out of range");
    }
    CopyLaneAll(traj, which[i], out, static_cast<int>(i));
  }
  return out;
}

std::vector<float> SliceLaneValues(std::span<const float> values, int steps,
                                   int lanes, std::span<const int> which) {
  const int k = static_cast<int>(which.size());
  std::vector<float> out(static_cast<std::size_t>(steps) * k);
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < k; ++i) out[t * k + i] = values[t * lanes + which[i]];
  }
  return out;
}

TrajectoryBatch ConcatLanes(std::span<const TrajectoryBatch> parts) {
  if (parts.empty()) throw ShapeError("nothing to concatenate");
  const auto& first = parts.front();
  int lanes = 0;
  for (const auto& p : parts) {
    if (p.steps != first.steps || p.cells != first.cells ||
        p.aux_dim != first.aux_dim ||
        p.initial_hidden.cols() != first.initial_hidden.cols()) {
      throw ShapeError("trajectory parts disagree in shape");
    }
    lanes += p.lanes;
  }
  TrajectoryBatch out;
  out.allocate(first.steps, lanes, first.cells, first.aux_dim,
               static_cast<int>(first.initial_hidden.cols()));
  int dl = 0;
  for (const auto& p : parts) {
    for (int l = 0; l < p.lanes; ++l) CopyLaneAll(p, l, out, dl++);
  }
  return out;
}

std::vector<LaneEpisodes> SummarizeEpisodes(const TrajectoryBatch& traj,
                                            double gamma) {
  std::vector<LaneEpisodes> out(traj.lanes);
  for (int l = 0; l < traj.lanes; ++l) {
    double ret = 0.0;
    double disc = 0.0;
    double scale = 1.0;
    bool any = false;
    for (int t = 0; t < traj.steps; ++t) {
      const int i = traj.index(t, l);
      ret += traj.rewards[i];
      disc += scale * traj.rewards[i];
      scale *= gamma;
      if (!traj.dones[i]) continue;
      auto& e = out[l];
      e.completed++;
      e.solved += traj.successes[i];
      e.return_sum += ret;
      e.max_return = any ? std::max(e.max_return, ret) : ret;
      e.max_discounted_return =
          any ? std::max(e.max_discounted_return, disc) : disc;
      any = true;
      ret = disc = 0.0;
      scale = 1.0;
    }
  }
  return out;
}

}  // namespace ued::agents
