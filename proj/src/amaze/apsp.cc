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

#include "ued/amaze/apsp.h"

#include <Eigen/Dense>
#include <algorithm>
#include <deque>

namespace ued::amaze {

namespace {

constexpr Cell kNeighbours[4] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};

using Mat = Eigen::MatrixXf;

// All-pairs distances of a connected unweighted graph from its 0/1 adjacency
// matrix. Entries stay small integers, so float arithmetic is exact.
Mat Seidel(const Mat& adj) {
  const Eigen::Index n = adj.rows();
  bool complete = true;
  for (Eigen::Index i = 0; i < n && complete; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && adj(i, j) == 0.0f) {
        complete = false;
        break;
      }
    }
  }
  if (complete) return adj;

  const Mat paths2 = adj * adj;
  Mat squared(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      squared(i, j) =
          (i != j && (adj(i, j) > 0.0f || paths2(i, j) > 0.0f)) ? 1.0f : 0.0f;
    }
  }
  const Mat half = Seidel(squared);
  const Mat x = half * adj;
  const Eigen::RowVectorXf degree = adj.colwise().sum();
  Mat dist(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const float t = half(i, j);
      dist(i, j) = 2.0f * t - (x(i, j) < t * degree(j) ? 1.0f : 0.0f);
    }
  }
  return dist;
}

}  // namespace

DistanceMatrix::DistanceMatrix(const WallGrid& walls) : width_(walls.width()) {
  node_of_cell_.assign(walls.cells(), -1);
  for (int i = 0; i < walls.cells(); ++i) {
    if (!walls.wall(i)) {
      node_of_cell_[i] = static_cast<int>(cells_.size());
      cells_.push_back(walls.cell(i));
    }
  }
  dist_.assign(cells_.size() * cells_.size(), kUnreachable);
}

std::vector<int> ComponentLabels(const WallGrid& walls,
                                 const DistanceMatrix& layout) {
  const int n = layout.num_nodes();
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const Cell c = layout.cell(i);
      for (const Cell d : kNeighbours) {
        const Cell nb{c.row + d.row, c.col + d.col};
        if (!walls.in_bounds(nb) || walls.wall(nb)) continue;
        const int j = layout.node(nb);
        const int m = std::min(label[i], label[j]);
        if (label[i] != m || label[j] != m) {
          label[i] = label[j] = m;
          changed = true;
        }
      }
    }
  }
  return label;
}

DistanceMatrix SeidelApsp(const WallGrid& walls) {
  DistanceMatrix out(walls);
  const int n = out.num_nodes();
  const std::vector<int> label = ComponentLabels(walls, out);

  std::vector<int> members;
  std::vector<int> local(n, -1);
  for (int root = 0; root < n; ++root) {
    if (label[root] != root) continue;
    members.clear();
    for (int i = root; i < n; ++i) {
      if (label[i] == root) {
        local[i] = static_cast<int>(members.size());
        members.push_back(i);
      }
    }
    const int m = static_cast<int>(members.size());
    Mat adj = Mat::Zero(m, m);
    for (int a = 0; a < m; ++a) {
      const Cell c = out.cell(members[a]);
      for (const Cell d : kNeighbours) {
        const Cell nb{c.row + d.row, c.col + d.col};
        if (!walls.in_bounds(nb) || walls.wall(nb)) continue;
        adj(a, local[out.node(nb)]) = 1.0f;
      }
    }
    const Mat dist = Seidel(adj);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        out.at(members[a], members[b]) = static_cast<int>(dist(a, b));
      }
    }
  }
  return out;
}

DistanceMatrix BfsApsp(const WallGrid& walls) {
  DistanceMatrix out(walls);
  const int n = out.num_nodes();
  std::deque<int> queue;
  for (int src = 0; src < n; ++src) {
    out.at(src, src) = 0;
    queue.assign(1, src);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      const Cell c = out.cell(u);
      for (const Cell d : kNeighbours) {
        const Cell nb{c.row + d.row, c.col + d.col};
        if (!walls.in_bounds(nb) || walls.wall(nb)) continue;
        const int v = out.node(nb);
        if (out.at(src, v) != DistanceMatrix::kUnreachable) continue;
        out.at(src, v) = out.at(src, u) + 1;
        queue.push_back(v);
      }
    }
  }
  return out;
}

}  // namespace ued::amaze
