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
#include <limits>
#include <vector>

#include "ued/amaze/level.h"

namespace ued::amaze {

/// Shortest-path distances between the free cells of a grid under
/// 4-connectivity. Nodes are free cells in row-major order.
class DistanceMatrix {
 public:
  static constexpr int kUnreachable = std::numeric_limits<int>::max();

  DistanceMatrix() = default;
  explicit DistanceMatrix(const WallGrid& walls);

  int num_nodes() const { return static_cast<int>(cells_.size()); }
  // -1 for walls.
  int node(Cell c) const { return node_of_cell_[c.row * width_ + c.col]; }
  Cell cell(int node) const { return cells_[node]; }

  int at(int i, int j) const { return dist_[i * num_nodes() + j]; }
  int& at(int i, int j) { return dist_[i * num_nodes() + j]; }

  // Distance between two free cells, kUnreachable if disconnected.
  int distance(Cell a, Cell b) const { return at(node(a), node(b)); }

  bool operator==(const DistanceMatrix&) const = default;

 private:
  int width_ = 0;
  std::vector<Cell> cells_;
  std::vector<int> node_of_cell_;
  std::vector<int> dist_;
};

/// Seidel's recursive-squaring APSP, run per connected component.
DistanceMatrix SeidelApsp(const WallGrid& walls);

/// Breadth-first search from every free cell.
DistanceMatrix BfsApsp(const WallGrid& walls);

// Connected-component label per node (labels are the smallest node index in
// the component), found by iterated min-label propagation.
std::vector<int> ComponentLabels(const WallGrid& walls,
                                 const DistanceMatrix& layout);

}  // namespace ued::amaze
