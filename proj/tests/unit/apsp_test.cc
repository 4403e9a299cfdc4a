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

#include "doctest.h"
#include "ued/amaze/apsp.h"
#include "ued/amaze/maze.h"

namespace ued::amaze {

TEST_CASE("single free cell") {
  WallGrid g = WallGrid::Bordered(3, 3);
  for (auto* f : {&SeidelApsp, &BfsApsp}) {
    DistanceMatrix d = f(g);
    REQUIRE(d.num_nodes() == 1);
    CHECK(d.at(0, 0) == 0);
  }
}

TEST_CASE("3x3 open interior: opposite corners are 4 apart") {
  WallGrid g = WallGrid::Bordered(5, 5);
  for (auto* f : {&SeidelApsp, &BfsApsp}) {
    DistanceMatrix d = f(g);
    CHECK(d.distance({1, 1}, {3, 3}) == 4);
    CHECK(d.distance({1, 3}, {3, 1}) == 4);
    CHECK(d.distance({2, 2}, {2, 2}) == 0);
  }
}

TEST_CASE("disconnected components are unreachable from each other") {
  WallGrid g = WallGrid::Bordered(7, 7);
  for (int r = 1; r < 6; ++r) g.set(Cell{r, 3}, true);
  g.set(Cell{1, 1}, false);
  // Isolate (5,5) completely.
  g.set(Cell{4, 5}, true);
  g.set(Cell{5, 4}, true);
  DistanceMatrix s = SeidelApsp(g);
  CHECK(s == BfsApsp(g));
  CHECK(s.distance({1, 1}, {1, 5}) == DistanceMatrix::kUnreachable);
  CHECK(s.distance({5, 5}, {5, 5}) == 0);
  CHECK(s.distance({5, 5}, {1, 5}) == DistanceMatrix::kUnreachable);
  CHECK(s.distance({1, 1}, {5, 2}) == 5);
}

TEST_CASE("Seidel matches BFS on random grids up to 15x15") {
  Rng rng(31337);
  for (int i = 0; i < 300; ++i) {
    StaticParams p;
    p.height = 5 + static_cast<int>(rng.split(i).uniform_index(11));
    p.width = 5 + static_cast<int>(rng.split(i).fold_in(1).uniform_index(11));
    p.wall_budget = p.interior_cells() - 2;
    MazeLevel l = SampleRandomLevel(rng.split(i).fold_in(2), p);
    REQUIRE(SeidelApsp(l.walls) == BfsApsp(l.walls));
  }
}

}  // namespace ued::amaze
