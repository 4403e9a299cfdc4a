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

#include <cmath>

#include "doctest.h"
#include "ued/amaze/apsp.h"
#include "ued/amaze/maze.h"
#include "ued/amaze/metrics.h"
#include "ued/amaze/mutate.h"
#include "ued/common/errors.h"

namespace ued::amaze {
namespace {

MazeLevel OpenRoom(int side, Cell agent, Cell goal, Dir dir = Dir::kNorth) {
  MazeLevel l;
  l.walls = WallGrid::Bordered(side, side);
  l.agent_pos = agent;
  l.goal_pos = goal;
  l.agent_dir = dir;
  return l;
}

// Rotates a square level 90 degrees clockwise, agent heading included.
MazeLevel RotateClockwise(const MazeLevel& l) {
  const int n = l.height();
  auto rot = [n](Cell c) { return Cell{c.col, n - 1 - c.row}; };
  MazeLevel out;
  out.walls = WallGrid(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) out.walls.set(rot({r, c}), l.walls.wall(Cell{r, c}));
  }
  out.agent_pos = rot(l.agent_pos);
  out.goal_pos = rot(l.goal_pos);
  out.agent_dir = TurnRight(l.agent_dir);
  return out;
}

}  // namespace

TEST_CASE("forward into a wall is a no-op that still advances time") {
  MazeLevel l = OpenRoom(13, {1, 1}, {5, 5}, Dir::kNorth);
  EnvState s = StateFromLevel(l);
  EnvState n = Transition(s, kForward);
  CHECK(n.agent_pos == s.agent_pos);
  CHECK(n.time == 1);

  l.walls.set(Cell{4, 4}, true);
  s = StateFromLevel(l);
  s.agent_pos = {5, 4};
  n = Transition(s, kForward);
  CHECK(n.agent_pos == Cell{5, 4});
}

TEST_CASE("four left turns restore the heading") {
  EnvState s = StateFromLevel(OpenRoom(13, {3, 3}, {5, 5}, Dir::kEast));
  EnvState n = s;
  for (int i = 0; i < 4; ++i) n = Transition(n, kTurnLeft);
  CHECK(n.agent_dir == Dir::kEast);
  CHECK(Transition(s, kTurnLeft).agent_dir == Dir::kNorth);
  CHECK(Transition(s, kTurnRight).agent_dir == Dir::kSouth);
}

TEST_CASE("random walks never enter walls") {
  StaticParams p;
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    EnvState s = StateFromLevel(SampleRandomLevel(rng.split(trial), p));
    Rng acts = rng.split(trial).fold_in(1);
    for (int t = 0; t < 200; ++t) {
      s = Transition(s, static_cast<int>(acts.uniform_index(3)));
      REQUIRE_FALSE(s.level.walls.wall(s.agent_pos));
      REQUIRE_FALSE(s.level.walls.is_border(s.agent_pos));
    }
  }
}

TEST_CASE("reward follows 1 - 0.9 t/T") {
  StaticParams p;  // T = 250
  EnvState s = StateFromLevel(OpenRoom(13, {3, 3}, {3, 3 + 1}));
  s.agent_pos = s.level.goal_pos;
  s.time = 250;
  CHECK(ComputeReward(s, p) == doctest::Approx(0.1));
  s.time = 25;
  CHECK(ComputeReward(s, p) == doctest::Approx(0.91));
  s.agent_pos = {5, 5};
  CHECK(ComputeReward(s, p) == 0.0f);
}

TEST_CASE("observation geometry") {
  StaticParams p;
  SUBCASE("facing the border at distance one") {
    EnvState s = StateFromLevel(OpenRoom(13, {1, 6}, {8, 8}, Dir::kNorth));
    Observation o = Observe(s, p);
    // Row 4 is the agent row, row 3 is the wall row, rows 0-2 lie outside.
    for (int c = 0; c < 5; ++c) {
      CHECK(o.at(3, c) == kWall);
      for (int r = 0; r < 3; ++r) CHECK(o.at(r, c) == kOutOfBounds);
    }
  }
  SUBCASE("goal straight ahead appears in the centre column") {
    EnvState s = StateFromLevel(OpenRoom(13, {6, 6}, {4, 6}, Dir::kNorth));
    CHECK(Observe(s, p).at(2, 2) == kGoal);
    s.agent_dir = Dir::kEast;  // goal now on the agent's left
    CHECK(Observe(s, p).at(4, 0) == kGoal);
  }
  SUBCASE("goal outside the window is not visible") {
    EnvState s = StateFromLevel(OpenRoom(13, {10, 10}, {1, 1}, Dir::kNorth));
    Observation o = Observe(s, p);
    for (int i = 0; i < 25; ++i) CHECK(o.view[i] != kGoal);
  }
  SUBCASE("observations commute with global rotations") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
      MazeLevel l = SampleRandomLevel(rng.split(i), p);
      MazeLevel rot = RotateClockwise(l);
      Observation a = Observe(StateFromLevel(l), p);
      Observation b = Observe(StateFromLevel(rot), p);
      REQUIRE(a.view == b.view);
    }
  }
}

TEST_CASE("random level sampling") {
  SUBCASE("wall count is uniform over [0, budget]") {
    StaticParams p;  // 13x13, budget 60
    Rng rng(0);
    const int n = 10000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      MazeLevel l = SampleRandomLevel(rng.split(i), p);
      REQUIRE_FALSE(LevelViolation(l).has_value());
      sum += l.walls.interior_wall_count();
    }
    const double mean = sum / n;
    const double var = (61.0 * 61.0 - 1.0) / 12.0;
    CHECK(std::abs(mean - 30.0) < 3.0 * std::sqrt(var / n));
  }
  SUBCASE("zero budget") {
    StaticParams p;
    p.wall_budget = 0;
    MazeLevel l = SampleRandomLevel(Rng(1), p);
    CHECK(l.walls.interior_wall_count() == 0);
    CHECK(l.agent_pos != l.goal_pos);
  }
}

TEST_CASE("env metrics") {
  SUBCASE("open room corner to corner") {
    MazeLevel l = OpenRoom(13, {1, 1}, {11, 11});
    EnvMetrics m = ComputeEnvMetrics(l);
    CHECK(m.shortest_path_length == BfsApsp(l.walls).distance({1, 1}, {11, 11}));
    CHECK(m.shortest_path_length == 20);
    CHECK(m.solvable);
    CHECK(m.n_walls == 0);
    CHECK(m.passable_ratio == 1.0);
  }
  SUBCASE("walled-off goal") {
    MazeLevel l = OpenRoom(13, {1, 1}, {11, 11});
    l.walls.set(Cell{10, 11}, true);
    l.walls.set(Cell{11, 10}, true);
    EnvMetrics m = ComputeEnvMetrics(l);
    CHECK_FALSE(m.solvable);
    CHECK(m.shortest_path_length == 0);
    CHECK(m.n_walls == 2);
  }
}

TEST_CASE("level mutation") {
  StaticParams p;
  MutationConfig cfg;

  SUBCASE("n_mutations must be positive") {
    cfg.n_mutations = 0;
    CHECK_THROWS_AS(MutateLevel(Rng(0), OpenRoom(13, {1, 1}, {5, 5}), cfg, p),
                    ContractViolation);
  }
  SUBCASE("single edit on an empty room") {
    cfg.n_mutations = 1;
    MazeLevel parent = OpenRoom(13, {1, 1}, {5, 5});
    int walls_added = 0;
    int goal_moves = 0;
    for (int i = 0; i < 400; ++i) {
      MazeLevel child = MutateLevel(Rng(i), parent, cfg, p);
      const int added = child.walls.interior_wall_count();
      const bool moved = child.goal_pos != parent.goal_pos;
      REQUIRE(added + static_cast<int>(moved) == 1);
      walls_added += added;
      goal_moves += moved;
    }
    CHECK(goal_moves > 0);
    CHECK(walls_added > goal_moves);
  }
  SUBCASE("property sweep") {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
      cfg.n_mutations = 1 + static_cast<int>(rng.split(i).uniform_index(20));
      cfg.goal_move_prob = (i % 3 == 0) ? 0.5 : 0.05;
      MazeLevel parent = SampleRandomLevel(rng.split(i).fold_in(1), p);
      MazeLevel child = MutateLevel(rng.split(i).fold_in(2), parent, cfg, p);
      REQUIRE_FALSE(LevelViolation(child).has_value());
      REQUIRE(child.agent_pos == parent.agent_pos);
      REQUIRE(child.agent_dir == parent.agent_dir);
      REQUIRE(CellDiff(parent, child) <= cfg.n_mutations + 1);
    }
  }
}

}  // namespace ued::amaze
