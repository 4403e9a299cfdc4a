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
#include "ued/amaze/teacher.h"
#include "ued/common/errors.h"

namespace ued::amaze {

namespace {

StaticParams SmallParams(int budget) {
  StaticParams p;
  p.height = p.width = 7;  // 5x5 interior, actions 0..24
  p.wall_budget = budget;
  return p;
}

}  // namespace

TEST_CASE("duplicate wall placement is a no-op step") {
  StaticParams p = SmallParams(2);
  TeacherState s = InitialTeacherState(p);
  s = TeacherStep(s, 6, p);  // (2,2)
  s = TeacherStep(s, 6, p);
  CHECK(s.phase == TeacherPhase::kPlacingGoal);
  CHECK(s.n_placed == 2);
  s = TeacherStep(s, 24, p);  // goal (5,5)
  s = TeacherStep(s, 0, p);   // agent (1,1)
  MazeLevel l = DecodeTeacherLevel(s);
  CHECK(l.walls.interior_wall_count() == 1);
  CHECK(l.walls.wall(Cell{2, 2}));
  CHECK(l.goal_pos == Cell{5, 5});
  CHECK(l.agent_pos == Cell{1, 1});
  CHECK_THROWS_AS(TeacherStep(s, 0, p), ContractViolation);
}

TEST_CASE("goal on a wall clears it; agent slides off walls and goal") {
  StaticParams p = SmallParams(1);
  TeacherState s = InitialTeacherState(p);
  s = TeacherStep(s, 0, p);  // wall at (1,1)
  s = TeacherStep(s, 0, p);  // goal at (1,1)
  CHECK_FALSE(s.partial_walls.wall(Cell{1, 1}));
  CHECK(*s.goal_pos == Cell{1, 1});
  s = TeacherStep(s, 0, p);  // agent on goal -> next free cell (1,2)
  CHECK(*s.agent_pos == Cell{1, 2});
  CHECK_FALSE(LevelViolation(DecodeTeacherLevel(s)).has_value());
}

TEST_CASE("agent scan wraps around to the first interior cell") {
  StaticParams p = SmallParams(1);
  TeacherState s = InitialTeacherState(p);
  s = TeacherStep(s, 23, p);  // wall (5,4)
  s = TeacherStep(s, 24, p);  // goal (5,5)
  s = TeacherStep(s, 23, p);  // agent on wall -> skips goal -> wraps to (1,1)
  CHECK(*s.agent_pos == Cell{1, 1});
}

TEST_CASE("teacher observation encoding") {
  StaticParams p = SmallParams(3);
  TeacherState s = InitialTeacherState(p);
  TeacherObservation o = TeacherObserve(s, p);
  CHECK(DecodeTeacherPhase(o) == TeacherPhase::kPlacingWalls);
  CHECK(o.n_placed == 0);
  int interior_walls = 0;
  for (int r = 1; r < 6; ++r) {
    for (int c = 1; c < 6; ++c) interior_walls += o.grid[r * 7 + c] != kTeacherEmpty;
  }
  CHECK(interior_walls == 0);

  Rng rng(4);
  for (int k = 1; k <= 5; ++k) {
    s = TeacherStep(s, static_cast<int>(rng.uniform_index(25)), p);
    o = TeacherObserve(s, p);
    CHECK(DecodeTeacherPhase(o) == s.phase);
    if (s.phase == TeacherPhase::kPlacingWalls) CHECK(o.n_placed == k);
  }
  CHECK(s.phase == TeacherPhase::kDone);
  CHECK(o.grid[s.partial_walls.index(*s.goal_pos)] == kTeacherGoal);
  CHECK(o.grid[s.partial_walls.index(*s.agent_pos)] == kTeacherAgent);
}

TEST_CASE("design sequences of length budget+2 always give valid levels") {
  StaticParams p;  // 13x13 budget 60
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    TeacherState s = InitialTeacherState(p);
    Rng a = rng.split(trial);
    for (int t = 0; t < TeacherEpisodeLength(p); ++t) {
      // Bias toward a few cells so collisions with walls/goal are common.
      const int n = (trial % 2) ? 6 : TeacherNumActions(p);
      s = TeacherStep(s, static_cast<int>(a.uniform_index(n)), p);
    }
    REQUIRE(s.phase == TeacherPhase::kDone);
    REQUIRE_FALSE(LevelViolation(DecodeTeacherLevel(s)).has_value());
  }
}

}  // namespace ued::amaze
