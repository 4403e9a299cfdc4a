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
#include "ued/amaze/assets.h"
#include "ued/amaze/level_io.h"
#include "ued/amaze/maze.h"
#include "ued/amaze/metrics.h"
#include "ued/common/errors.h"

namespace ued::amaze {

TEST_CASE("encode/decode round-trips sampled levels") {
  StaticParams p;
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    MazeLevel l = SampleRandomLevel(rng.split(i), p);
    const std::string text = EncodeLevel(l);
    REQUIRE(DecodeLevel(text, p) == l);
    REQUIRE(EncodeLevel(DecodeLevel(text)) == text);
  }
}

TEST_CASE("decode errors carry positions") {
  const std::string ok =
      "#####\n"
      "#>..#\n"
      "#..G#\n"
      "#####\n";
  CHECK_NOTHROW(DecodeLevel(ok));

  SUBCASE("missing goal") {
    CHECK_THROWS_AS(DecodeLevel("#####\n#>..#\n#...#\n#####\n"), ParseError);
  }
  SUBCASE("illegal character") {
    try {
      DecodeLevel("#####\n#>.x#\n#..G#\n#####\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.col() == 4);
    }
  }
  SUBCASE("duplicate agent") {
    try {
      DecodeLevel("#####\n#>.<#\n#..G#\n#####\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.col() == 4);
    }
  }
  SUBCASE("duplicate goal") {
    CHECK_THROWS_AS(DecodeLevel("#####\n#>.G#\n#..G#\n#####\n"), ParseError);
  }
  SUBCASE("ragged row") {
    try {
      DecodeLevel("#####\n#>..#\n#.G#\n#####\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("open border") {
    CHECK_THROWS_AS(DecodeLevel("#####\n.>..#\n#..G#\n#####\n"), ParseError);
  }
  SUBCASE("wrong dimensions for params") {
    StaticParams p;  // 13x13
    CHECK_THROWS_AS(DecodeLevel(ok, p), ParseError);
  }
}

TEST_CASE("shipped levels decode and are solvable") {
  for (const auto& named : ShippedLevels()) {
    CAPTURE(named.name);
    MazeLevel l = DecodeLevel(named.text);
    CHECK_FALSE(LevelViolation(l).has_value());
    CHECK(ComputeEnvMetrics(l).solvable);
  }
  CHECK(ComputeEnvMetrics(ShippedLevel("Labyrinth")).solvable);
  CHECK_NOTHROW(ShippedLevel("SixteenRooms"));
  CHECK_NOTHROW(ShippedLevel("StandardMaze"));
  CHECK_THROWS_AS(ShippedLevel("NoSuchMaze"), ConfigError);
}

}  // namespace ued::amaze
