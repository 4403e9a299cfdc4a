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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "test_fixtures.h"
#include "ued/amaze/maze.h"
#include "ued/common/errors.h"
#include "ued/runners/level_buffer.h"
#include "ued/runners/runner.h"
#include "ued/runners/scoring.h"
#include "ued/runners/sdp.h"

using namespace ued;
using namespace ued::runners;

namespace {

std::vector<amaze::MazeLevel> DistinctLevels(int n) {
  StaticParams p;
  p.height = p.width = 7;
  p.wall_budget = 10;
  std::vector<amaze::MazeLevel> out;
  for (std::uint64_t i = 0; out.size() < static_cast<std::size_t>(n); ++i) {
    auto l = amaze::SampleRandomLevel(Rng(1000 + i), p);
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

LevelBuffer BufferWithScores(const std::vector<double>& scores, int capacity,
                             const std::vector<amaze::MazeLevel>& levels) {
  LevelBuffer b(capacity);
  std::vector<Candidate> c;
  for (std::size_t i = 0; i < scores.size(); ++i) c.push_back({levels[i], scores[i], 0.0});
  b.update(c, 0);
  return b;
}

bool SameParams(const RunnerState& a, const RunnerState& b) {
  return MaxParamDifference(a, b) == 0.0;
}

}  // namespace

TEST_CASE("scoring oracles") {
  const std::vector<float> adv = {0.5f, -0.2f, 0.3f};
  CHECK(ScorePvl(adv) == doctest::Approx(0.8 / 3).epsilon(1e-6));
  const std::vector<float> neg = {-1.0f, -0.1f};
  CHECK(ScorePvl(neg) == 0.0);
  // Positive homogeneity.
  const std::vector<float> scaled = {1.5f, -0.6f, 0.9f};
  CHECK(ScorePvl(scaled) == doctest::Approx(3 * ScorePvl(adv)).epsilon(1e-6));

  const std::vector<float> values = {0.1f, 0.2f, 0.3f};
  CHECK(ScoreMaxMc(values, 1.0) == doctest::Approx(0.8).epsilon(1e-6));
  CHECK_THROWS_AS(ScorePvl(std::span<const float>()), ContractViolation);
  CHECK_THROWS_AS(ScoreMaxMc(std::span<const float>(), 1.0), ContractViolation);
}

TEST_CASE("buffer probabilities match closed forms") {
  const auto levels = DistinctLevels(5);
  PlrConfig cfg;
  cfg.temperature = 1.0;
  cfg.staleness_coef = 0.0;
  auto b = BufferWithScores({3, 1, 2}, 10, levels);
  auto p = b.probabilities(cfg, 0);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == doctest::Approx(6.0 / 11));
  CHECK(p[1] == doctest::Approx(2.0 / 11));
  CHECK(p[2] == doctest::Approx(3.0 / 11));

  // Pure staleness: proportional to (iter - last_sampled); all fresh is uniform.
  cfg.staleness_coef = 1.0;
  p = b.probabilities(cfg, 0);
  for (double v : p) CHECK(v == doctest::Approx(1.0 / 3));
  p = b.probabilities(cfg, 4);
  for (double v : p) CHECK(v == doctest::Approx(1.0 / 3));

  // Proportional prioritization.
  cfg.staleness_coef = 0.0;
  cfg.prioritization = Prioritization::kProportional;
  p = b.probabilities(cfg, 0);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(1.0 / 6));
}

TEST_CASE("buffer sampling frequencies follow the distribution") {
  const auto levels = DistinctLevels(5);
  PlrConfig cfg;  // beta 0.3, rho 0.3
  auto b = BufferWithScores({0.9, 0.1, 0.5, 0.3, 0.7}, 10, levels);
  // Give the entries distinct staleness.
  for (int i = 0; i < 5; ++i) b.sample(Rng(7).split(i), 1, cfg, i);
  const std::int64_t now = 10;
  const auto expected = b.probabilities(cfg, now);
  double total = 0.0;
  for (double v : expected) total += v;
  CHECK(total == doctest::Approx(1.0));

  auto copy = b;
  const int n = 100000;
  const auto draws = copy.sample(Rng(99), n, cfg, now);
  std::vector<int> counts(5, 0);
  for (int i : draws) counts[i]++;
  for (int i = 0; i < 5; ++i) CHECK(std::abs(counts[i] / double(n) - expected[i]) < 0.01);
  // Every drawn entry is stamped.
  for (int i = 0; i < 5; ++i) {
    if (counts[i] > 0) CHECK(copy[i].last_sampled_iter == now);
  }
}

TEST_CASE("buffer update eviction rules") {
  const auto levels = DistinctLevels(8);
  SUBCASE("keeps the top scores at capacity") {
    auto b = BufferWithScores({5, 1, 3}, 2, levels);
    REQUIRE(b.size() == 2);
    std::multiset<double> s;
    for (const auto& e : b.entries()) s.insert(e.score);
    CHECK(s == std::multiset<double>{5, 3});
  }
  SUBCASE("a candidate below the minimum leaves the buffer unchanged") {
    auto b = BufferWithScores({5, 3}, 2, levels);
    const auto before = b;
    const Candidate c{levels[5], 1.0, 0.0};
    CHECK(b.update(std::span<const Candidate>(&c, 1), 3) == 0);
    CHECK(b == before);
  }
  SUBCASE("re-inserting a stored level rescores it in place") {
    auto b = BufferWithScores({5, 3}, 4, levels);
    const Candidate c{levels[1], 9.0, 0.4};
    CHECK(b.update(std::span<const Candidate>(&c, 1), 3) == 0);
    CHECK(b.size() == 2);
    CHECK(b[b.find(levels[1])].score == 9.0);
    CHECK(b[b.find(levels[1])].max_return == doctest::Approx(0.4));
    const Candidate lower{levels[1], 1.0, 0.1};
    b.update(std::span<const Candidate>(&lower, 1), 4);
    CHECK(b[b.find(levels[1])].max_return == doctest::Approx(0.4));
  }
  SUBCASE("ties evict the staler entry") {
    std::vector<LevelBufferEntry> e(2);
    e[0].level = levels[0];
    e[0].score = 2.0;
    e[0].last_sampled_iter = 4;
    e[1].level = levels[1];
    e[1].score = 2.0;
    e[1].last_sampled_iter = 1;
    auto b = LevelBuffer::FromEntries(2, e);
    const Candidate c{levels[6], 3.0, 0.0};
    b.update(std::span<const Candidate>(&c, 1), 6);
    CHECK(b.find(levels[0]) >= 0);
    CHECK(b.find(levels[1]) < 0);
    CHECK(b.find(levels[6]) >= 0);
  }
  SUBCASE("random sweeps keep the min-score invariant") {
    Rng rng(3);
    const auto pool = DistinctLevels(40);
    LevelBuffer b(6);
    std::map<std::size_t, double> best;  // oracle over all distinct levels
    for (int i = 0; i < 200; ++i) {
      const int k = static_cast<int>(rng.split(i).uniform_index(pool.size()));
      const double score = std::floor(rng.split(i).fold_in(1).uniform() * 1000) / 1000;
      const Candidate c{pool[k], score, 0.0};
      const double old_min = b.full() ? b.min_score() : -1.0;
      const bool present = b.find(pool[k]) >= 0;
      b.update(std::span<const Candidate>(&c, 1), i);
      CHECK(b.size() <= 6);
      if (!present && b.find(pool[k]) >= 0 && old_min >= 0) CHECK(score > old_min - 1e-12);
    }
  }
}

TEST_CASE("replay decision edge cases") {
  const auto levels = DistinctLevels(2);
  LevelBuffer empty(4);
  auto full = BufferWithScores({1, 2}, 4, levels);
  int replays = 0;
  for (int i = 0; i < 200; ++i) {
    CHECK_FALSE(SampleReplayDecision(Rng(i), empty, 1.0));
    CHECK_FALSE(SampleReplayDecision(Rng(i), full, 0.0));
    CHECK(SampleReplayDecision(Rng(i), full, 1.0));
    replays += SampleReplayDecision(Rng(i), full, 0.5) ? 1 : 0;
  }
  CHECK(replays > 70);
  CHECK(replays < 130);
}

TEST_CASE("population regret") {
  const std::vector<double> r = {0.9, 0.5, 0.1};
  CHECK(PopulationRegret(r) == doctest::Approx(0.4));
  const std::vector<double> perm = {0.1, 0.9, 0.5};
  CHECK(PopulationRegret(perm) == doctest::Approx(0.4));
  const std::vector<double> same = {0.3, 0.3};
  CHECK(PopulationRegret(same) == 0.0);
  const std::vector<double> two = {0.7, 0.2};
  CHECK(PopulationRegret(two) == doctest::Approx((0.7 - 0.2) / 2));
}

TEST_CASE("config validation") {
  auto c = testing::TinyRunnerConfig(RunnerKind::kPaired);
  c.paired.population = 1;
  CHECK_THROWS_AS(ValidateRunnerConfig(c), ConfigError);
  auto d = testing::TinyRunnerConfig(RunnerKind::kDr);
  d.accel.enabled = true;
  CHECK_THROWS_AS(ValidateRunnerConfig(d), ConfigError);
  auto p = testing::TinyRunnerConfig(RunnerKind::kPlr);
  p.plr.replay_rate = 2.0;
  CHECK_THROWS_AS(ValidateRunnerConfig(p), ConfigError);
  auto s = testing::TinyRunnerConfig(RunnerKind::kPlr);
  CHECK_THROWS_AS(ShardedRunner(s, 3), ConfigError);
  CHECK_THROWS_AS(ShardedRunner(testing::TinyRunnerConfig(RunnerKind::kPaired), 2), ConfigError);
}

TEST_CASE("DR iteration bookkeeping and determinism") {
  const auto cfg = testing::TinyRunnerConfig(RunnerKind::kDr);
  Runner runner(cfg);
  auto a = runner.init(5);
  auto b = runner.init(5);
  for (int i = 0; i < 3; ++i) {
    const auto st = runner.step(a);
    CHECK(st.branch == "dr");
    CHECK(st.updated);
    CHECK(st.iteration == i + 1);
    CHECK(st.env_steps == (i + 1) * cfg.n_envs * cfg.rollout_length);
    runner.step(b);
  }
  CHECK(SameParams(a, b));
  CHECK(a.students[0] == b.students[0]);
}

TEST_CASE("robust PLR updates the student only on replay iterations") {
  auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlr);
  cfg.plr.replay_rate = 0.5;
  Runner runner(cfg);
  auto s = runner.init(11);
  int replays = 0;
  for (int i = 0; i < 40; ++i) {
    const auto before = s;
    const auto st = runner.step(s);
    const bool changed = !SameParams(before, s);
    CHECK(changed == (st.branch == "replay"));
    CHECK(st.updated == (st.branch == "replay"));
    replays += st.branch == "replay" ? 1 : 0;
  }
  CHECK(replays > 5);
  CHECK(s.n_updates == replays);
  CHECK(s.n_replay_iterations == replays);
  CHECK(s.buffer.size() <= cfg.plr.buffer_size);
}

TEST_CASE("non-robust PLR with replay rate 0 updates every iteration") {
  auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlr);
  cfg.plr.replay_rate = 0.0;
  cfg.plr.robust = false;
  Runner runner(cfg);
  auto s = runner.init(12);
  for (int i = 0; i < 4; ++i) {
    const auto before = s;
    const auto st = runner.step(s);
    CHECK(st.branch == "new");
    CHECK_FALSE(SameParams(before, s));
  }
}

TEST_CASE("ACCEL edits q replay levels per replay iteration") {
  auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlr);
  cfg.accel.enabled = true;
  cfg.accel.subsample_size = 2;
  cfg.plr.replay_rate = 0.8;
  Runner runner(cfg);
  auto s = runner.init(13);
  agents::LocalReducer local;
  runner.step(s, {.replay = false}, local);
  const auto st = runner.step(s, {.replay = true}, local);
  CHECK(st.branch == "replay");
  CHECK(st.n_mutants == 2);
  CHECK(st.mutant_candidates.size() == 2);
  CHECK(st.env_steps == (2 * cfg.n_envs + 2) * cfg.rollout_length);
  // Parents are the top-scoring replay lanes.
  std::vector<double> scores;
  for (const auto& c : st.replay_candidates) scores.push_back(c.score);
  std::sort(scores.rbegin(), scores.rend());
  for (int j = 0; j < 2; ++j) CHECK(st.replay_candidates[st.mutant_parents[j]].score == scores[j]);
}

TEST_CASE("parallel variants: lane composition and sequential buffer equivalence") {
  for (bool accel : {false, true}) {
    CAPTURE(accel);
    auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlrParallel);
    cfg.accel.enabled = accel;
    cfg.accel.subsample_size = 2;
    Runner runner(cfg);
    auto s = runner.init(21);
    const int groups = accel ? 3 : 2;

    auto boot = runner.step(s);
    CHECK(boot.branch == "bootstrap");
    CHECK(boot.lanes_new == groups * cfg.n_envs);
    CHECK_FALSE(boot.updated);  // robust: no replay lanes to learn from

    for (int i = 0; i < 3; ++i) {
      const auto before = s;
      const auto st = runner.step(s);
      CHECK(st.branch == "parallel");
      CHECK(st.lanes_new == cfg.n_envs);
      CHECK(st.lanes_replay == cfg.n_envs);
      CHECK(st.lanes_mutant == (accel ? cfg.n_envs : 0));
      CHECK(st.updated);

      // Mutants descend from replay lanes.
      for (int p : st.mutant_parents) {
        CHECK(p >= 0);
        CHECK(p < cfg.n_envs);
      }

      // Same draws and the same candidates applied one set at a time.
      LevelBuffer seq = before.buffer;
      const Rng it = before.rng.split(static_cast<std::uint64_t>(before.iteration));
      const auto idx = seq.sample(it.fold_in(3), cfg.n_envs, cfg.plr, before.iteration);
      CHECK(idx == st.replay_indices);
      auto apply = [&](const std::vector<CandidateRecord>& recs) {
        std::vector<Candidate> c;
        for (const auto& r : recs) c.push_back({r.level, r.score, r.max_return});
        seq.update(c, before.iteration);
      };
      apply(st.replay_candidates);
      apply(st.new_candidates);
      apply(st.mutant_candidates);
      CHECK(seq == s.buffer);
    }
  }
}

TEST_CASE("identity mutator: mutants only rescore their parents") {
  auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlrParallel);
  cfg.accel.enabled = true;
  cfg.accel.subsample_size = 2;
  cfg.plr.buffer_size = 64;
  Runner runner(cfg);
  runner.set_mutator([](Rng, const amaze::MazeLevel& l) { return l; });
  auto s = runner.init(22);
  runner.step(s);
  for (int i = 0; i < 3; ++i) {
    const auto before = s.buffer;
    const auto st = runner.step(s);
    std::set<std::size_t> replayed;
    for (const auto& c : st.replay_candidates) replayed.insert(amaze::LevelHash(c.level));
    for (const auto& c : st.mutant_candidates) CHECK(replayed.count(amaze::LevelHash(c.level)) == 1);
    // Growth comes from new levels alone.
    int new_stored = 0;
    for (const auto& c : st.new_candidates) new_stored += before.find(c.level) < 0 && s.buffer.find(c.level) >= 0;
    CHECK(s.buffer.size() - before.size() <= new_stored);
  }
}

TEST_CASE("PAIRED iteration") {
  auto cfg = testing::TinyRunnerConfig(RunnerKind::kPaired);
  Runner runner(cfg);
  auto s = runner.init(31);
  REQUIRE(s.teacher.has_value());
  REQUIRE(s.students.size() == 2);
  const auto before = s;
  const auto st = runner.step(s);
  CHECK(st.branch == "paired");
  CHECK(st.updated);
  CHECK(std::isfinite(st.mean_regret));
  CHECK(st.mean_regret >= 0.0);
  CHECK_FALSE(*s.teacher == *before.teacher);
  CHECK_FALSE(s.students[0] == before.students[0]);
  CHECK_FALSE(s.students[1] == before.students[1]);
}

TEST_CASE("sharded gradient equals the concatenated-batch gradient") {
  const auto spec = testing::TinySpec();
  agents::RecurrentPolicy<float> policy(spec);
  const auto params = testing::PerturbedInit(policy, Rng(41));
  auto traj = testing::RandomTrajectory(Rng(42), spec, 12, 8);
  testing::SetOldPolicy(policy, params, traj);
  Rng noise(43);
  for (auto& lp : traj.log_probs) lp += static_cast<float>(0.2 * testing::Gaussian(noise));
  std::vector<float> adv(traj.size()), ret(traj.size());
  for (auto& a : adv) a = static_cast<float>(testing::Gaussian(noise) + 0.3);
  for (auto& r : ret) r = static_cast<float>(testing::Gaussian(noise));
  agents::PpoConfig cfg;
  for (int d : {1, 2, 4}) {
    CAPTURE(d);
    CHECK(testing::ShardedGradientDifference(policy, params, traj, adv, ret, cfg, d) < 1e-5);
  }
}

TEST_CASE("sharded runner") {
  SUBCASE("one shard reproduces the single-process runner") {
    auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlr);
    Runner single(cfg);
    ShardedRunner sharded(cfg, 1);
    auto a = single.init(51);
    auto b = sharded.init(51);
    for (int i = 0; i < 5; ++i) {
      const auto sa = single.step(a);
      const auto sb = sharded.step(b);
      CHECK(sa.branch == sb.branch);
    }
    CHECK(SameParams(a, b.shards[0]));
    CHECK(a.buffer == b.shards[0].buffer);
  }
  SUBCASE("two shards stay in lockstep with private buffers") {
    auto cfg = testing::TinyRunnerConfig(RunnerKind::kPlrParallel);
    cfg.n_envs = 4;
    ShardedRunner sharded(cfg, 2);
    auto st = sharded.init(52);
    REQUIRE(st.shards.size() == 2);
    std::vector<std::set<std::size_t>> seen(2);
    for (int i = 0; i < 4; ++i) {
      const auto merged = sharded.step(st);
      CHECK(merged.iteration == i + 1);
      const auto& per = sharded.last_shard_stats();
      for (int d = 0; d < 2; ++d) {
        CHECK(per[d].branch == merged.branch);
        for (const auto& c : per[d].new_candidates) seen[d].insert(amaze::LevelHash(c.level));
      }
      CHECK(SameParams(st.shards[0], st.shards[1]));
    }
    for (int d = 0; d < 2; ++d) {
      CHECK(st.shards[d].buffer.capacity() == cfg.plr.buffer_size / 2);
      for (const auto& e : st.shards[d].buffer.entries()) {
        CHECK(seen[d].count(e.hash) == 1);
        CHECK(seen[1 - d].count(e.hash) == 0);
      }
    }
  }
}
