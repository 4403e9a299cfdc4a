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
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "test_fixtures.h"
#include "ued/agents/agent.h"
#include "ued/agents/checkpoint.h"
#include "ued/agents/ppo.h"
#include "ued/agents/rollout.h"
#include "ued/amaze/maze.h"
#include "ued/common/errors.h"

namespace ued::agents {

TEST_CASE("GAE closed forms") {
  SUBCASE("telescoping sum") {
    const std::vector<float> r = {1, 1, 1}, v = {0, 0, 0}, last = {0};
    const std::vector<std::uint8_t> d = {0, 0, 0};
    auto g = ComputeGae(r, v, d, last, 3, 1, 1.0, 1.0);
    CHECK(g.advantages == std::vector<float>{3, 2, 1});
    CHECK(g.returns == std::vector<float>{3, 2, 1});
  }
  SUBCASE("gamma 0 gives one-step advantages") {
    const std::vector<float> r = {0.5f, 0.0f, 1.0f}, v = {0.2f, 0.4f, 0.1f},
                             last = {9.0f};
    const std::vector<std::uint8_t> d = {0, 1, 0};
    auto g = ComputeGae(r, v, d, last, 3, 1, 0.0, 0.95);
    for (int t = 0; t < 3; ++t) CHECK(g.advantages[t] == doctest::Approx(r[t] - v[t]));
  }
  SUBCASE("dones stop the advantage from leaking backwards") {
    const std::vector<float> r = {0, 0, 0, 5}, v = {0, 0, 0, 0}, last = {0};
    const std::vector<std::uint8_t> d = {0, 1, 0, 0};
    auto g = ComputeGae(r, v, d, last, 4, 1, 0.99, 0.95);
    CHECK(g.advantages[0] == 0.0f);
    CHECK(g.advantages[1] == 0.0f);
    CHECK(g.advantages[2] > 0.0f);
  }
  SUBCASE("random sequences against the definitional oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      Rng r = rng.split(trial);
      const int steps = 1 + static_cast<int>(r.uniform_index(64));
      const int lanes = 1 + static_cast<int>(r.uniform_index(4));
      auto seq = testing::RandomGaeInputs(r, steps, lanes);
      const double gamma = r.uniform(), lambda = r.uniform();
      auto g = ComputeGae(seq.rewards, seq.values, seq.dones, seq.last_values,
                          steps, lanes, gamma, lambda);
      auto oracle = testing::GaeOracle(seq, steps, lanes, gamma, lambda);
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        REQUIRE(std::abs(g.advantages[i] - oracle[i]) < 1e-6);
      }
    }
  }
}

TEST_CASE("zero parameters give uniform logits") {
  RecurrentPolicy<float> policy(testing::TinySpec());
  auto params = policy.zeros();
  auto traj = testing::RandomTrajectory(Rng(1), policy.spec(), 3, 2);
  InputView in{2, std::span(traj.tiles).first(2 * policy.spec().grid_cells),
               std::span(traj.aux).first(2 * policy.spec().aux_dim)};
  auto out = policy.step(params, in, policy.zero_hidden(2));
  for (int i = 0; i < out.logits.size(); ++i) CHECK(out.logits.data()[i] == 0.0f);
}

TEST_CASE("batched step equals per-lane steps") {
  RecurrentPolicy<float> policy(testing::TinySpec());
  auto params = policy.init(Rng(2));
  const NetSpec& s = policy.spec();
  const int lanes = 5;
  auto traj = testing::RandomTrajectory(Rng(3), s, 1, lanes);
  RowMat<float> h = RowMat<float>::Random(lanes, s.hidden);
  auto batch = policy.step(params, InputView{lanes, traj.tiles, traj.aux}, h);
  for (int l = 0; l < lanes; ++l) {
    InputView one{1, std::span(traj.tiles).subspan(l * s.grid_cells, s.grid_cells),
                  std::span(traj.aux).subspan(l * s.aux_dim, s.aux_dim)};
    RowMat<float> hl = h.row(l);
    auto single = policy.step(params, one, hl);
    CHECK((single.logits.row(0) - batch.logits.row(l)).cwiseAbs().maxCoeff() < 1e-5f);
    CHECK((single.hidden.row(0) - batch.hidden.row(l)).cwiseAbs().maxCoeff() < 1e-5f);
  }
}

TEST_CASE("sequence forward matches repeated steps with resets") {
  RecurrentPolicy<double> policy(testing::TinySpec());
  auto params = policy.init(Rng(4));
  const NetSpec& s = policy.spec();
  auto traj = testing::RandomTrajectory(Rng(5), s, 6, 3);
  RecurrentPolicy<double>::SequenceCache cache;
  const RowMat<double> h0 = traj.initial_hidden.cast<double>();
  policy.forward_sequence(params, traj.sequence(), h0, cache);
  RowMat<double> h = h0;
  for (int t = 0; t < traj.steps; ++t) {
    for (int l = 0; l < traj.lanes; ++l) {
      if (traj.resets[traj.index(t, l)]) h.row(l).setZero();
    }
    const std::size_t base = static_cast<std::size_t>(t) * traj.lanes;
    InputView in{traj.lanes,
                 std::span(traj.tiles).subspan(base * s.grid_cells, traj.lanes * s.grid_cells),
                 std::span(traj.aux).subspan(base * s.aux_dim, traj.lanes * s.aux_dim)};
    auto out = policy.step(params, in, h);
    h = out.hidden;
    for (int l = 0; l < traj.lanes; ++l) {
      REQUIRE((out.logits.row(l) - cache.logits.row(base + l)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("PPO gradient matches central finite differences") {
  RecurrentPolicy<double> policy(testing::TinySpec());
  PpoConfig cfg;
  cfg.entropy_coef = 0.01;
  for (int batch = 0; batch < 5; ++batch) {
    const double rel = testing::GradCheckRelError(policy, cfg, Rng(100 + batch));
    CHECK(rel < 1e-3);
  }
}

TEST_CASE("unclipped PPO step equals the vanilla policy gradient") {
  RecurrentPolicy<double> policy(testing::TinySpec());
  auto params = policy.init(Rng(7));
  auto traj = testing::RandomTrajectory(Rng(8), policy.spec(), 5, 3);
  testing::SetOldPolicy(policy, params, traj);  // ratio = 1 everywhere
  PpoConfig cfg;
  cfg.clip_range = 1e9;
  cfg.value_loss_coef = 0.0;
  cfg.entropy_coef = 0.0;
  std::vector<float> adv(traj.size()), ret(traj.size(), 0.0f);
  Rng r(9);
  for (auto& a : adv) a = static_cast<float>(r.uniform() * 2 - 1);
  auto grads = policy.zeros();
  PpoLoss<double>(policy, params, traj, adv, ret, cfg, &grads);
  // Reference: finite differences of -mean(A log pi(a|s)).
  auto pg = testing::VanillaPolicyGradient(policy, params, traj, adv);
  int bad = 0;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double a = grads.flat()[i], n = pg.flat()[i];
    if (std::abs(a - n) > 1e-7 + 1e-4 * std::abs(n)) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("zero advantages contribute no policy loss") {
  RecurrentPolicy<double> policy(testing::TinySpec());
  auto params = policy.init(Rng(10));
  auto traj = testing::RandomTrajectory(Rng(11), policy.spec(), 4, 2);
  std::vector<float> adv(traj.size(), 0.0f), ret(traj.size(), 0.5f);
  auto st = PpoLoss<double>(policy, params, traj, adv, ret, PpoConfig{}, nullptr);
  CHECK(st.policy == 0.0);
}

TEST_CASE("PPO epochs reduce the loss on a frozen batch") {
  RecurrentPolicy<float> policy(testing::TinySpec());
  Agent agent = InitAgent(policy, Rng(12));
  auto traj = testing::RandomTrajectory(Rng(13), policy.spec(), 8, 4);
  testing::SetOldPolicy(policy, agent.params, traj);
  auto gae = ComputeGae(traj, 0.99, 0.95);
  PpoConfig cfg;
  cfg.lr = 1e-3;
  cfg.entropy_coef = 0.0;
  LocalReducer local;
  auto norm = NormalizeAdvantages(gae.advantages, local);
  const double before =
      PpoLoss<float>(policy, agent.params, traj, norm, gae.returns, cfg, nullptr).total;
  PpoUpdate(policy, agent.params, agent.opt, traj, gae.advantages, gae.returns,
            cfg, Rng(0), local);
  const double after =
      PpoLoss<float>(policy, agent.params, traj, norm, gae.returns, cfg, nullptr).total;
  CHECK(after < before);
  CHECK(agent.opt.step == cfg.epochs);
}

TEST_CASE("non-finite loss aborts the update") {
  RecurrentPolicy<float> policy(testing::TinySpec());
  Agent agent = InitAgent(policy, Rng(14));
  auto traj = testing::RandomTrajectory(Rng(15), policy.spec(), 3, 2);
  std::vector<float> adv(traj.size(), 1.0f), ret(traj.size(), NAN);
  LocalReducer local;
  CHECK_THROWS_AS(PpoUpdate(policy, agent.params, agent.opt, traj, adv, ret,
                            PpoConfig{}, Rng(0), local),
                  NonFiniteError);
}

TEST_CASE("rollout bookkeeping") {
  StaticParams p;
  amaze::MazeEnv env(p);
  NetSpec spec = testing::TinySpec();
  RecurrentPolicy<float> policy(spec);
  auto params = policy.init(Rng(16));
  std::vector<amaze::MazeLevel> levels;
  for (int i = 0; i < 4; ++i) levels.push_back(amaze::SampleRandomLevel(Rng(i), p));

  SUBCASE("length 1 stores one transition per lane") {
    auto lanes = StartLanes<amaze::MazeEnv, amaze::MazeLevel>(env, levels, spec.hidden);
    auto traj = Rollout(env, policy, params, lanes, 1, Rng(0));
    CHECK(traj.size() == 4);
    CHECK(traj.steps == 1);
  }
  SUBCASE("stored log-probs match a recomputed forward pass") {
    auto lanes = StartLanes<amaze::MazeEnv, amaze::MazeLevel>(env, levels, spec.hidden);
    auto traj = Rollout(env, policy, params, lanes, 300, Rng(1));
    RecurrentPolicy<float>::SequenceCache cache;
    policy.forward_sequence(params, traj.sequence(), traj.initial_hidden, cache);
    std::vector<float> lp(spec.n_actions);
    double worst = 0.0;
    int episodes = 0;
    for (int i = 0; i < traj.size(); ++i) {
      LogSoftmax(std::span<const float>(cache.logits.row(i).data(), spec.n_actions), lp);
      worst = std::max(worst, static_cast<double>(std::abs(lp[traj.actions[i]] - traj.log_probs[i])));
      episodes += traj.dones[i];
    }
    CHECK(worst < 1e-6);
    CHECK(episodes >= 4);  // 300 steps > 250-step limit on every lane
  }
  SUBCASE("greedy rollouts are deterministic") {
    auto a = StartLanes<amaze::MazeEnv, amaze::MazeLevel>(env, levels, spec.hidden);
    auto b = StartLanes<amaze::MazeEnv, amaze::MazeLevel>(env, levels, spec.hidden);
    auto ta = Rollout(env, policy, params, a, 50, Rng(2), ActionMode::kGreedy);
    auto tb = Rollout(env, policy, params, b, 50, Rng(99), ActionMode::kGreedy);
    CHECK(ta.actions == tb.actions);
    CHECK(ta.rewards == tb.rewards);
  }
  SUBCASE("auto-reset restarts the same level") {
    auto lanes = StartLanes<amaze::MazeEnv, amaze::MazeLevel>(env, levels, spec.hidden);
    Rollout(env, policy, params, lanes, 260, Rng(3));
    for (int l = 0; l < 4; ++l) CHECK(lanes.current[l].state.level == levels[l]);
  }
}

TEST_CASE("agent population") {
  RecurrentPolicy<float> policy(testing::TinySpec());
  SUBCASE("n = 1 matches the base agent") {
    AgentPop pop(policy, 1, Rng(20));
    CHECK(pop[0] == InitAgent(policy, Rng(20).split(0)));
  }
  SUBCASE("shared seeds give identical members") {
    AgentPop pop(policy, 2, Rng(21), /*shared_seed=*/true);
    CHECK(pop[0] == pop[1]);
  }
  SUBCASE("population update equals member-wise updates") {
    AgentPop pop(policy, 2, Rng(22));
    std::vector<TrajectoryBatch> trajs = {
        testing::RandomTrajectory(Rng(23), policy.spec(), 4, 2),
        testing::RandomTrajectory(Rng(24), policy.spec(), 4, 2)};
    std::vector<GaeResult> gae = {ComputeGae(trajs[0], 0.99, 0.95),
                                  ComputeGae(trajs[1], 0.99, 0.95)};
    std::vector<Agent> manual = pop.members();
    PpoConfig cfg;
    LocalReducer local;
    for (int i = 0; i < 2; ++i) {
      PpoUpdate(policy, manual[i].params, manual[i].opt, trajs[i],
                gae[i].advantages, gae[i].returns, cfg, Rng(5).split(i), local);
    }
    pop.update(trajs, gae, cfg, Rng(5));
    CHECK(pop[0] == manual[0]);
    CHECK(pop[1] == manual[1]);
  }
}

TEST_CASE("checkpoint round trip") {
  RecurrentPolicy<float> policy(testing::TinySpec());
  Agent agent = InitAgent(policy, Rng(30));
  agent.opt.step = 17;
  agent.opt.m.flat()[3] = 0.25f;
  Checkpoint ckpt;
  AddAgent(ckpt, "student0", agent);
  ckpt.meta["iteration"] = 42;
  const auto path = std::filesystem::temp_directory_path() / "ued_ckpt_test.bin";
  WriteCheckpoint(path, ckpt);
  Checkpoint back = ReadCheckpoint(path);
  std::filesystem::remove(path);
  Agent loaded = InitAgent(policy, Rng(31));
  LoadAgent(back, "student0", loaded);
  CHECK(loaded == agent);
  CHECK(back.meta["iteration"] == 42);

  std::string bytes = SerializeCheckpoint(ckpt);
  CHECK(bytes.substr(0, 7) == "UEDCKPT");
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes.substr(0, bytes.size() - 3)),
                  ValidationError);
  bytes[0] = 'X';
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes), ValidationError);
}

}  // namespace ued::agents
