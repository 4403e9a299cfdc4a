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

#include "ued/runners/runner.h"

#include <algorithm>
#include <numeric>

#include "ued/agents/rollout.h"
#include "ued/amaze/mutate.h"
#include "ued/common/errors.h"

namespace ued::runners {

namespace {

// Sub-stream tags of the per-iteration rng.
enum : std::uint64_t {
  kTagDecision = 1,
  kTagFresh = 2,
  kTagSample = 3,
  kTagRollout = 4,
  kTagUpdate = 5,
  kTagMutate = 6,
  kTagMutantRollout = 7,
  kTagTeacherRollout = 8,
  kTagTeacherUpdate = 9,
  kTagStudentRollout = 16,  // + member index
};

void AddEpisodes(IterationStats& st, std::span<const LaneScore> scores) {
  for (const auto& s : scores) {
    st.episodes += s.episodes;
    st.solved += s.solved;
    st.return_sum += s.mean_return * s.episodes;
  }
}

void FillBufferStats(IterationStats& st, const LevelBuffer& b) {
  st.buffer_size = b.size();
  st.buffer_mean_score = b.mean_score();
  st.buffer_max_score = b.max_score();
}

std::vector<int> Range(int begin, int end) {
  std::vector<int> v(end - begin);
  std::iota(v.begin(), v.end(), begin);
  return v;
}

}  // namespace

void LevelSetStats::add(const amaze::EnvMetrics& m) {
  count++;
  walls_sum += m.n_walls;
  if (m.solvable) {
    solvable++;
    path_sum += m.shortest_path_length;
  }
}

void LevelSetStats::merge(const LevelSetStats& o) {
  count += o.count;
  solvable += o.solvable;
  walls_sum += o.walls_sum;
  path_sum += o.path_sum;
}

double PopulationRegret(std::span<const double> returns) {
  if (returns.empty()) throw ContractViolation("regret of an empty population");
  const double mx = *std::max_element(returns.begin(), returns.end());
  const double mean =
      std::accumulate(returns.begin(), returns.end(), 0.0) / returns.size();
  return mx - mean;
}

void ValidateRunnerConfig(const RunnerConfig& c) {
  ValidateStaticParams(c.env);
  agents::ValidatePpoConfig(c.ppo);
  if (c.rollout_length < 1) throw ConfigError("rollout_length must be >= 1");
  if (c.n_envs < 1) throw ConfigError("n_envs must be >= 1");
  if (c.model.hidden < 1 || c.model.encoder_dim < 1 || c.model.tile_embed_dim < 1 ||
      c.model.aux_embed_dim < 0) {
    throw ConfigError("model sizes must be positive");
  }
  if (c.kind == RunnerKind::kPlr || c.kind == RunnerKind::kPlrParallel) {
    ValidatePlrConfig(c.plr);
  }
  if (c.accel.enabled) {
    if (c.kind != RunnerKind::kPlr && c.kind != RunnerKind::kPlrParallel) {
      throw ConfigError("accel requires a PLR runner");
    }
    if (c.accel.n_mutations < 1) throw ConfigError("accel.n_mutations must be >= 1");
    if (c.accel.subsample_size < 1) throw ConfigError("accel.subsample_size must be >= 1");
    if (c.kind == RunnerKind::kPlr && c.accel.subsample_size > c.n_envs) {
      throw ConfigError("accel.subsample_size exceeds n_envs");
    }
    if (!(c.accel.goal_move_prob >= 0.0 && c.accel.goal_move_prob <= 1.0)) {
      throw ConfigError("accel.goal_move_prob must lie in [0, 1]");
    }
  }
  if (c.kind == RunnerKind::kPaired) {
    if (c.paired.population < 2) {
      throw ConfigError("paired.population must be >= 2");
    }
    if (c.paired.generator_entropy_coef < 0.0) {
      throw ConfigError("paired.generator_entropy_coef must be >= 0");
    }
  }
}

agents::NetSpec StudentNetSpec(const StaticParams& env, const ModelConfig& m) {
  agents::NetSpec s;
  s.grid_cells = env.agent_view_size * env.agent_view_size;
  s.n_codes = amaze::kNumTileCodes;
  s.tile_embed_dim = m.tile_embed_dim;
  s.aux_dim = 4;
  s.aux_embed_dim = m.aux_embed_dim;
  s.encoder_dim = m.encoder_dim;
  s.hidden = m.hidden;
  s.n_actions = amaze::kNumActions;
  return s;
}

agents::NetSpec TeacherNetSpec(const StaticParams& env, const ModelConfig& m) {
  agents::NetSpec s;
  s.grid_cells = env.height * env.width;
  s.n_codes = 4;
  s.tile_embed_dim = m.tile_embed_dim;
  s.aux_dim = 5;
  s.aux_embed_dim = m.aux_embed_dim;
  s.encoder_dim = m.encoder_dim;
  s.hidden = m.hidden;
  s.n_actions = amaze::TeacherNumActions(env);
  return s;
}

struct Runner::StudentRun {
  agents::TrajectoryBatch traj;
  agents::GaeResult gae;
  std::vector<LaneScore> scores;
};

Runner::Runner(RunnerConfig cfg)
    : cfg_((ValidateRunnerConfig(cfg), std::move(cfg))),
      env_(cfg_.env),
      teacher_env_(cfg_.env),
      student_(StudentNetSpec(cfg_.env, cfg_.model)),
      teacher_(TeacherNetSpec(cfg_.env, cfg_.model)) {
  amaze::MutationConfig mc;
  mc.n_mutations = cfg_.accel.n_mutations;
  mc.goal_move_prob = cfg_.accel.goal_move_prob;
  const StaticParams env = cfg_.env;
  mutator_ = [mc, env](Rng rng, const amaze::MazeLevel& parent) {
    return amaze::MutateLevel(rng, parent, mc, env);
  };
}

RunnerState Runner::init(Rng agent_rng, Rng iter_rng) const {
  RunnerState s;
  s.rng = iter_rng;
  const int n_students = cfg_.kind == RunnerKind::kPaired ? cfg_.paired.population : 1;
  for (int i = 0; i < n_students; ++i) {
    s.students.push_back(agents::InitAgent(student_, agent_rng.split(i)));
  }
  if (cfg_.kind == RunnerKind::kPaired) {
    s.teacher = agents::InitAgent(teacher_, agent_rng.fold_in(1));
  }
  const bool plr = cfg_.kind == RunnerKind::kPlr || cfg_.kind == RunnerKind::kPlrParallel;
  s.buffer = LevelBuffer(plr ? cfg_.plr.buffer_size : 0);
  return s;
}

RunnerState Runner::init(std::uint64_t seed) const {
  const Rng root(seed);
  return init(root.fold_in(1), root.fold_in(2));
}

bool Runner::decide_replay(const RunnerState& s) const {
  return decide_replay(s.rng, s.iteration, !s.buffer.empty());
}

bool Runner::decide_replay(Rng base, std::int64_t iteration, bool nonempty) const {
  if (!nonempty) return false;
  if (cfg_.kind == RunnerKind::kPlrParallel) return true;
  const Rng it = base.split(static_cast<std::uint64_t>(iteration));
  return it.fold_in(kTagDecision).uniform() < cfg_.plr.replay_rate;
}

std::vector<amaze::MazeLevel> Runner::fresh_levels(Rng rng, int n) const {
  std::vector<amaze::MazeLevel> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(amaze::SampleRandomLevel(rng.split(i), cfg_.env));
  return out;
}

Runner::StudentRun Runner::run_student(const agents::Agent& agent,
                                       std::span<const amaze::MazeLevel> levels,
                                       std::span<const double> prior, Rng rng) const {
  StudentRun run;
  auto lanes = agents::StartLanes<amaze::MazeEnv, amaze::MazeLevel>(
      env_, levels, student_.spec().hidden);
  run.traj = agents::Rollout(env_, student_, agent.params, lanes, cfg_.rollout_length, rng);
  run.gae = agents::ComputeGae(run.traj, cfg_.ppo.gamma, cfg_.ppo.gae_lambda);
  run.scores = ScoreLanes(run.traj, run.gae, cfg_.plr.score_fn, prior,
                          cfg_.plr.discounted_max_return, cfg_.ppo.gamma);
  return run;
}

agents::UpdateStats Runner::update_student(RunnerState& s, const StudentRun& run,
                                           std::span<const int> lanes, Rng rng,
                                           agents::GradientReducer& reducer) const {
  agents::Agent& a = s.students[0];
  agents::UpdateStats st;
  if (static_cast<int>(lanes.size()) == run.traj.lanes) {
    st = agents::PpoUpdate(student_, a.params, a.opt, run.traj, run.gae.advantages,
                           run.gae.returns, cfg_.ppo, rng, reducer);
  } else {
    const auto part = agents::SliceLanes(run.traj, lanes);
    const auto adv = agents::SliceLaneValues(run.gae.advantages, run.traj.steps,
                                             run.traj.lanes, lanes);
    const auto ret = agents::SliceLaneValues(run.gae.returns, run.traj.steps,
                                             run.traj.lanes, lanes);
    st = agents::PpoUpdate(student_, a.params, a.opt, part, adv, ret, cfg_.ppo, rng,
                           reducer);
  }
  s.n_updates++;
  return st;
}

IterationStats Runner::step(RunnerState& s) const {
  agents::LocalReducer local;
  return step(s, Plan{}, local);
}

IterationStats Runner::step(RunnerState& s, const Plan& plan,
                            agents::GradientReducer& reducer) const {
  const Rng it = s.rng.split(static_cast<std::uint64_t>(s.iteration));
  IterationStats st;
  switch (cfg_.kind) {
    case RunnerKind::kDr:
      st = step_dr(s, it, reducer);
      break;
    case RunnerKind::kPaired:
      st = step_paired(s, it, reducer);
      break;
    case RunnerKind::kPlr: {
      bool replay = plan.replay.value_or(decide_replay(s));
      if (replay && s.buffer.empty()) replay = false;
      st = step_plr(s, it, replay, reducer);
      break;
    }
    case RunnerKind::kPlrParallel: {
      bool replay = plan.replay.value_or(decide_replay(s));
      if (replay && s.buffer.empty()) replay = false;
      st = step_parallel(s, it, replay, reducer);
      break;
    }
  }
  s.iteration++;
  st.iteration = s.iteration;
  st.env_steps = s.env_steps;
  FillBufferStats(st, s.buffer);
  return st;
}

IterationStats Runner::step_dr(RunnerState& s, Rng it,
                               agents::GradientReducer& reducer) const {
  IterationStats st;
  st.branch = "dr";
  const int n = cfg_.n_envs;
  const auto levels = fresh_levels(it.fold_in(kTagFresh), n);
  for (const auto& l : levels) st.fresh.add(amaze::ComputeEnvMetrics(l));
  const std::vector<double> prior(n, 0.0);
  const StudentRun run = run_student(s.students[0], levels, prior, it.fold_in(kTagRollout));
  s.env_steps += static_cast<std::int64_t>(n) * cfg_.rollout_length;
  AddEpisodes(st, run.scores);
  st.lanes_new = n;
  const auto all = Range(0, n);
  const auto up = update_student(s, run, all, it.fold_in(kTagUpdate), reducer);
  st.updated = true;
  st.loss = up.loss;
  st.grad_norm = up.grad_norm;
  return st;
}

IterationStats Runner::step_paired(RunnerState& s, Rng it,
                                   agents::GradientReducer& reducer) const {
  IterationStats st;
  st.branch = "paired";
  const int n = cfg_.n_envs;
  const int k = static_cast<int>(s.students.size());

  // Teacher designs one level per lane.
  agents::LaneStates<amaze::MazeTeacherEnv> tl;
  for (int l = 0; l < n; ++l) tl.current.push_back(teacher_env_.reset(Rng(0)));
  tl.hidden = agents::RowMat<float>::Zero(n, teacher_.spec().hidden);
  std::vector<amaze::MazeTeacherEnv::Result> finals;
  agents::TrajectoryBatch ttraj =
      agents::Rollout(teacher_env_, teacher_, s.teacher->params, tl,
                      teacher_env_.episode_length(), it.fold_in(kTagTeacherRollout),
                      agents::ActionMode::kSample, &finals);
  std::vector<amaze::MazeLevel> levels;
  levels.reserve(n);
  for (int l = 0; l < n; ++l) levels.push_back(teacher_env_.decode(finals[l].state));
  for (const auto& l : levels) st.fresh.add(amaze::ComputeEnvMetrics(l));

  // Every student plays every designed level.
  const std::vector<double> prior(n, 0.0);
  std::vector<StudentRun> runs;
  runs.reserve(k);
  for (int m = 0; m < k; ++m) {
    runs.push_back(run_student(s.students[m], levels, prior,
                               it.fold_in(kTagStudentRollout + m)));
    AddEpisodes(st, runs.back().scores);
  }
  s.env_steps += static_cast<std::int64_t>(n) * cfg_.rollout_length * k;

  // Teacher reward at the final design step.
  const int last = ttraj.steps - 1;
  std::vector<double> returns(k);
  double regret_sum = 0.0;
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < k; ++m) returns[m] = runs[m].scores[l].mean_return;
    const double reward =
        cfg_.paired.minimax ? -returns[0] : PopulationRegret(returns);
    ttraj.rewards[ttraj.index(last, l)] = static_cast<float>(reward);
    regret_sum += reward;
  }
  st.mean_regret = regret_sum / n;

  const auto all = Range(0, n);
  for (int m = 0; m < k; ++m) {
    agents::Agent& a = s.students[m];
    const auto up = agents::PpoUpdate(student_, a.params, a.opt, runs[m].traj,
                                      runs[m].gae.advantages, runs[m].gae.returns,
                                      cfg_.ppo, it.fold_in(kTagUpdate).split(m), reducer);
    if (m == 0) {
      st.loss = up.loss;
      st.grad_norm = up.grad_norm;
    }
  }
  s.n_updates++;
  st.updated = true;

  agents::PpoConfig tcfg = cfg_.ppo;
  tcfg.entropy_coef = cfg_.paired.generator_entropy_coef;
  const auto tgae = agents::ComputeGae(ttraj, tcfg.gamma, tcfg.gae_lambda);
  agents::PpoUpdate(teacher_, s.teacher->params, s.teacher->opt, ttraj, tgae.advantages,
                    tgae.returns, tcfg, it.fold_in(kTagTeacherUpdate), reducer);
  st.lanes_new = n;
  return st;
}

IterationStats Runner::step_plr(RunnerState& s, Rng it, bool replay,
                                agents::GradientReducer& reducer) const {
  IterationStats st;
  const int n = cfg_.n_envs;
  const std::int64_t iter = s.iteration;

  if (!replay) {
    st.branch = "new";
    const auto levels = fresh_levels(it.fold_in(kTagFresh), n);
    std::vector<amaze::EnvMetrics> metrics;
    for (const auto& l : levels) {
      metrics.push_back(amaze::ComputeEnvMetrics(l));
      st.fresh.add(metrics.back());
    }
    const std::vector<double> prior(n, 0.0);
    const StudentRun run = run_student(s.students[0], levels, prior, it.fold_in(kTagRollout));
    s.env_steps += static_cast<std::int64_t>(n) * cfg_.rollout_length;
    AddEpisodes(st, run.scores);
    std::vector<Candidate> cands;
    for (int l = 0; l < n; ++l) {
      cands.push_back({levels[l], run.scores[l].score, run.scores[l].max_return, &metrics[l]});
      st.new_candidates.push_back({levels[l], run.scores[l].score, run.scores[l].max_return});
    }
    s.buffer.update(cands, iter);
    st.lanes_new = n;
    if (!cfg_.plr.robust) {
      const auto up = update_student(s, run, Range(0, n), it.fold_in(kTagUpdate), reducer);
      st.updated = true;
      st.loss = up.loss;
      st.grad_norm = up.grad_norm;
    }
    return st;
  }

  st.branch = "replay";
  s.n_replay_iterations++;
  st.replay_indices = s.buffer.sample(it.fold_in(kTagSample), n, cfg_.plr, iter);
  std::vector<amaze::MazeLevel> levels;
  std::vector<double> prior;
  for (int idx : st.replay_indices) {
    levels.push_back(s.buffer[idx].level);
    prior.push_back(s.buffer[idx].max_return);
    st.replay.add(s.buffer[idx].metrics);
  }
  const StudentRun run = run_student(s.students[0], levels, prior, it.fold_in(kTagRollout));
  s.env_steps += static_cast<std::int64_t>(n) * cfg_.rollout_length;
  AddEpisodes(st, run.scores);
  st.lanes_replay = n;
  const auto up = update_student(s, run, Range(0, n), it.fold_in(kTagUpdate), reducer);
  st.updated = true;
  st.loss = up.loss;
  st.grad_norm = up.grad_norm;

  std::vector<Candidate> rescored;
  for (int l = 0; l < n; ++l) {
    rescored.push_back({levels[l], run.scores[l].score, run.scores[l].max_return, nullptr});
    st.replay_candidates.push_back({levels[l], run.scores[l].score, run.scores[l].max_return});
  }
  s.buffer.update(rescored, iter);

  if (cfg_.accel.enabled) {
    // Batch selection: the q highest-scoring replay lanes (ties by lane).
    std::vector<int> order = Range(0, n);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return run.scores[a].score > run.scores[b].score;
    });
    const int q = cfg_.accel.subsample_size;
    std::vector<amaze::MazeLevel> mutants;
    std::vector<amaze::EnvMetrics> metrics;
    const Rng mrng = it.fold_in(kTagMutate);
    for (int j = 0; j < q; ++j) {
      mutants.push_back(mutator_(mrng.split(j), levels[order[j]]));
      st.mutant_parents.push_back(order[j]);
      metrics.push_back(amaze::ComputeEnvMetrics(mutants.back()));
      st.mutant.add(metrics.back());
    }
    const std::vector<double> mprior(q, 0.0);
    const StudentRun mrun =
        run_student(s.students[0], mutants, mprior, it.fold_in(kTagMutantRollout));
    s.env_steps += static_cast<std::int64_t>(q) * cfg_.rollout_length;
    AddEpisodes(st, mrun.scores);
    std::vector<Candidate> cands;
    for (int j = 0; j < q; ++j) {
      cands.push_back({mutants[j], mrun.scores[j].score, mrun.scores[j].max_return, &metrics[j]});
      st.mutant_candidates.push_back({mutants[j], mrun.scores[j].score, mrun.scores[j].max_return});
    }
    s.buffer.update(cands, iter);
    st.n_mutants = q;
    st.lanes_mutant = q;
  }
  return st;
}

IterationStats Runner::step_parallel(RunnerState& s, Rng it, bool replay,
                                     agents::GradientReducer& reducer) const {
  IterationStats st;
  const int n = cfg_.n_envs;
  const int groups = cfg_.accel.enabled ? 3 : 2;
  const std::int64_t iter = s.iteration;

  std::vector<amaze::MazeLevel> levels;
  std::vector<double> prior;
  std::vector<amaze::EnvMetrics> metrics;
  int n_new = 0;
  int n_replay = 0;
  int n_mutant = 0;

  if (!replay) {
    // Cold start: every lane gets a fresh level.
    st.branch = "bootstrap";
    n_new = groups * n;
  } else {
    st.branch = "parallel";
    n_new = n;
    n_replay = n;
    n_mutant = cfg_.accel.enabled ? n : 0;
    s.n_replay_iterations++;
  }
  levels = fresh_levels(it.fold_in(kTagFresh), n_new);
  prior.assign(n_new, 0.0);
  for (const auto& l : levels) {
    metrics.push_back(amaze::ComputeEnvMetrics(l));
    st.fresh.add(metrics.back());
  }
  if (n_replay > 0) {
    st.replay_indices = s.buffer.sample(it.fold_in(kTagSample), n_replay, cfg_.plr, iter);
    for (int idx : st.replay_indices) {
      levels.push_back(s.buffer[idx].level);
      prior.push_back(s.buffer[idx].max_return);
      metrics.push_back(s.buffer[idx].metrics);
      st.replay.add(s.buffer[idx].metrics);
    }
  }
  if (n_mutant > 0) {
    // Parents: the q replay lanes with the highest buffer scores, cycled.
    std::vector<int> order = Range(0, n_replay);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return s.buffer[st.replay_indices[a]].score > s.buffer[st.replay_indices[b]].score;
    });
    const int q = std::min(cfg_.accel.subsample_size, n_replay);
    const Rng mrng = it.fold_in(kTagMutate);
    for (int j = 0; j < n_mutant; ++j) {
      const int parent = order[j % q];
      st.mutant_parents.push_back(parent);
      levels.push_back(mutator_(mrng.split(j), levels[n_new + parent]));
      prior.push_back(0.0);
      metrics.push_back(amaze::ComputeEnvMetrics(levels.back()));
      st.mutant.add(metrics.back());
    }
    st.n_mutants = n_mutant;
  }
  const int total = n_new + n_replay + n_mutant;
  st.lanes_new = n_new;
  st.lanes_replay = n_replay;
  st.lanes_mutant = n_mutant;

  const StudentRun run = run_student(s.students[0], levels, prior, it.fold_in(kTagRollout));
  s.env_steps += static_cast<std::int64_t>(total) * cfg_.rollout_length;
  AddEpisodes(st, run.scores);

  // Buffer update with the whole batch: replay rescoring first, then new
  // levels, then mutants.
  std::vector<Candidate> cands;
  auto add = [&](int lane, std::vector<CandidateRecord>& log) {
    const auto& sc = run.scores[lane];
    cands.push_back({levels[lane], sc.score, sc.max_return, &metrics[lane]});
    log.push_back({levels[lane], sc.score, sc.max_return});
  };
  for (int l = n_new; l < n_new + n_replay; ++l) add(l, st.replay_candidates);
  for (int l = 0; l < n_new; ++l) add(l, st.new_candidates);
  for (int l = n_new + n_replay; l < total; ++l) add(l, st.mutant_candidates);
  s.buffer.update(cands, iter);

  // Robust: learn from replay lanes only. Otherwise also from new lanes,
  // mirroring the sequential variant. Mutant lanes never drive updates.
  std::vector<int> train;
  if (!cfg_.plr.robust) train = Range(0, n_new);
  for (int l = n_new; l < n_new + n_replay; ++l) train.push_back(l);
  if (!train.empty()) {
    const auto up = update_student(s, run, train, it.fold_in(kTagUpdate), reducer);
    st.updated = true;
    st.loss = up.loss;
    st.grad_norm = up.grad_norm;
  }
  return st;
}

}  // namespace ued::runners
