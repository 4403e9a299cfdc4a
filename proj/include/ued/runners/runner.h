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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ued/agents/agent.h"
#include "ued/agents/policy.h"
#include "ued/agents/ppo.h"
#include "ued/amaze/level.h"
#include "ued/amaze/metrics.h"
#include "ued/amaze/maze.h"
#include "ued/amaze/teacher.h"
#include "ued/core/static_params.h"
#include "ued/runners/level_buffer.h"

namespace ued::runners {

enum class RunnerKind {
  kDr,
  kPaired,
  kPlr,          // PLR / Robust PLR, plus ACCEL when accel.enabled
  kPlrParallel,  // PLR-parallel, plus ACCEL-parallel when accel.enabled
};

struct AccelConfig {
  bool enabled = false;
  int n_mutations = 20;
  int subsample_size = 4;  // q
  double goal_move_prob = 0.05;
};

struct PairedConfig {
  int population = 2;
  double generator_entropy_coef = 0.05;
  bool minimax = false;  // teacher reward = -return of student 0
};

/// Layer widths shared by the student and teacher networks; input and
/// output sizes are derived from the environment.
struct ModelConfig {
  int tile_embed_dim = 8;
  int aux_embed_dim = 4;
  int encoder_dim = 128;
  int hidden = 256;
};

struct RunnerConfig {
  RunnerKind kind = RunnerKind::kDr;
  StaticParams env;
  ModelConfig model;
  agents::PpoConfig ppo;
  int rollout_length = 256;
  int n_envs = 32;
  PlrConfig plr;
  AccelConfig accel;
  PairedConfig paired;
};

void ValidateRunnerConfig(const RunnerConfig& cfg);

agents::NetSpec StudentNetSpec(const StaticParams& env, const ModelConfig& m);
agents::NetSpec TeacherNetSpec(const StaticParams& env, const ModelConfig& m);

/// Everything one iteration threads forward. The per-iteration random
/// stream is rng.split(iteration), so (rng, iteration) fully determine it.
struct RunnerState {
  Rng rng;
  std::int64_t iteration = 0;
  std::int64_t env_steps = 0;
  std::int64_t n_updates = 0;         // student PPO updates performed
  std::int64_t n_replay_iterations = 0;
  std::vector<agents::Agent> students;
  std::optional<agents::Agent> teacher;
  LevelBuffer buffer;
};

struct LevelSetStats {
  int count = 0;
  int solvable = 0;
  double walls_sum = 0.0;
  double path_sum = 0.0;  // over solvable levels

  void add(const amaze::EnvMetrics& m);
  void merge(const LevelSetStats& o);
  double mean_walls() const { return count ? walls_sum / count : 0.0; }
  double mean_path_length() const { return solvable ? path_sum / solvable : 0.0; }
  double solvable_fraction() const { return count ? double(solvable) / count : 0.0; }
};

struct CandidateRecord {
  amaze::MazeLevel level;
  double score = 0.0;
  double max_return = 0.0;
};

struct IterationStats {
  std::int64_t iteration = 0;  // value after this iteration
  std::int64_t env_steps = 0;
  std::string branch;          // dr | paired | new | replay | parallel | bootstrap
  bool updated = false;        // student PPO update ran
  int episodes = 0;
  int solved = 0;
  double return_sum = 0.0;
  LevelSetStats fresh;
  LevelSetStats replay;
  LevelSetStats mutant;
  int buffer_size = 0;
  double buffer_mean_score = 0.0;
  double buffer_max_score = 0.0;
  agents::LossStats loss;
  double grad_norm = 0.0;
  double mean_regret = 0.0;  // PAIRED teacher reward
  int n_mutants = 0;
  int lanes_new = 0;
  int lanes_replay = 0;
  int lanes_mutant = 0;

  // Candidate sets and replay draws, kept for equivalence checks.
  std::vector<int> replay_indices;
  std::vector<CandidateRecord> new_candidates;
  std::vector<CandidateRecord> replay_candidates;
  std::vector<CandidateRecord> mutant_candidates;
  std::vector<int> mutant_parents;  // lane offsets within the replay lanes

  double mean_return() const { return episodes ? return_sum / episodes : 0.0; }
  double solved_rate() const { return episodes ? double(solved) / episodes : 0.0; }
};

class Runner {
 public:
  using Mutator = std::function<amaze::MazeLevel(Rng, const amaze::MazeLevel&)>;

  explicit Runner(RunnerConfig cfg);

  const RunnerConfig& config() const { return cfg_; }
  const agents::RecurrentPolicy<float>& student_policy() const { return student_; }
  const agents::RecurrentPolicy<float>& teacher_policy() const { return teacher_; }
  const amaze::MazeEnv& env() const { return env_; }

  /// Fresh state. Agents come from `agent_rng`, iterations from `iter_rng`.
  RunnerState init(Rng agent_rng, Rng iter_rng) const;
  RunnerState init(std::uint64_t seed) const;

  /// Overrides for one iteration. `replay` forces the PLR branch (for the
  /// parallel variants, false forces the all-new bootstrap batch).
  struct Plan {
    std::optional<bool> replay;
  };

  /// The branch an unforced iteration would take.
  bool decide_replay(const RunnerState& s) const;
  bool decide_replay(Rng base, std::int64_t iteration, bool buffer_nonempty) const;

  IterationStats step(RunnerState& s) const;
  IterationStats step(RunnerState& s, const Plan& plan,
                      agents::GradientReducer& reducer) const;

  // Replaces the ACCEL edit operator (tests use it to force no-op edits).
  void set_mutator(Mutator m) { mutator_ = std::move(m); }

 private:
  struct StudentRun;

  StudentRun run_student(const agents::Agent& agent,
                         std::span<const amaze::MazeLevel> levels,
                         std::span<const double> prior_max_return, Rng rng) const;
  agents::UpdateStats update_student(RunnerState& s, const StudentRun& run,
                                     std::span<const int> lanes, Rng rng,
                                     agents::GradientReducer& reducer) const;
  std::vector<amaze::MazeLevel> fresh_levels(Rng rng, int n) const;

  IterationStats step_dr(RunnerState& s, Rng it, agents::GradientReducer& r) const;
  IterationStats step_paired(RunnerState& s, Rng it, agents::GradientReducer& r) const;
  IterationStats step_plr(RunnerState& s, Rng it, bool replay,
                          agents::GradientReducer& r) const;
  IterationStats step_parallel(RunnerState& s, Rng it, bool replay,
                               agents::GradientReducer& r) const;

  RunnerConfig cfg_;
  amaze::MazeEnv env_;
  amaze::MazeTeacherEnv teacher_env_;
  agents::RecurrentPolicy<float> student_;
  agents::RecurrentPolicy<float> teacher_;
  Mutator mutator_;
};

/// Relative population regret: max_k returns[k] - mean_k returns[k].
double PopulationRegret(std::span<const double> returns);

}  // namespace ued::runners
