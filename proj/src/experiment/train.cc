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

#include "ued/experiment/train.h"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ued/amaze/level_io.h"
#include "ued/common/errors.h"
#include "ued/experiment/evaluate.h"

namespace ued::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json RngJson(const Rng& r) { return {{"key", r.key()}, {"counter", r.counter()}}; }
Rng RngFrom(const json& j) {
  return Rng::FromState(j.at("key").get<std::uint64_t>(), j.at("counter").get<std::uint64_t>());
}

json SetJson(const runners::LevelSetStats& s) {
  return {{"count", s.count},
          {"solvable", s.solvable},
          {"mean_walls", s.mean_walls()},
          {"mean_path_length", s.mean_path_length()}};
}

json StatsJson(const runners::IterationStats& st) {
  return {{"iteration", st.iteration},
          {"env_steps", st.env_steps},
          {"branch", st.branch},
          {"updated", st.updated},
          {"episodes", st.episodes},
          {"solved_rate", st.solved_rate()},
          {"mean_return", st.mean_return()},
          {"loss",
           {{"total", st.loss.total},
            {"policy", st.loss.policy},
            {"value", st.loss.value},
            {"entropy", st.loss.entropy},
            {"approx_kl", st.loss.approx_kl},
            {"clip_fraction", st.loss.clip_fraction}}},
          {"grad_norm", st.grad_norm},
          {"buffer",
           {{"size", st.buffer_size},
            {"mean_score", st.buffer_mean_score},
            {"max_score", st.buffer_max_score}}},
          {"levels",
           {{"fresh", SetJson(st.fresh)},
            {"replay", SetJson(st.replay)},
            {"mutant", SetJson(st.mutant)}}},
          {"lanes",
           {{"new", st.lanes_new}, {"replay", st.lanes_replay}, {"mutant", st.lanes_mutant}}},
          {"mean_regret", st.mean_regret}};
}

// Keeps the JSON-lines records whose iteration is <= last.
void TruncateLog(const fs::path& path, std::int64_t last) {
  if (!fs::exists(path)) return;
  std::ifstream in(path);
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      if (json::parse(line).at("iteration").get<std::int64_t>() <= last) kept += line + "\n";
    } catch (const json::exception&) {
      break;  // torn final line of a killed run
    }
  }
  in.close();
  std::ofstream out(path, std::ios::trunc);
  out << kept;
}

void WriteText(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

std::string CheckpointName(std::int64_t iteration) {
  return "ckpt_" + std::to_string(iteration);
}

void SaveCheckpoint(const ExperimentConfig& cfg, const runners::ShardedRunner::State& state,
                    const fs::path& run_dir) {
  const std::string name = CheckpointName(state.iteration);
  agents::WriteCheckpoint(run_dir / name, MakeCheckpoint(cfg, state));
  WriteText(run_dir / "latest", name + "\n");
}

std::string Num(double v) {
  std::ostringstream s;
  s.precision(9);
  s << v;
  return s.str();
}

void WriteSummary(const fs::path& run_dir) {
  std::map<std::int64_t, double> eval;
  {
    std::ifstream in(run_dir / "eval.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      eval[j.at("iteration").get<std::int64_t>()] = j.at("mean_solved_rate").get<double>();
    }
  }
  std::ifstream in(run_dir / "metrics.jsonl");
  std::ostringstream out;
  out << "iteration,env_steps,branch,updated,episodes,solved_rate,mean_return,loss,"
         "buffer_size,buffer_mean_score,fresh_path_length,replay_path_length,"
         "eval_solved_rate\n";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const auto it = j.at("iteration").get<std::int64_t>();
    out << it << ',' << j["env_steps"].get<std::int64_t>() << ','
        << j["branch"].get<std::string>() << ',' << (j["updated"].get<bool>() ? 1 : 0) << ','
        << j["episodes"].get<int>() << ',' << Num(j["solved_rate"].get<double>()) << ','
        << Num(j["mean_return"].get<double>()) << ','
        << (j["loss"]["total"].is_number() ? Num(j["loss"]["total"].get<double>()) : "nan")
        << ',' << j["buffer"]["size"].get<int>() << ','
        << Num(j["buffer"]["mean_score"].get<double>()) << ','
        << Num(j["levels"]["fresh"]["mean_path_length"].get<double>()) << ','
        << Num(j["levels"]["replay"]["mean_path_length"].get<double>()) << ',';
    if (eval.count(it)) out << Num(eval[it]);
    out << '\n';
  }
  WriteText(run_dir / "summary.csv", out.str());
}

}  // namespace

fs::path OutputRoot() {
  const char* env = std::getenv("UED_OUTPUT_ROOT");
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("runs");
}

fs::path RunDirectory(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) {
    return OutputRoot() / (cfg.runner + "_s" + std::to_string(cfg.seed));
  }
  const fs::path p(cfg.output_dir);
  return p.is_absolute() ? p : OutputRoot() / p;
}

agents::Checkpoint MakeCheckpoint(const ExperimentConfig& cfg,
                                  const runners::ShardedRunner::State& state) {
  agents::Checkpoint ck;
  const auto& s0 = state.shards.at(0);
  for (std::size_t i = 0; i < s0.students.size(); ++i) {
    agents::AddAgent(ck, "student" + std::to_string(i), s0.students[i]);
  }
  if (s0.teacher) agents::AddAgent(ck, "teacher", *s0.teacher);
  ck.meta["config"] = ToJson(cfg);
  ck.meta["config_hash"] = ConfigHash(cfg);
  ck.meta["iteration"] = state.iteration;
  ck.meta["decision_rng"] = RngJson(state.decision_rng);
  json shards = json::array();
  for (const auto& s : state.shards) {
    json entries = json::array();
    for (const auto& e : s.buffer.entries()) {
      entries.push_back({{"level", amaze::EncodeLevel(e.level)},
                         {"score", e.score},
                         {"max_return", e.max_return},
                         {"last_sampled_iter", e.last_sampled_iter},
                         {"insert_iter", e.insert_iter}});
    }
    shards.push_back({{"rng", RngJson(s.rng)},
                      {"iteration", s.iteration},
                      {"env_steps", s.env_steps},
                      {"n_updates", s.n_updates},
                      {"n_replay_iterations", s.n_replay_iterations},
                      {"buffer", {{"capacity", s.buffer.capacity()}, {"entries", entries}}}});
  }
  ck.meta["shards"] = shards;
  return ck;
}

runners::ShardedRunner::State RestoreState(const agents::Checkpoint& ck,
                                           const runners::ShardedRunner& runner,
                                           std::uint64_t seed) {
  auto state = runner.init(seed);
  const json& meta = ck.meta;
  const json& shards = meta.at("shards");
  if (shards.size() != state.shards.size()) {
    throw ConfigError("checkpoint has " + std::to_string(shards.size()) +
                      " shards, config asks for " + std::to_string(state.shards.size()));
  }
  state.iteration = meta.at("iteration").get<std::int64_t>();
  state.decision_rng = RngFrom(meta.at("decision_rng"));
  for (std::size_t d = 0; d < shards.size(); ++d) {
    auto& s = state.shards[d];
    const json& j = shards[d];
    for (std::size_t i = 0; i < s.students.size(); ++i) {
      agents::LoadAgent(ck, "student" + std::to_string(i), s.students[i]);
    }
    if (s.teacher) agents::LoadAgent(ck, "teacher", *s.teacher);
    s.rng = RngFrom(j.at("rng"));
    s.iteration = j.at("iteration").get<std::int64_t>();
    s.env_steps = j.at("env_steps").get<std::int64_t>();
    s.n_updates = j.at("n_updates").get<std::int64_t>();
    s.n_replay_iterations = j.at("n_replay_iterations").get<std::int64_t>();
    std::vector<runners::LevelBufferEntry> entries;
    for (const json& e : j.at("buffer").at("entries")) {
      runners::LevelBufferEntry x;
      x.level = amaze::DecodeLevel(e.at("level").get<std::string>());
      x.score = e.at("score").get<double>();
      x.max_return = e.at("max_return").get<double>();
      x.last_sampled_iter = e.at("last_sampled_iter").get<std::int64_t>();
      x.insert_iter = e.at("insert_iter").get<std::int64_t>();
      entries.push_back(std::move(x));
    }
    s.buffer = runners::LevelBuffer::FromEntries(j.at("buffer").at("capacity").get<int>(),
                                                 std::move(entries));
  }
  return state;
}

ExperimentConfig CheckpointConfig(const agents::Checkpoint& ck) {
  if (!ck.meta.contains("config")) throw ValidationError("checkpoint carries no config");
  return FromJson(ck.meta.at("config"));
}

std::optional<fs::path> LatestCheckpoint(const fs::path& run_dir) {
  std::ifstream in(run_dir / "latest");
  if (!in) return std::nullopt;
  std::string name;
  std::getline(in, name);
  if (name.empty()) return std::nullopt;
  return run_dir / name;
}

TrainResult Train(const ExperimentConfig& cfg, const fs::path& run_dir, const TrainOptions& opt) {
  ValidateExperimentConfig(cfg);
  const auto eval_levels = ResolveEvalLevels(cfg.eval.levels);
  fs::create_directories(run_dir);

  const runners::ShardedRunner runner(cfg.run, cfg.n_shards);
  const auto& policy = runner.shard_runner().student_policy();
  const std::string hash = ConfigHash(cfg);

  TrainResult result;
  result.run_dir = run_dir;
  runners::ShardedRunner::State state;
  const auto latest = opt.resume ? LatestCheckpoint(run_dir) : std::nullopt;
  if (latest) {
    const auto ck = agents::ReadCheckpoint(*latest);
    if (ck.meta.value("config_hash", std::string()) != hash) {
      throw ConfigError("config differs from the run in " + run_dir.string());
    }
    state = RestoreState(ck, runner, cfg.seed);
    for (const char* f : {"metrics.jsonl", "eval.jsonl", "timing.jsonl"}) {
      TruncateLog(run_dir / f, state.iteration);
    }
    result.start_iteration = state.iteration;
  } else {
    if (!opt.resume && fs::exists(run_dir / "metrics.jsonl") &&
        fs::file_size(run_dir / "metrics.jsonl") > 0) {
      throw ConfigError("run directory " + run_dir.string() +
                        " already holds a run; resume it or choose another output_dir");
    }
    state = runner.init(cfg.seed);
    for (const char* f : {"metrics.jsonl", "eval.jsonl", "timing.jsonl"}) {
      std::ofstream(run_dir / f, std::ios::trunc);
    }
  }

  json manifest = {{"config", ToJson(cfg)}, {"config_hash", hash}, {"format", 1}};
  WriteText(run_dir / "manifest.json", manifest.dump(2) + "\n");

  std::ofstream metrics(run_dir / "metrics.jsonl", std::ios::app);
  std::ofstream evals(run_dir / "eval.jsonl", std::ios::app);
  std::ofstream timing(run_dir / "timing.jsonl", std::ios::app);
  const Rng eval_rng = Rng(cfg.seed).fold_in(3);

  std::int64_t ran = 0;
  std::int64_t last_ckpt = latest ? state.iteration : -1;
  while (state.iteration < cfg.num_updates) {
    if (opt.stop_after && ran >= *opt.stop_after) {
      result.iteration = state.iteration;
      return result;
    }
    const auto t0 = std::chrono::steady_clock::now();
    runners::IterationStats st;
    try {
      st = runner.step(state);
    } catch (const NonFiniteError& e) {
      const fs::path crash = run_dir / ("ckpt_crash_" + std::to_string(state.iteration));
      auto ck = MakeCheckpoint(cfg, state);
      ck.meta["crash"] = e.what();
      agents::WriteCheckpoint(crash, ck);
      throw TrainingFault(std::string("non-finite training signal at iteration ") +
                          std::to_string(state.iteration) + ": " + e.what() +
                          " (state saved to " + crash.string() + ")");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ran++;
    const std::int64_t it = state.iteration;

    metrics << StatsJson(st).dump() << '\n' << std::flush;
    const std::int64_t steps_now = st.env_steps;
    timing << json{{"iteration", it}, {"seconds", secs}}.dump() << '\n' << std::flush;

    if (cfg.eval.interval > 0 && it % cfg.eval.interval == 0) {
      const auto& student = state.shards[0].students[0];
      const auto r = Evaluate(policy, student.params, cfg.run.env, eval_levels,
                              cfg.eval.episodes_per_level, cfg.eval.greedy,
                              eval_rng.split(static_cast<std::uint64_t>(it)));
      json rec = ToJson(r);
      rec["iteration"] = it;
      rec["env_steps"] = steps_now;
      evals << rec.dump() << '\n' << std::flush;
      result.eval_records++;
      if (opt.log) {
        *opt.log << "eval iter " << it << " solved " << r.mean_solved_rate() << " return "
                 << r.mean_return() << "\n";
      }
    }
    if (cfg.checkpoint_interval > 0 && it % cfg.checkpoint_interval == 0) {
      SaveCheckpoint(cfg, state, run_dir);
      last_ckpt = it;
    }
    if (opt.log && cfg.log_interval > 0 && it % cfg.log_interval == 0) {
      *opt.log << "iter " << it << " steps " << steps_now << " " << st.branch << " solved "
               << st.solved_rate() << " return " << st.mean_return() << " buffer "
               << st.buffer_size << " (" << secs << "s)\n"
               << std::flush;
    }
  }
  if (last_ckpt != state.iteration) SaveCheckpoint(cfg, state, run_dir);
  metrics.close();
  evals.close();
  WriteSummary(run_dir);
  result.iteration = state.iteration;
  result.completed = true;
  return result;
}

}  // namespace ued::experiment
