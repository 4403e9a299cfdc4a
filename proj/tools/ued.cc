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

// ued: command line front end for autocurriculum training.
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 runtime fault.
// UED_OUTPUT_ROOT sets where runs, benchmark CSVs and levels are written.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "ued/agents/checkpoint.h"
#include "ued/amaze/assets.h"
#include "ued/amaze/level_io.h"
#include "ued/common/errors.h"
#include "ued/experiment/bench.h"
#include "ued/experiment/config.h"
#include "ued/experiment/evaluate.h"
#include "ued/experiment/train.h"
#include "ued/runners/runner.h"

namespace fs = std::filesystem;
using namespace ued;
using namespace ued::experiment;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeFault = 3;

struct TrainArgs {
  std::string config_file;
  bool resume = false;
  bool quiet = false;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

int RunTrain(const TrainArgs& a) {
  ConfigSources src;
  if (!a.config_file.empty()) src.file = LoadConfigFile(a.config_file);
  for (const auto& [key, opt] : a.options) {
    if (opt->count() > 0) src.overrides.emplace_back(key, a.values.at(key));
  }
  const ExperimentConfig cfg = ResolveConfig(src);
  const fs::path dir = RunDirectory(cfg);
  std::cout << "run directory: " << dir.string() << "\n";
  TrainOptions opt;
  opt.resume = a.resume;
  opt.log = a.quiet ? nullptr : &std::cout;
  const auto r = Train(cfg, dir, opt);
  std::cout << "finished at iteration " << r.iteration << " (" << r.eval_records
            << " evaluations)\n";
  return kOk;
}

struct EvalArgs {
  std::string checkpoint;
  std::string run_dir;
  std::vector<std::string> levels;
  int episodes = 10;
  bool sample = false;
  std::uint64_t seed = 0;
};

int RunEval(const EvalArgs& a) {
  fs::path path = a.checkpoint;
  if (path.empty()) {
    if (a.run_dir.empty()) throw ConfigError("eval needs --checkpoint or --run");
    const auto latest = LatestCheckpoint(a.run_dir);
    if (!latest) throw ConfigError("no checkpoint recorded in " + a.run_dir);
    path = *latest;
  }
  if (!fs::exists(path)) throw ConfigError("checkpoint " + path.string() + " does not exist");
  const auto ck = agents::ReadCheckpoint(path);
  const ExperimentConfig cfg = CheckpointConfig(ck);
  const runners::Runner runner(cfg.run);
  auto params = runner.student_policy().zeros();
  agents::LoadParams(ck, "student0/params", params);
  const auto levels = ResolveEvalLevels(a.levels);
  const auto r = Evaluate(runner.student_policy(), params, cfg.run.env, levels, a.episodes,
                          !a.sample, Rng(a.seed));
  std::printf("%-24s %9s %12s %12s\n", "level", "episodes", "solved_rate", "mean_return");
  for (const auto& l : r.levels) {
    std::printf("%-24s %9d %12.3f %12.3f\n", l.name.c_str(), l.episodes, l.solved_rate(),
                l.mean_return());
  }
  std::printf("%-24s %9d %12.3f %12.3f\n", "mean", r.episodes(), r.mean_solved_rate(),
              r.mean_return());
  return kOk;
}

struct BenchArgs {
  std::vector<int> batches = {1, 32, 256, 1024};
  int steps = 1000;
  int threads = 0;
  int height = 13;
  int width = 13;
  std::string csv;
};

int RunBench(const BenchArgs& a) {
  StaticParams p;
  p.height = a.height;
  p.width = a.width;
  SpsOptions opt;
  opt.n_steps = a.steps;
  opt.threads = a.threads;
  const auto rows = BenchmarkSps(p, a.batches, opt);
  std::cout << FormatSpsTable(rows);
  const fs::path csv = a.csv.empty() ? OutputRoot() / "bench_sps.csv" : fs::path(a.csv);
  WriteSpsCsv(csv, rows);
  std::cout << "wrote " << csv.string() << "\n";
  return kOk;
}

int RunMakeLevels(const std::string& out_dir, const std::vector<std::string>& names) {
  const fs::path dir = out_dir.empty() ? OutputRoot() / "levels" : fs::path(out_dir);
  fs::create_directories(dir);
  const auto chosen = names.empty() ? amaze::ShippedLevelNames() : names;
  for (const auto& name : chosen) {
    const auto level = amaze::ShippedLevel(name);
    amaze::SaveLevelFile(dir / (name + ".txt"), level);
    std::cout << (dir / (name + ".txt")).string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised environment design on procedural mazes"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Train a student with the configured runner");
  tr->add_option("-c,--config", train.config_file, "JSON config file");
  tr->add_flag("--resume", train.resume, "Continue from the run's latest checkpoint");
  tr->add_flag("-q,--quiet", train.quiet, "No progress output");
  for (const auto& key : ConfigKeys()) {
    train.values[key];
    auto* o = tr->add_option("--" + key, train.values[key], "Config override");
    train.options.emplace_back(key, o);
  }

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Evaluate a checkpoint on test mazes");
  e->add_option("--checkpoint", ev.checkpoint, "Checkpoint file");
  e->add_option("--run", ev.run_dir, "Run directory (uses its latest checkpoint)");
  e->add_option("--levels", ev.levels, "Shipped level names or level files")->delimiter(',');
  e->add_option("--episodes", ev.episodes, "Episodes per level")->check(CLI::PositiveNumber);
  e->add_flag("--sample", ev.sample, "Sample actions instead of acting greedily");
  e->add_option("--seed", ev.seed, "Seed for sampled actions");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench-sps", "Environment steps per second by batch size");
  b->add_option("--batches", bench.batches, "Batch sizes")->delimiter(',');
  b->add_option("--steps", bench.steps, "Batched steps per batch size");
  b->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  b->add_option("--height", bench.height, "Grid height");
  b->add_option("--width", bench.width, "Grid width");
  b->add_option("--csv", bench.csv, "CSV output path");

  std::string levels_out;
  std::vector<std::string> level_names;
  auto* m = app.add_subcommand("make-levels", "Write the shipped test mazes to files");
  m->add_option("-o,--out", levels_out, "Output directory");
  m->add_option("--names", level_names, "Subset of level names")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kConfigError;
  }

  try {
    if (*tr) return RunTrain(train);
    if (*e) return RunEval(ev);
    if (*b) return RunBench(bench);
    if (*m) return RunMakeLevels(levels_out, level_names);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kConfigError;
  } catch (const ParseError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kRuntimeFault;
  }
  return kOk;
}
