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

#include "ued/experiment/bench.h"

#include <algorithm>
#include <barrier>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "ued/amaze/maze.h"
#include "ued/common/errors.h"
#include "ued/common/rng.h"
#include "ued/core/batch_env.h"

namespace ued::experiment {

namespace {

// Runs body(begin, end) over [0, n) split across persistent workers, once
// per call to run(). The calling thread takes the first chunk.
class LanePool {
 public:
  explicit LanePool(int threads)
      : threads_(std::max(1, threads)), start_(threads_), done_(threads_) {
    for (int w = 1; w < threads_; ++w) {
      workers_.emplace_back([this, w] {
        for (;;) {
          start_.arrive_and_wait();
          if (stop_) return;
          chunk(w);
          done_.arrive_and_wait();
        }
      });
    }
  }
  ~LanePool() {
    stop_ = true;
    if (threads_ > 1) start_.arrive_and_wait();
  }

  void run(int n, const std::function<void(int, int)>& body) {
    n_ = n;
    body_ = &body;
    if (threads_ == 1) {
      body(0, n);
      return;
    }
    start_.arrive_and_wait();
    chunk(0);
    done_.arrive_and_wait();
  }

 private:
  void chunk(int w) {
    const int per = (n_ + threads_ - 1) / threads_;
    const int b = std::min(n_, w * per);
    const int e = std::min(n_, b + per);
    if (b < e) (*body_)(b, e);
  }

  int threads_;
  std::barrier<> start_;
  std::barrier<> done_;
  std::vector<std::jthread> workers_;
  int n_ = 0;
  const std::function<void(int, int)>* body_ = nullptr;
  bool stop_ = false;
};

}  // namespace

std::vector<SpsRow> BenchmarkSps(const StaticParams& params, std::span<const int> batches,
                                 const SpsOptions& opt) {
  if (opt.n_steps < 1) throw ConfigError("bench-sps: n_steps must be >= 1");
  if (batches.empty()) throw ConfigError("bench-sps: no batch sizes given");
  for (int b : batches) {
    if (b < 1) throw ConfigError("bench-sps: batch sizes must be >= 1");
  }
  ValidateStaticParams(params);
  const int threads =
      opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  const amaze::MazeEnv env(params);
  LanePool pool(threads);
  const Rng root(opt.seed);

  std::vector<SpsRow> rows;
  for (int batch : batches) {
    const BatchEnv<amaze::MazeEnv> benv(env, BatchShape{1, 1, batch});
    const Rng brng = root.split(static_cast<std::uint64_t>(batch));
    std::vector<amaze::EnvState> states;
    for (auto& r : benv.reset(brng.fold_in(0))) states.push_back(std::move(r.state));
    std::vector<int> actions(batch);
    std::vector<float> rewards(batch);
    std::vector<std::uint8_t> dones(batch);
    std::vector<amaze::Observation> obs(batch);

    auto one_step = [&](int t) {
      const Rng step_rng = brng.fold_in(1).split(static_cast<std::uint64_t>(t));
      const std::function<void(int, int)> body = [&](int b, int e) {
        for (int i = b; i < e; ++i) {
          Rng ar = step_rng.split(static_cast<std::uint64_t>(i));
          const int a = static_cast<int>(ar.uniform_index(amaze::kNumActions));
          auto r = env.step(ar, states[i], a);
          rewards[i] = r.reward;
          dones[i] = r.done;
          obs[i] = r.observation;
          states[i] = r.done ? env.auto_reset(r.state).state : std::move(r.state);
        }
      };
      pool.run(batch, body);
    };

    for (int t = 0; t < opt.warmup_steps; ++t) one_step(-1 - t);
    const auto t0 = std::chrono::steady_clock::now();
    for (int t = 0; t < opt.n_steps; ++t) one_step(t);
    const auto t1 = std::chrono::steady_clock::now();
    SpsRow row;
    row.batch = batch;
    row.env_steps = static_cast<std::int64_t>(batch) * opt.n_steps;
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
    rows.push_back(row);
  }
  return rows;
}

std::string FormatSpsTable(std::span<const SpsRow> rows) {
  std::string out = "  batch        steps    seconds            SPS   ns/env-step\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%7d %12lld %10.3f %14.0f %13.1f\n", r.batch,
                  static_cast<long long>(r.env_steps), r.seconds, r.sps(), r.ns_per_env_step());
    out += buf;
  }
  return out;
}

void WriteSpsCsv(const std::filesystem::path& path, std::span<const SpsRow> rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "batch,env_steps,seconds,sps,ns_per_env_step\n";
  for (const auto& r : rows) {
    out << r.batch << ',' << r.env_steps << ',' << r.seconds << ',' << r.sps() << ','
        << r.ns_per_env_step() << '\n';
  }
}

}  // namespace ued::experiment
