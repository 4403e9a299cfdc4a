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

#include "ued/runners/level_buffer.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ued/common/errors.h"

namespace ued::runners {

void ValidatePlrConfig(const PlrConfig& c) {
  if (!(c.replay_rate >= 0.0 && c.replay_rate <= 1.0)) {
    throw ConfigError("plr.replay_rate must lie in [0, 1]");
  }
  if (c.buffer_size < 1) throw ConfigError("plr.buffer_size must be >= 1");
  if (!(c.temperature > 0.0)) throw ConfigError("plr.temperature must be > 0");
  if (!(c.staleness_coef >= 0.0 && c.staleness_coef <= 1.0)) {
    throw ConfigError("plr.staleness_coef must lie in [0, 1]");
  }
}

LevelBuffer::LevelBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw ConfigError("buffer capacity must be >= 0");
  entries_.reserve(capacity);
}

int LevelBuffer::find(const amaze::MazeLevel& level) const {
  const std::size_t h = amaze::LevelHash(level);
  for (int i = 0; i < size(); ++i) {
    if (entries_[i].hash == h && entries_[i].level == level) return i;
  }
  return -1;
}

std::vector<double> LevelBuffer::probabilities(const PlrConfig& cfg,
                                               std::int64_t current_iter) const {
  const int n = size();
  if (n == 0) throw ContractViolation("probabilities of an empty buffer");
  std::vector<double> ps(n, 0.0);
  if (cfg.prioritization == Prioritization::kRank) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return entries_[a].score > entries_[b].score;
    });
    for (int r = 0; r < n; ++r) {
      ps[order[r]] = std::pow(1.0 / (r + 1), 1.0 / cfg.temperature);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      ps[i] = std::pow(std::max(entries_[i].score, 0.0), 1.0 / cfg.temperature);
    }
  }
  double total = std::accumulate(ps.begin(), ps.end(), 0.0);
  if (total <= 0.0) {
    std::fill(ps.begin(), ps.end(), 1.0 / n);
  } else {
    for (double& p : ps) p /= total;
  }

  std::vector<double> pc(n);
  double stale_total = 0.0;
  for (int i = 0; i < n; ++i) {
    pc[i] = static_cast<double>(std::max<std::int64_t>(
        0, current_iter - entries_[i].last_sampled_iter));
    stale_total += pc[i];
  }
  for (double& p : pc) p = stale_total > 0.0 ? p / stale_total : 1.0 / n;

  const double rho = cfg.staleness_coef;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = (1.0 - rho) * ps[i] + rho * pc[i];
  return out;
}

std::vector<int> LevelBuffer::sample(Rng rng, int n, const PlrConfig& cfg,
                                     std::int64_t current_iter) {
  const std::vector<double> p = probabilities(cfg, current_iter);
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  std::vector<int> out(n);
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out[k] = std::min(static_cast<int>(it - cdf.begin()), size() - 1);
  }
  for (int i : out) entries_[i].last_sampled_iter = current_iter;
  return out;
}

int LevelBuffer::update(std::span<const Candidate> candidates, std::int64_t iter) {
  int inserted = 0;
  for (const Candidate& c : candidates) {
    const int dup = find(c.level);
    if (dup >= 0) {
      entries_[dup].score = c.score;
      entries_[dup].max_return = std::max(entries_[dup].max_return, c.max_return);
      continue;
    }
    LevelBufferEntry e;
    e.level = c.level;
    e.score = c.score;
    e.max_return = c.max_return;
    e.last_sampled_iter = iter;
    e.insert_iter = iter;
    e.hash = amaze::LevelHash(c.level);
    e.metrics = c.metrics ? *c.metrics : amaze::ComputeEnvMetrics(c.level);
    if (!full()) {
      entries_.push_back(std::move(e));
      ++inserted;
      continue;
    }
    if (capacity_ == 0) continue;
    int victim = 0;
    for (int i = 1; i < size(); ++i) {
      const auto& a = entries_[i];
      const auto& b = entries_[victim];
      if (a.score < b.score ||
          (a.score == b.score && a.last_sampled_iter < b.last_sampled_iter)) {
        victim = i;
      }
    }
    if (c.score > entries_[victim].score) {
      entries_[victim] = std::move(e);
      ++inserted;
    }
  }
  return inserted;
}

double LevelBuffer::min_score() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = i ? std::min(m, entries_[i].score) : entries_[i].score;
  return m;
}

double LevelBuffer::mean_score() const {
  if (empty()) return 0.0;
  double s = 0.0;
  for (const auto& e : entries_) s += e.score;
  return s / size();
}

double LevelBuffer::max_score() const {
  double m = 0.0;
  for (int i = 0; i < size(); ++i) m = i ? std::max(m, entries_[i].score) : entries_[i].score;
  return m;
}

LevelBuffer LevelBuffer::FromEntries(int capacity, std::vector<LevelBufferEntry> entries) {
  if (static_cast<int>(entries.size()) > capacity) {
    throw ValidationError("buffer holds more entries than its capacity");
  }
  LevelBuffer b(capacity);
  for (auto& e : entries) {
    e.hash = amaze::LevelHash(e.level);
    e.metrics = amaze::ComputeEnvMetrics(e.level);
  }
  b.entries_ = std::move(entries);
  return b;
}

bool SampleReplayDecision(Rng rng, const LevelBuffer& buffer, double p) {
  if (buffer.empty()) return false;
  return rng.uniform() < p;
}

}  // namespace ued::runners
