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
#include <span>
#include <vector>

#include "ued/amaze/level.h"
#include "ued/amaze/metrics.h"
#include "ued/common/rng.h"
#include "ued/runners/scoring.h"

namespace ued::runners {

enum class Prioritization { kRank, kProportional };

struct PlrConfig {
  double replay_rate = 0.5;
  int buffer_size = 4000;
  ScoreFn score_fn = ScoreFn::kMaxMc;
  Prioritization prioritization = Prioritization::kRank;
  double temperature = 0.3;
  double staleness_coef = 0.3;
  bool robust = true;
  bool discounted_max_return = false;
};

void ValidatePlrConfig(const PlrConfig& cfg);

struct LevelBufferEntry {
  amaze::MazeLevel level;
  double score = 0.0;
  double max_return = 0.0;
  std::int64_t last_sampled_iter = 0;
  std::int64_t insert_iter = 0;
  std::size_t hash = 0;
  amaze::EnvMetrics metrics;  // cached at insertion

  bool operator==(const LevelBufferEntry& o) const {
    return level == o.level && score == o.score && max_return == o.max_return &&
           last_sampled_iter == o.last_sampled_iter && insert_iter == o.insert_iter;
  }
};

struct Candidate {
  amaze::MazeLevel level;
  double score = 0.0;
  double max_return = 0.0;
  // Optional precomputed metrics; computed on insertion when absent.
  const amaze::EnvMetrics* metrics = nullptr;
};

/// Fixed-capacity curated level store with min-score eviction.
class LevelBuffer {
 public:
  explicit LevelBuffer(int capacity = 0);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return size() >= capacity_; }
  const std::vector<LevelBufferEntry>& entries() const { return entries_; }
  const LevelBufferEntry& operator[](int i) const { return entries_[i]; }

  // Index of an entry with exactly this level, or -1.
  int find(const amaze::MazeLevel& level) const;

  /// P = (1 - rho) P_S + rho P_C. Rank 1 is the highest score; equal
  /// scores rank by index. Staleness is uniform when every entry is fresh.
  std::vector<double> probabilities(const PlrConfig& cfg,
                                    std::int64_t current_iter) const;

  /// n draws with replacement; stamps last_sampled_iter on the drawn entries.
  std::vector<int> sample(Rng rng, int n, const PlrConfig& cfg,
                          std::int64_t current_iter);

  /// Applies candidates in order: duplicates rescore in place (max_return
  /// keeps the larger value), otherwise insert while not full, otherwise
  /// replace the min-score entry if the candidate beats it (ties evict the
  /// smaller last_sampled_iter). Returns the number of new levels stored.
  int update(std::span<const Candidate> candidates, std::int64_t iter);

  double min_score() const;
  double mean_score() const;
  double max_score() const;

  // Rebuilds a buffer from checkpointed entries (hashes are recomputed).
  static LevelBuffer FromEntries(int capacity, std::vector<LevelBufferEntry> entries);

  bool operator==(const LevelBuffer& o) const {
    return capacity_ == o.capacity_ && entries_ == o.entries_;
  }

 private:
  int capacity_;
  std::vector<LevelBufferEntry> entries_;
};

/// Replay with probability p when the buffer has entries, otherwise new.
bool SampleReplayDecision(Rng rng, const LevelBuffer& buffer, double p);

}  // namespace ued::runners
