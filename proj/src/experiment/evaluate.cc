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

#include "ued/experiment/evaluate.h"

#include <algorithm>
#include <filesystem>
#include <memory>

#include "ued/agents/rollout.h"
#include "ued/amaze/assets.h"
#include "ued/amaze/level_io.h"
#include "ued/common/errors.h"

namespace ued::experiment {

std::vector<EvalLevel> ResolveEvalLevels(const std::vector<std::string>& specs) {
  std::vector<EvalLevel> out;
  if (specs.empty()) {
    for (const auto& name : amaze::ShippedLevelNames()) {
      out.push_back({name, amaze::ShippedLevel(name)});
    }
    return out;
  }
  const auto shipped = amaze::ShippedLevelNames();
  for (const auto& s : specs) {
    if (std::find(shipped.begin(), shipped.end(), s) != shipped.end()) {
      out.push_back({s, amaze::ShippedLevel(s)});
      continue;
    }
    const std::filesystem::path path(s);
    if (!std::filesystem::exists(path)) {
      throw ConfigError("eval level '" + s + "' is neither a shipped level nor a file");
    }
    out.push_back({path.stem().string(), amaze::LoadLevelFile(path)});
  }
  return out;
}

int EvalResult::episodes() const {
  int n = 0;
  for (const auto& l : levels) n += l.episodes;
  return n;
}

double EvalResult::mean_solved_rate() const {
  if (levels.empty()) return 0.0;
  double s = 0.0;
  for (const auto& l : levels) s += l.solved_rate();
  return s / levels.size();
}

double EvalResult::mean_return() const {
  if (levels.empty()) return 0.0;
  double s = 0.0;
  for (const auto& l : levels) s += l.mean_return();
  return s / levels.size();
}

nlohmann::json ToJson(const EvalResult& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& l : r.levels) {
    per.push_back({{"name", l.name},
                   {"episodes", l.episodes},
                   {"solved_rate", l.solved_rate()},
                   {"mean_return", l.mean_return()},
                   {"mean_length", l.mean_length()}});
  }
  return {{"episodes", r.episodes()},
          {"mean_solved_rate", r.mean_solved_rate()},
          {"mean_return", r.mean_return()},
          {"levels", per}};
}

EvalResult EvaluateWith(const StaticParams& env_params, std::span<const EvalLevel> levels,
                        int episodes,
                        const std::function<ActionSource(int lanes)>& make_source) {
  if (episodes < 1) throw ConfigError("episodes per level must be >= 1");
  EvalResult out;
  for (const auto& lv : levels) {
    StaticParams p = env_params;
    p.height = lv.level.height();
    p.width = lv.level.width();
    // Only generation reads the budget; keep it legal for this grid size.
    p.wall_budget = std::min(p.wall_budget, p.interior_cells() - 2);
    const amaze::MazeEnv env(p);

    std::vector<amaze::MazeEnv::Result> current(episodes, env.reset_to_level(lv.level));
    std::vector<bool> live(episodes, true);
    std::vector<int> actions(episodes, 0);
    ActionSource act = make_source(episodes);
    LevelEvalResult res;
    res.name = lv.name;
    int remaining = episodes;
    // Episodes end by the step limit at the latest.
    for (int t = 0; remaining > 0; ++t) {
      act(current, actions);
      for (int l = 0; l < episodes; ++l) {
        if (!live[l]) continue;
        auto next = env.step(Rng(0), current[l].state, actions[l]);
        if (next.done) {
          live[l] = false;
          remaining--;
          res.episodes++;
          res.return_sum += next.reward;
          res.length_sum += t + 1;
          if (next.info.get_or("success", 0.0) > 0.0) res.solved++;
        }
        current[l] = std::move(next);
      }
    }
    out.levels.push_back(std::move(res));
  }
  return out;
}

EvalResult Evaluate(const agents::RecurrentPolicy<float>& policy,
                    const agents::ParamSet<float>& params, const StaticParams& env_params,
                    std::span<const EvalLevel> levels, int episodes, bool greedy, Rng rng) {
  const auto& spec = policy.spec();
  int level_index = 0;
  auto make = [&](int lanes) -> ActionSource {
    struct Carry {
      agents::RowMat<float> hidden;
      int t = 0;
      Rng rng;
    };
    auto carry = std::make_shared<Carry>();
    carry->hidden = agents::RowMat<float>::Zero(lanes, spec.hidden);
    carry->rng = rng.split(static_cast<std::uint64_t>(level_index++));
    const amaze::MazeEnv env(env_params);
    return [&policy, &params, &spec, env, greedy, carry, lanes](
               std::span<const amaze::MazeEnv::Result> cur, std::span<int> actions) {
      std::vector<std::uint8_t> tiles(static_cast<std::size_t>(lanes) * spec.grid_cells);
      std::vector<float> aux(static_cast<std::size_t>(lanes) * spec.aux_dim);
      for (int l = 0; l < lanes; ++l) {
        env.featurize(cur[l].observation,
                      std::span<std::uint8_t>(tiles.data() + l * spec.grid_cells, spec.grid_cells),
                      std::span<float>(aux.data() + l * spec.aux_dim, spec.aux_dim));
      }
      auto out = policy.step(params, agents::InputView{lanes, tiles, aux}, carry->hidden);
      carry->hidden = std::move(out.hidden);
      std::vector<float> logp(spec.n_actions);
      const Rng step_rng = carry->rng.split(static_cast<std::uint64_t>(carry->t++));
      for (int l = 0; l < lanes; ++l) {
        agents::LogSoftmax(std::span<const float>(out.logits.row(l).data(), spec.n_actions), logp);
        Rng r = step_rng.split(l);
        actions[l] = greedy ? agents::Argmax(logp) : agents::SampleCategorical(logp, r);
      }
    };
  };
  return EvaluateWith(env_params, levels, episodes, make);
}

}  // namespace ued::experiment
