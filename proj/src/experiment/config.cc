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

#include "ued/experiment/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ued/common/errors.h"
#include "ued/runners/sdp.h"

namespace ued::experiment {

using nlohmann::json;

namespace {

const char* ScoreName(runners::ScoreFn f) {
  return f == runners::ScoreFn::kPvl ? "pvl" : "maxmc";
}
const char* PrioName(runners::Prioritization p) {
  return p == runners::Prioritization::kProportional ? "proportional" : "rank";
}

// Reads j[key] as T, reporting the dotted path on a type mismatch.
template <class T>
T Get(const json& j, const std::string& path, const char* key) {
  const std::string full = path.empty() ? key : path + "." + key;
  if (!j.contains(key)) throw ConfigError("missing config key '" + full + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + full + "' has the wrong type");
  }
}

std::string TypeName(const json& v) {
  if (v.is_boolean()) return "a boolean";
  if (v.is_number_integer()) return "an integer";
  if (v.is_number()) return "a number";
  if (v.is_string()) return "a string";
  if (v.is_array()) return "a list";
  if (v.is_object()) return "a section";
  return "null";
}

// Whether `v` may replace a default of the same shape as `def`.
bool Compatible(const json& def, const json& v) {
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) {
    if (!v.is_array()) return false;
    for (const auto& e : v) {
      if (!e.is_string()) return false;
    }
    return true;
  }
  return false;
}

void MergeChecked(json& base, const json& over, const std::string& path) {
  if (!over.is_object()) {
    throw ConfigError("config " + (path.empty() ? std::string("file") : "key '" + path + "'") +
                      " must be an object");
  }
  for (const auto& [key, value] : over.items()) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + full + "'");
    json& slot = base[key];
    if (slot.is_object()) {
      MergeChecked(slot, value, full);
    } else if (!Compatible(slot, value)) {
      throw ConfigError("config key '" + full + "' expects " + TypeName(slot) + ", got " +
                        TypeName(value));
    } else {
      slot = value;
    }
  }
}

json ParseValue(const json& def, const std::string& key, const std::string& raw) {
  auto bad = [&] {
    return ConfigError("config key '" + key + "' expects " + TypeName(def) + ", got '" + raw +
                       "'");
  };
  if (def.is_boolean()) {
    if (raw == "true" || raw == "1") return true;
    if (raw == "false" || raw == "0") return false;
    throw bad();
  }
  if (def.is_number_unsigned()) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || p != raw.data() + raw.size()) throw bad();
    return v;
  }
  if (def.is_number_integer()) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || p != raw.data() + raw.size()) throw bad();
    return v;
  }
  if (def.is_number()) {
    double v = 0;
    auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || p != raw.data() + raw.size()) throw bad();
    return v;
  }
  if (def.is_array()) {
    json arr = json::array();
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) arr.push_back(item);
    }
    return arr;
  }
  return raw;
}

void CollectKeys(const json& j, const std::string& path, std::vector<std::string>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (value.is_object()) {
      CollectKeys(value, full, out);
    } else {
      out.push_back(full);
    }
  }
}

json* FindLeaf(json& root, const std::string& dotted) {
  json* cur = &root;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!cur->is_object() || !cur->contains(part)) return nullptr;
    cur = &(*cur)[part];
  }
  return cur->is_object() ? nullptr : cur;
}

}  // namespace

json ToJson(const ExperimentConfig& c) {
  const auto& r = c.run;
  json j;
  j["runner"] = c.runner;
  j["env_id"] = c.env_id;
  j["model_id"] = c.model_id;
  j["seed"] = c.seed;
  j["n_shards"] = c.n_shards;
  j["num_updates"] = c.num_updates;
  j["checkpoint_interval"] = c.checkpoint_interval;
  j["log_interval"] = c.log_interval;
  j["output_dir"] = c.output_dir;
  j["rollout_length"] = r.rollout_length;
  j["n_envs"] = r.n_envs;
  j["env"] = {{"height", r.env.height},
              {"width", r.env.width},
              {"max_episode_steps", r.env.max_episode_steps},
              {"agent_view_size", r.env.agent_view_size},
              {"wall_budget", r.env.wall_budget},
              {"see_through_walls", r.env.see_through_walls}};
  j["model"] = {{"tile_embed_dim", r.model.tile_embed_dim},
                {"aux_embed_dim", r.model.aux_embed_dim},
                {"encoder_dim", r.model.encoder_dim},
                {"hidden", r.model.hidden}};
  j["ppo"] = {{"gamma", r.ppo.gamma},
              {"gae_lambda", r.ppo.gae_lambda},
              {"clip_range", r.ppo.clip_range},
              {"epochs", r.ppo.epochs},
              {"minibatches", r.ppo.minibatches},
              {"lr", r.ppo.lr},
              {"adam_eps", r.ppo.adam_eps},
              {"max_grad_norm", r.ppo.max_grad_norm},
              {"value_loss_coef", r.ppo.value_loss_coef},
              {"entropy_coef", r.ppo.entropy_coef},
              {"value_clipping", r.ppo.value_clipping}};
  j["plr"] = {{"replay_rate", r.plr.replay_rate},
              {"buffer_size", r.plr.buffer_size},
              {"score_fn", ScoreName(r.plr.score_fn)},
              {"prioritization", PrioName(r.plr.prioritization)},
              {"temperature", r.plr.temperature},
              {"staleness_coef", r.plr.staleness_coef},
              {"robust", r.plr.robust},
              {"discounted_max_return", r.plr.discounted_max_return}};
  j["accel"] = {{"n_mutations", r.accel.n_mutations},
                {"subsample_size", r.accel.subsample_size},
                {"goal_move_prob", r.accel.goal_move_prob}};
  j["paired"] = {{"population", r.paired.population},
                 {"generator_entropy_coef", r.paired.generator_entropy_coef},
                 {"minimax", r.paired.minimax}};
  j["eval"] = {{"interval", c.eval.interval},
               {"episodes_per_level", c.eval.episodes_per_level},
               {"greedy", c.eval.greedy},
               {"levels", c.eval.levels}};
  return j;
}

json DefaultConfigJson(const std::string& runner_id, const Registries& reg) {
  ExperimentConfig c;
  c.runner = runner_id;
  reg.runners.get(runner_id).apply_defaults(c.run);
  c.run.env = reg.envs.get(c.env_id).defaults;
  return ToJson(c);
}

ExperimentConfig FromJson(const json& j, const Registries& reg) {
  ExperimentConfig c;
  c.runner = Get<std::string>(j, "", "runner");
  // The runner id decides the kind and the accel switch.
  reg.runners.get(c.runner).apply_defaults(c.run);
  auto& r = c.run;
  c.env_id = Get<std::string>(j, "", "env_id");
  c.model_id = Get<std::string>(j, "", "model_id");
  c.seed = Get<std::uint64_t>(j, "", "seed");
  c.n_shards = Get<int>(j, "", "n_shards");
  c.num_updates = Get<std::int64_t>(j, "", "num_updates");
  c.checkpoint_interval = Get<int>(j, "", "checkpoint_interval");
  c.log_interval = Get<int>(j, "", "log_interval");
  c.output_dir = Get<std::string>(j, "", "output_dir");
  r.rollout_length = Get<int>(j, "", "rollout_length");
  r.n_envs = Get<int>(j, "", "n_envs");

  const json& e = j.at("env");
  r.env.height = Get<int>(e, "env", "height");
  r.env.width = Get<int>(e, "env", "width");
  r.env.max_episode_steps = Get<int>(e, "env", "max_episode_steps");
  r.env.agent_view_size = Get<int>(e, "env", "agent_view_size");
  r.env.wall_budget = Get<int>(e, "env", "wall_budget");
  r.env.see_through_walls = Get<bool>(e, "env", "see_through_walls");

  const json& m = j.at("model");
  r.model.tile_embed_dim = Get<int>(m, "model", "tile_embed_dim");
  r.model.aux_embed_dim = Get<int>(m, "model", "aux_embed_dim");
  r.model.encoder_dim = Get<int>(m, "model", "encoder_dim");
  r.model.hidden = Get<int>(m, "model", "hidden");

  const json& p = j.at("ppo");
  r.ppo.gamma = Get<double>(p, "ppo", "gamma");
  r.ppo.gae_lambda = Get<double>(p, "ppo", "gae_lambda");
  r.ppo.clip_range = Get<double>(p, "ppo", "clip_range");
  r.ppo.epochs = Get<int>(p, "ppo", "epochs");
  r.ppo.minibatches = Get<int>(p, "ppo", "minibatches");
  r.ppo.lr = Get<double>(p, "ppo", "lr");
  r.ppo.adam_eps = Get<double>(p, "ppo", "adam_eps");
  r.ppo.max_grad_norm = Get<double>(p, "ppo", "max_grad_norm");
  r.ppo.value_loss_coef = Get<double>(p, "ppo", "value_loss_coef");
  r.ppo.entropy_coef = Get<double>(p, "ppo", "entropy_coef");
  r.ppo.value_clipping = Get<bool>(p, "ppo", "value_clipping");

  const json& l = j.at("plr");
  r.plr.replay_rate = Get<double>(l, "plr", "replay_rate");
  r.plr.buffer_size = Get<int>(l, "plr", "buffer_size");
  const auto score = Get<std::string>(l, "plr", "score_fn");
  if (score == "maxmc") {
    r.plr.score_fn = runners::ScoreFn::kMaxMc;
  } else if (score == "pvl") {
    r.plr.score_fn = runners::ScoreFn::kPvl;
  } else {
    throw ConfigError("plr.score_fn must be 'maxmc' or 'pvl', got '" + score + "'");
  }
  const auto prio = Get<std::string>(l, "plr", "prioritization");
  if (prio == "rank") {
    r.plr.prioritization = runners::Prioritization::kRank;
  } else if (prio == "proportional") {
    r.plr.prioritization = runners::Prioritization::kProportional;
  } else {
    throw ConfigError("plr.prioritization must be 'rank' or 'proportional', got '" + prio + "'");
  }
  r.plr.temperature = Get<double>(l, "plr", "temperature");
  r.plr.staleness_coef = Get<double>(l, "plr", "staleness_coef");
  r.plr.robust = Get<bool>(l, "plr", "robust");
  r.plr.discounted_max_return = Get<bool>(l, "plr", "discounted_max_return");

  const json& a = j.at("accel");
  r.accel.n_mutations = Get<int>(a, "accel", "n_mutations");
  r.accel.subsample_size = Get<int>(a, "accel", "subsample_size");
  r.accel.goal_move_prob = Get<double>(a, "accel", "goal_move_prob");

  const json& pd = j.at("paired");
  r.paired.population = Get<int>(pd, "paired", "population");
  r.paired.generator_entropy_coef = Get<double>(pd, "paired", "generator_entropy_coef");
  r.paired.minimax = Get<bool>(pd, "paired", "minimax");

  const json& ev = j.at("eval");
  c.eval.interval = Get<int>(ev, "eval", "interval");
  c.eval.episodes_per_level = Get<int>(ev, "eval", "episodes_per_level");
  c.eval.greedy = Get<bool>(ev, "eval", "greedy");
  c.eval.levels = Get<std::vector<std::string>>(ev, "eval", "levels");

  ValidateExperimentConfig(c, reg);
  return c;
}

void ValidateExperimentConfig(const ExperimentConfig& c, const Registries& reg) {
  reg.runners.get(c.runner);
  reg.envs.get(c.env_id);
  reg.models.get(c.model_id.empty() ? reg.default_model(c.env_id) : c.model_id);
  runners::ValidateRunnerConfig(c.run);
  // Every section is range-checked, including ones the runner ignores.
  runners::ValidatePlrConfig(c.run.plr);
  if (c.n_shards < 1) throw ConfigError("n_shards must be >= 1");
  runners::ShardConfig(c.run, c.n_shards);
  if (c.num_updates < 0) throw ConfigError("num_updates must be >= 0");
  if (c.checkpoint_interval < 0) throw ConfigError("checkpoint_interval must be >= 0");
  if (c.log_interval < 0) throw ConfigError("log_interval must be >= 0");
  if (c.eval.interval < 0) throw ConfigError("eval.interval must be >= 0");
  if (c.eval.episodes_per_level < 1) throw ConfigError("eval.episodes_per_level must be >= 1");
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> out;
  CollectKeys(DefaultConfigJson("dr"), "", out);
  return out;
}

ExperimentConfig ResolveConfig(const ConfigSources& src, const Registries& reg) {
  std::string runner = "dr";
  if (src.file && src.file->is_object() && src.file->contains("runner")) {
    if (!(*src.file)["runner"].is_string()) throw ConfigError("config key 'runner' expects a string");
    runner = (*src.file)["runner"].get<std::string>();
  }
  for (const auto& [k, v] : src.overrides) {
    if (k == "runner") runner = v;
  }
  json cfg = DefaultConfigJson(runner, reg);
  if (src.file) MergeChecked(cfg, *src.file, "");
  for (const auto& [k, v] : src.overrides) {
    json* leaf = FindLeaf(cfg, k);
    if (leaf == nullptr) throw ConfigError("unknown config key '" + k + "'");
    *leaf = ParseValue(*leaf, k, v);
  }
  return FromJson(cfg, reg);
}

json LoadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
}

std::string ConfigHash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical dump (keys sorted). Settings that cannot
  // change the training trajectory are left out so a run can be extended.
  json j = ToJson(cfg);
  for (const char* k : {"output_dir", "num_updates", "log_interval", "checkpoint_interval"}) {
    j.erase(k);
  }
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ued::experiment
