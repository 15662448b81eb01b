#include "tdrp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tdrp {

namespace {

std::string Trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(Trim(cell));
  return out;
}

int ParseInt(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  }
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  }
}

std::uint64_t ParseU64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad seed for " + key + ": '" + v + "'");
  }
}

std::vector<int> ParseIntList(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& cell : SplitCommas(v)) out.push_back(ParseInt(key, cell));
  if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
  return out;
}

SkillRole SkillFromName(const std::string& name) {
  if (name == "full") return SkillRole::kFull;
  if (name == "a") return SkillRole::kSkillA;
  if (name == "b") return SkillRole::kSkillB;
  throw std::invalid_argument("config: env.skill must be full|a|b, got '" + name + "'");
}

std::string SkillName(SkillRole role) {
  switch (role) {
    case SkillRole::kFull: return "full";
    case SkillRole::kSkillA: return "a";
    case SkillRole::kSkillB: return "b";
  }
  return "full";
}

}  // namespace

void ExperimentConfig::Validate() const {
  env.Validate();
  tdrp.Validate();
  ppo.Validate();
  reward.Validate();
  if (iterations < 0) throw std::invalid_argument("config: iterations must be >= 0");
  if (seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
  if (eval_episodes < 1) throw std::invalid_argument("config: eval.episodes must be >= 1");
  if (buffer_capacity < 1) throw std::invalid_argument("config: buffer.capacity must be >= 1");
  if (checkpoint_every < 1) throw std::invalid_argument("config: checkpoint_every must be >= 1");
  if (goalset_capacity < 1) throw std::invalid_argument("config: goalset.capacity must be >= 1");
  if (scripted_speed <= 0.0 || scripted_speed > 1.0) {
    throw std::invalid_argument("config: scripted.speed must be in (0,1]");
  }
  if (scripted_noise < 0.0) throw std::invalid_argument("config: scripted.noise must be >= 0");
  if (ablate_episodes < 1) throw std::invalid_argument("config: ablate.episodes must be >= 1");
  if (ablate_rounds < 1) throw std::invalid_argument("config: ablate.rounds must be >= 1");
  if (chain_init_samples < 1) throw std::invalid_argument("config: chain.init_samples must be >= 1");
  if (chain_eval_episodes < 1) throw std::invalid_argument("config: chain.eval_episodes must be >= 1");
  if (reward.mode == RewardMode::kGoalState && reward.goal_state &&
      reward.goal_state->size() != env.state_dim()) {
    throw std::invalid_argument("config: reward.goal dimension does not match env state");
  }
}

ConfigMap ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ConfigMap map;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: missing '=' at " + path + ":" + std::to_string(lineno));
    }
    map[Trim(t.substr(0, eq))] = Trim(t.substr(eq + 1));
  }
  return map;
}

void ApplyOverrides(ConfigMap& map, std::span<const std::string> key_value_pairs) {
  for (const std::string& kv : key_value_pairs) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("override must be key=value, got '" + kv + "'");
    }
    map[Trim(kv.substr(0, eq))] = Trim(kv.substr(eq + 1));
  }
}

ExperimentConfig ConfigFromMap(const ConfigMap& map) {
  ExperimentConfig cfg;
  using Handler = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Handler> handlers = {
      {"env.id", [](auto& c, auto& k, auto& v) { (void)k; c.env.id = EnvIdFromName(v); }},
      {"env.distractors", [](auto& c, auto& k, auto& v) { c.env.distractors = ParseInt(k, v); }},
      {"env.noise_scale", [](auto& c, auto& k, auto& v) { c.env.noise_scale = ParseDouble(k, v); }},
      {"env.horizon", [](auto& c, auto& k, auto& v) { c.env.horizon = ParseInt(k, v); }},
      {"env.goal_radius", [](auto& c, auto& k, auto& v) { c.env.goal_radius = ParseDouble(k, v); }},
      {"env.step_size", [](auto& c, auto& k, auto& v) { c.env.step_size = ParseDouble(k, v); }},
      {"env.arm_length", [](auto& c, auto& k, auto& v) { c.env.arm_length = ParseDouble(k, v); }},
      {"env.skill", [](auto& c, auto& k, auto& v) { (void)k; c.env.skill = SkillFromName(v); }},
      {"tdrp.step", [](auto& c, auto& k, auto& v) { c.tdrp.step = ParseInt(k, v); }},
      {"tdrp.embedding_dim",
       [](auto& c, auto& k, auto& v) { c.tdrp.embedding_dim = ParseInt(k, v); }},
      {"tdrp.layers", [](auto& c, auto& k, auto& v) { c.tdrp.layer_sizes = ParseIntList(k, v); }},
      {"tdrp.margin", [](auto& c, auto& k, auto& v) { c.tdrp.margin = ParseDouble(k, v); }},
      {"tdrp.anchors", [](auto& c, auto& k, auto& v) { c.tdrp.anchors_per_update = ParseInt(k, v); }},
      {"tdrp.grad_steps",
       [](auto& c, auto& k, auto& v) { c.tdrp.grad_steps_per_round = ParseInt(k, v); }},
      {"tdrp.pairs", [](auto& c, auto& k, auto& v) { c.tdrp.pairs_per_anchor = ParseInt(k, v); }},
      {"tdrp.lr", [](auto& c, auto& k, auto& v) { c.tdrp.learning_rate = ParseDouble(k, v); }},
      {"ppo.gamma", [](auto& c, auto& k, auto& v) { c.ppo.gamma = ParseDouble(k, v); }},
      {"ppo.gae_lambda", [](auto& c, auto& k, auto& v) { c.ppo.gae_lambda = ParseDouble(k, v); }},
      {"ppo.clip", [](auto& c, auto& k, auto& v) { c.ppo.clip_epsilon = ParseDouble(k, v); }},
      {"ppo.minibatch", [](auto& c, auto& k, auto& v) { c.ppo.minibatch_size = ParseInt(k, v); }},
      {"ppo.epochs", [](auto& c, auto& k, auto& v) { c.ppo.epochs = ParseInt(k, v); }},
      {"ppo.critic_coef", [](auto& c, auto& k, auto& v) { c.ppo.critic_coef = ParseDouble(k, v); }},
      {"ppo.entropy_coef",
       [](auto& c, auto& k, auto& v) { c.ppo.entropy_coef = ParseDouble(k, v); }},
      {"ppo.lr", [](auto& c, auto& k, auto& v) { c.ppo.learning_rate = ParseDouble(k, v); }},
      {"ppo.horizon", [](auto& c, auto& k, auto& v) { c.ppo.bootstrap_horizon = ParseInt(k, v); }},
      {"ppo.rollout_steps",
       [](auto& c, auto& k, auto& v) { c.ppo.rollout_steps = ParseInt(k, v); }},
      {"ppo.policy_layers",
       [](auto& c, auto& k, auto& v) { c.ppo.policy_layers = ParseIntList(k, v); }},
      {"ppo.value_layers",
       [](auto& c, auto& k, auto& v) { c.ppo.value_layers = ParseIntList(k, v); }},
      {"ppo.init_log_std",
       [](auto& c, auto& k, auto& v) { c.ppo.init_log_std = ParseDouble(k, v); }},
      {"reward.mode", [](auto& c, auto& k, auto& v) { (void)k; c.reward.mode = RewardModeFromName(v); }},
      {"reward.lambda1", [](auto& c, auto& k, auto& v) { c.reward.lambda1 = ParseDouble(k, v); }},
      {"reward.lambda2", [](auto& c, auto& k, auto& v) { c.reward.lambda2 = ParseDouble(k, v); }},
      {"reward.clusters", [](auto& c, auto& k, auto& v) { c.reward.clusters = ParseInt(k, v); }},
      {"reward.goal",
       [](auto& c, auto& k, auto& v) {
         std::vector<double> vals;
         for (const std::string& cell : SplitCommas(v)) vals.push_back(ParseDouble(k, cell));
         c.reward.goal_state = Vector::FromData(std::move(vals));
       }},
      {"iterations", [](auto& c, auto& k, auto& v) { c.iterations = ParseInt(k, v); }},
      {"seeds",
       [](auto& c, auto& k, auto& v) {
         c.seeds.clear();
         for (const std::string& cell : SplitCommas(v)) c.seeds.push_back(ParseU64(k, cell));
       }},
      {"out_dir", [](auto& c, auto& k, auto& v) { (void)k; c.out_dir = v; }},
      {"eval.episodes", [](auto& c, auto& k, auto& v) { c.eval_episodes = ParseInt(k, v); }},
      {"demo_file", [](auto& c, auto& k, auto& v) { (void)k; c.demo_file = v; }},
      {"buffer.capacity", [](auto& c, auto& k, auto& v) { c.buffer_capacity = ParseInt(k, v); }},
      {"checkpoint_every", [](auto& c, auto& k, auto& v) { c.checkpoint_every = ParseInt(k, v); }},
      {"goalset.capacity", [](auto& c, auto& k, auto& v) { c.goalset_capacity = ParseInt(k, v); }},
      {"scripted.speed", [](auto& c, auto& k, auto& v) { c.scripted_speed = ParseDouble(k, v); }},
      {"scripted.noise", [](auto& c, auto& k, auto& v) { c.scripted_noise = ParseDouble(k, v); }},
      {"ablate.episodes", [](auto& c, auto& k, auto& v) { c.ablate_episodes = ParseInt(k, v); }},
      {"ablate.rounds", [](auto& c, auto& k, auto& v) { c.ablate_rounds = ParseInt(k, v); }},
      {"chain.init_samples",
       [](auto& c, auto& k, auto& v) { c.chain_init_samples = ParseInt(k, v); }},
      {"chain.eval_episodes",
       [](auto& c, auto& k, auto& v) { c.chain_eval_episodes = ParseInt(k, v); }},
  };
  for (const auto& [key, value] : map) {
    auto it = handlers.find(key);
    if (it == handlers.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path, std::span<const std::string> overrides) {
  ConfigMap map = ReadConfigFile(path);
  ApplyOverrides(map, overrides);
  ExperimentConfig cfg = ConfigFromMap(map);
  if (const char* env_seed = std::getenv("TDRP_SEED")) {
    cfg.seeds = {ParseU64("TDRP_SEED", env_seed)};
  }
  cfg.Validate();
  return cfg;
}

void WriteConfig(const ExperimentConfig& c, std::ostream& out) {
  auto list = [](const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(xs[i]);
    }
    return s;
  };
  out << "env.id=" << EnvIdName(c.env.id) << "\n";
  out << "env.distractors=" << c.env.distractors << "\n";
  out << "env.noise_scale=" << c.env.noise_scale << "\n";
  out << "env.horizon=" << c.env.effective_horizon() << "\n";
  out << "env.goal_radius=" << c.env.goal_radius << "\n";
  out << "env.step_size=" << c.env.step_size << "\n";
  out << "env.arm_length=" << c.env.arm_length << "\n";
  out << "env.skill=" << SkillName(c.env.skill) << "\n";
  out << "tdrp.step=" << c.tdrp.step << "\n";
  out << "tdrp.embedding_dim=" << c.tdrp.embedding_dim << "\n";
  out << "tdrp.layers=" << list(c.tdrp.layer_sizes) << "\n";
  out << "tdrp.margin=" << c.tdrp.margin << "\n";
  out << "tdrp.anchors=" << c.tdrp.anchors_per_update << "\n";
  out << "tdrp.grad_steps=" << c.tdrp.grad_steps_per_round << "\n";
  out << "tdrp.pairs=" << c.tdrp.pairs_per_anchor << "\n";
  out << "tdrp.lr=" << c.tdrp.learning_rate << "\n";
  out << "ppo.gamma=" << c.ppo.gamma << "\n";
  out << "ppo.gae_lambda=" << c.ppo.gae_lambda << "\n";
  out << "ppo.clip=" << c.ppo.clip_epsilon << "\n";
  out << "ppo.minibatch=" << c.ppo.minibatch_size << "\n";
  out << "ppo.epochs=" << c.ppo.epochs << "\n";
  out << "ppo.critic_coef=" << c.ppo.critic_coef << "\n";
  out << "ppo.entropy_coef=" << c.ppo.entropy_coef << "\n";
  out << "ppo.lr=" << c.ppo.learning_rate << "\n";
  out << "ppo.horizon=" << c.ppo.bootstrap_horizon << "\n";
  out << "ppo.rollout_steps=" << c.ppo.rollout_steps << "\n";
  out << "ppo.policy_layers=" << list(c.ppo.policy_layers) << "\n";
  out << "ppo.value_layers=" << list(c.ppo.value_layers) << "\n";
  out << "ppo.init_log_std=" << c.ppo.init_log_std << "\n";
  out << "reward.mode=" << RewardModeName(c.reward.mode) << "\n";
  out << "reward.lambda1=" << c.reward.lambda1 << "\n";
  out << "reward.lambda2=" << c.reward.lambda2 << "\n";
  out << "reward.clusters=" << c.reward.clusters << "\n";
  if (c.reward.goal_state) {
    out << "reward.goal=";
    for (int i = 0; i < c.reward.goal_state->size(); ++i) {
      if (i) out << ",";
      out << (*c.reward.goal_state)[i];
    }
    out << "\n";
  }
  out << "iterations=" << c.iterations << "\n";
  out << "seeds=";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) {
    if (i) out << ",";
    out << c.seeds[i];
  }
  out << "\n";
  out << "out_dir=" << c.out_dir << "\n";
  out << "eval.episodes=" << c.eval_episodes << "\n";
  if (!c.demo_file.empty()) out << "demo_file=" << c.demo_file << "\n";
  out << "buffer.capacity=" << c.buffer_capacity << "\n";
  out << "checkpoint_every=" << c.checkpoint_every << "\n";
  out << "goalset.capacity=" << c.goalset_capacity << "\n";
  out << "scripted.speed=" << c.scripted_speed << "\n";
  out << "scripted.noise=" << c.scripted_noise << "\n";
  out << "ablate.episodes=" << c.ablate_episodes << "\n";
  out << "ablate.rounds=" << c.ablate_rounds << "\n";
  out << "chain.init_samples=" << c.chain_init_samples << "\n";
  out << "chain.eval_episodes=" << c.chain_eval_episodes << "\n";
}

}  // namespace tdrp
