#ifndef TDRP_CONFIG_HPP_
#define TDRP_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdrp/encoder.hpp"
#include "tdrp/envs.hpp"
#include "tdrp/ppo.hpp"
#include "tdrp/rewards.hpp"

namespace tdrp {

// Full experiment description. Loaded from a flat key=value file; every field
// is addressable by key and CLI overrides take precedence. TDRP_SEED in the
// environment replaces the seeds list.
struct ExperimentConfig {
  EnvSpec env;
  TdrpConfig tdrp;
  PpoConfig ppo;
  RewardSpec reward;
  int iterations = 100;
  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir = "out";
  int eval_episodes = 10;
  std::string demo_file;
  int buffer_capacity = 50000;
  int checkpoint_every = 50;
  int goalset_capacity = 128;
  double scripted_speed = 0.3;
  double scripted_noise = 0.2;
  int ablate_episodes = 50;
  int ablate_rounds = 3;
  int chain_init_samples = 256;
  int chain_eval_episodes = 100;

  void Validate() const;
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap ReadConfigFile(const std::string& path);
void ApplyOverrides(ConfigMap& map, std::span<const std::string> key_value_pairs);
ExperimentConfig ConfigFromMap(const ConfigMap& map);  // rejects unknown keys

// file + overrides + TDRP_SEED, validated
ExperimentConfig LoadConfig(const std::string& path,
                            std::span<const std::string> overrides = {});

// resolved key=value echo; parseable by ReadConfigFile
void WriteConfig(const ExperimentConfig& config, std::ostream& out);

}  // namespace tdrp

#endif  // TDRP_CONFIG_HPP_
