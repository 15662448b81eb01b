#ifndef TDRP_HARNESS_HPP_
#define TDRP_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tdrp/checkpoint.hpp"
#include "tdrp/config.hpp"
#include "tdrp/encoder.hpp"
#include "tdrp/envs.hpp"
#include "tdrp/ppo.hpp"

namespace tdrp {

// One metrics.csv row per training iteration. Raw-return columns are
// computed from raw rewards only; shaped rewards never enter them.
struct MetricsRow {
  int iteration = 0;
  long env_steps = 0;
  double mean_raw_return = 0.0;
  double success_rate = 0.0;
  double mean_shaped_reward = 0.0;
  double encoder_loss = 0.0;
  double mean_goal_distance = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
};

void WriteMetricsHeader(std::ostream& out);
void WriteMetricsRow(std::ostream& out, const MetricsRow& row);

struct EvalResult {
  double success_rate = 0.0;
  double mean_raw_return = 0.0;
};

// Deterministic evaluation: policy mean action, raw rewards only.
EvalResult EvalPolicy(const Policy& policy, const EnvSpec& spec, int episodes,
                      std::uint64_t seed);

// Scripted-controller episode corpus (solution-style trajectories).
std::vector<Trajectory> CollectScripted(const EnvSpec& spec, int episodes, double speed,
                                        double noise, std::uint64_t seed,
                                        bool only_successes = false);

// Spearman rank correlation between pairwise distance and timestep gap over
// all within-trajectory state pairs.
double DistanceGapSpearman(std::span<const Trajectory* const> trajectories,
                           const std::function<double(const Vector&, const Vector&)>& dist);
double EmbeddingGapSpearman(const Encoder& encoder,
                            std::span<const Trajectory* const> trajectories);
double RawStateGapSpearman(std::span<const Trajectory* const> trajectories);

// The joint encoder/policy training loop for one seed; writes metrics.csv
// and ckpt/iter_<n>/ under out_dir.
void RunSeed(const ExperimentConfig& config, std::uint64_t seed, const std::string& out_dir);

// Runs every configured seed into out_dir/seed_<s>/.
void RunSingleTask(const ExperimentConfig& config);

struct AblationRow {
  int step = 0;
  double spearman_rho = 0.0;
};

// Trains one encoder per step value on a shared frozen scripted buffer;
// writes report.csv and embeddings_step_<s>.csv under out_dir.
std::vector<AblationRow> RunStepAblation(const ExperimentConfig& config,
                                         std::span<const int> steps,
                                         const std::string& out_dir);

struct ChainReport {
  std::vector<int> iterations;
  std::vector<double> mean_center_distance;  // per fine-tune iteration
  double chained_success_pre = 0.0;
  double chained_success_post = 0.0;
};

// Skill-chaining pipeline for one fine-tune seed: encode the latter skill's
// initial states with the pretrained encoder, cluster them, fine-tune the
// previous skill with the chain reward against the frozen centers, and
// evaluate the chained policy before and after.
ChainReport RunSkillChainSeed(const ExperimentConfig& config_a, const ExperimentConfig& config_b,
                              const ExperimentConfig& finetune, const LoadedCheckpoint& ckpt_a,
                              const LoadedCheckpoint& ckpt_b, std::uint64_t seed,
                              const std::string& out_dir);

// Loads checkpoints and runs every finetune seed into out_dir/seed_<s>/.
void RunSkillChain(const ExperimentConfig& config_a, const ExperimentConfig& config_b,
                   const ExperimentConfig& finetune, const std::string& ckpt_a_dir,
                   const std::string& ckpt_b_dir, const std::string& out_dir);

// Chained execution success rate: skill A until done, handoff, skill B.
double EvalChained(const Policy& policy_a, const Policy& policy_b, const EnvSpec& spec_a,
                   const EnvSpec& spec_b, int episodes, std::uint64_t seed);

void WriteChainReportCsv(std::ostream& out, const ChainReport& report);

}  // namespace tdrp

#endif  // TDRP_HARNESS_HPP_
