#ifndef TDRP_PPO_HPP_
#define TDRP_PPO_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tdrp/adam.hpp"
#include "tdrp/encoder.hpp"
#include "tdrp/envs.hpp"
#include "tdrp/mlp.hpp"
#include "tdrp/rewards.hpp"
#include "tdrp/trajectory.hpp"

namespace tdrp {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  int minibatch_size = 512;
  int epochs = 8;
  double critic_coef = 2.0;
  double entropy_coef = 0.0;
  double learning_rate = 1e-4;
  int bootstrap_horizon = 32;   // H
  int rollout_steps = 2048;     // transitions per iteration (episodes run to completion)
  std::vector<int> policy_layers = {64, 64};
  std::vector<int> value_layers = {64, 64};
  double init_log_std = -0.5;

  void Validate() const;
};

// Diagonal-Gaussian policy: tanh-squashed mean network, state-independent
// log-std (clamped to [-5, 2] at use), plus a separate value network.
class Policy {
 public:
  Policy(int state_dim, int action_dim, const PpoConfig& config, std::uint64_t seed);
  // reassembly from stored parameters (checkpoint loading)
  Policy(MlpParams mean_net, Vector log_std, MlpParams value_net);

  Vector MeanAction(const Vector& state) const;
  std::pair<Vector, double> SampleAction(const Vector& state, Rng& rng) const;
  double LogProb(const Vector& state, const Vector& action) const;
  double Value(const Vector& state) const;
  double Entropy() const;

  int state_dim() const { return mean_net_.input_dim(); }
  int action_dim() const { return mean_net_.output_dim(); }

  // flat parameter order: mean net | log_std | value net
  std::size_t ParameterCount() const;
  void FlattenParams(std::vector<double>& out) const;
  void LoadParams(std::span<const double> flat);

  const MlpParams& mean_net() const { return mean_net_; }
  const Vector& log_std() const { return log_std_; }
  const MlpParams& value_net() const { return value_net_; }
  MlpParams& mutable_mean_net() { return mean_net_; }
  Vector& mutable_log_std() { return log_std_; }
  MlpParams& mutable_value_net() { return value_net_; }
  double ClampedStd(int dim) const;

 private:
  MlpParams mean_net_;
  Vector log_std_;
  MlpParams value_net_;
};

// One PPO iteration's experience, organized by episode.
struct RolloutBatch {
  std::vector<Trajectory> episodes;
  std::vector<std::vector<double>> advantages;     // filled by ComputeAdvantages
  std::vector<std::vector<double>> value_targets;
  int total_steps() const;
  double MeanRawReturn() const;
  double SuccessRate() const;
  double MeanShapedReward() const;
};

// Runs whole episodes until at least min_steps transitions are gathered.
// Rewards are shaped with the frozen encoder snapshot and centers passed in;
// successful final states are appended to goal_set when provided.
RolloutBatch CollectRollout(Env& env, const Policy& policy, const RewardSpec& reward_spec,
                            const Encoder* encoder, std::span<const Vector> centers,
                            int min_steps, std::uint64_t seed, GoalSet* goal_set);

// Standard GAE backward recursion over one episode. bootstrap_value is the
// value of the state after the last step: 0 for terminal episodes, V(s_T)
// for timeout truncation. targets = advantages + values.
void ComputeGae(std::span<const double> rewards, std::span<const double> values,
                double bootstrap_value, double gamma, double lambda,
                std::vector<double>& advantages, std::vector<double>& targets);

// Applies ComputeGae per episode (shaped rewards drive the advantages).
void ComputeAdvantages(RolloutBatch& batch, const PpoConfig& config);

// Flattened per-step view used by the update and the loss functions.
struct FlatSample {
  const Vector* state;
  const Vector* action;
  double old_log_prob;
  double advantage;      // normalized before use in the update
  double value_target;
};
std::vector<FlatSample> FlattenBatch(const RolloutBatch& batch);

// −mean_i min(r_i·A_i, clip(r_i, 1−ε, 1+ε)·A_i) with r = exp(logp − old_logp)
double PolicyLoss(std::span<const FlatSample> samples, const Policy& policy,
                  double clip_epsilon);
// critic_coef · mean_i (V(s_i) − target_i)²
double ValueLoss(std::span<const FlatSample> samples, const Policy& policy,
                 double critic_coef);

// Combined loss (policy + value − entropy bonus) with analytic gradient in
// the policy's flat parameter order. Exposed for gradient verification.
struct MinibatchStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};
double CombinedLossWithGrad(std::span<const FlatSample> samples, const Policy& policy,
                            const PpoConfig& config, std::vector<double>& grad,
                            MinibatchStats* stats);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

// epochs × shuffled minibatches of Adam steps on the combined loss.
// Advantages are normalized (mean 0, std 1) over the whole batch first.
UpdateStats PpoUpdate(RolloutBatch& batch, Policy& policy, AdamState& adam,
                      const PpoConfig& config, std::uint64_t seed);

}  // namespace tdrp

#endif  // TDRP_PPO_HPP_
