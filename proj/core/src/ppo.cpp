#include "tdrp/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "tdrp/stats.hpp"

namespace tdrp {

namespace {
constexpr double kLogStdMin = -5.0;
constexpr double kLogStdMax = 2.0;
constexpr double kHalfLog2Pi = 0.91893853320467274;  // 0.5*log(2*pi)

double ClampLogStd(double ls) { return std::min(std::max(ls, kLogStdMin), kLogStdMax); }
}  // namespace

void PpoConfig::Validate() const {
  if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("PpoConfig: gamma must be in [0,1)");
  if (gae_lambda < 0.0 || gae_lambda > 1.0) {
    throw std::invalid_argument("PpoConfig: gae_lambda must be in [0,1]");
  }
  if (clip_epsilon <= 0.0) throw std::invalid_argument("PpoConfig: clip_epsilon must be > 0");
  if (minibatch_size < 1) throw std::invalid_argument("PpoConfig: minibatch_size must be >= 1");
  if (epochs < 0) throw std::invalid_argument("PpoConfig: epochs must be >= 0");
  if (critic_coef < 0.0 || entropy_coef < 0.0) {
    throw std::invalid_argument("PpoConfig: coefficients must be >= 0");
  }
  if (learning_rate <= 0.0) throw std::invalid_argument("PpoConfig: learning_rate must be > 0");
  if (rollout_steps < 1) throw std::invalid_argument("PpoConfig: rollout_steps must be >= 1");
  if (bootstrap_horizon < 1) throw std::invalid_argument("PpoConfig: bootstrap_horizon must be >= 1");
}

Policy::Policy(int state_dim, int action_dim, const PpoConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng(seed);
  std::vector<int> mean_sizes{state_dim};
  for (int s : config.policy_layers) mean_sizes.push_back(s);
  mean_sizes.push_back(action_dim);
  mean_net_ = MlpParams::Init(mean_sizes, Activation::kTanh, Activation::kTanh, rng);

  std::vector<int> value_sizes{state_dim};
  for (int s : config.value_layers) value_sizes.push_back(s);
  value_sizes.push_back(1);
  value_net_ = MlpParams::Init(value_sizes, Activation::kTanh, Activation::kIdentity, rng);

  log_std_ = Vector(action_dim);
  log_std_.Fill(config.init_log_std);
}

Policy::Policy(MlpParams mean_net, Vector log_std, MlpParams value_net)
    : mean_net_(std::move(mean_net)), log_std_(std::move(log_std)),
      value_net_(std::move(value_net)) {
  if (log_std_.size() != mean_net_.output_dim()) {
    throw std::invalid_argument("Policy: log_std does not match action dimension");
  }
  if (value_net_.output_dim() != 1 || value_net_.input_dim() != mean_net_.input_dim()) {
    throw std::invalid_argument("Policy: value network shape mismatch");
  }
}

double Policy::ClampedStd(int dim) const { return std::exp(ClampLogStd(log_std_[dim])); }

Vector Policy::MeanAction(const Vector& state) const { return MlpForward(mean_net_, state); }

std::pair<Vector, double> Policy::SampleAction(const Vector& state, Rng& rng) const {
  Vector mean = MeanAction(state);
  Vector action(mean.size());
  double logp = 0.0;
  for (int d = 0; d < mean.size(); ++d) {
    double sigma = ClampedStd(d);
    double z = rng.NextGaussian();
    action[d] = mean[d] + sigma * z;
    logp += -0.5 * z * z - std::log(sigma) - kHalfLog2Pi;
  }
  if (!std::isfinite(logp)) throw std::runtime_error("Policy::SampleAction: non-finite log-prob");
  return {std::move(action), logp};
}

double Policy::LogProb(const Vector& state, const Vector& action) const {
  Vector mean = MeanAction(state);
  if (action.size() != mean.size()) {
    throw std::invalid_argument("Policy::LogProb: action dimension mismatch");
  }
  double logp = 0.0;
  for (int d = 0; d < mean.size(); ++d) {
    double sigma = ClampedStd(d);
    double z = (action[d] - mean[d]) / sigma;
    logp += -0.5 * z * z - std::log(sigma) - kHalfLog2Pi;
  }
  return logp;
}

double Policy::Value(const Vector& state) const { return MlpForward(value_net_, state)[0]; }

double Policy::Entropy() const {
  double h = 0.0;
  for (int d = 0; d < log_std_.size(); ++d) {
    h += ClampLogStd(log_std_[d]) + 0.5 + kHalfLog2Pi;
  }
  return h;
}

std::size_t Policy::ParameterCount() const {
  return mean_net_.ParameterCount() + static_cast<std::size_t>(log_std_.size()) +
         value_net_.ParameterCount();
}

void Policy::FlattenParams(std::vector<double>& out) const {
  std::vector<double> tmp;
  out.clear();
  out.reserve(ParameterCount());
  mean_net_.FlattenTo(tmp);
  out.insert(out.end(), tmp.begin(), tmp.end());
  out.insert(out.end(), log_std_.data(), log_std_.data() + log_std_.size());
  value_net_.FlattenTo(tmp);
  out.insert(out.end(), tmp.begin(), tmp.end());
}

void Policy::LoadParams(std::span<const double> flat) {
  if (flat.size() != ParameterCount()) {
    throw std::invalid_argument("Policy::LoadParams: size mismatch");
  }
  std::size_t n_mean = mean_net_.ParameterCount();
  std::size_t n_std = static_cast<std::size_t>(log_std_.size());
  mean_net_.LoadFlat(flat.subspan(0, n_mean));
  for (std::size_t i = 0; i < n_std; ++i) log_std_[static_cast<int>(i)] = flat[n_mean + i];
  value_net_.LoadFlat(flat.subspan(n_mean + n_std));
}

int RolloutBatch::total_steps() const {
  int n = 0;
  for (const auto& e : episodes) n += e.length();
  return n;
}

double RolloutBatch::MeanRawReturn() const {
  if (episodes.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& e : episodes) acc += e.RawReturn();
  return acc / static_cast<double>(episodes.size());
}

double RolloutBatch::SuccessRate() const {
  if (episodes.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& e : episodes) acc += e.succeeded ? 1.0 : 0.0;
  return acc / static_cast<double>(episodes.size());
}

double RolloutBatch::MeanShapedReward() const {
  double acc = 0.0;
  int n = 0;
  for (const auto& e : episodes) {
    for (double r : e.shaped_rewards) {
      acc += r;
      ++n;
    }
  }
  return n ? acc / n : 0.0;
}

RolloutBatch CollectRollout(Env& env, const Policy& policy, const RewardSpec& reward_spec,
                            const Encoder* encoder, std::span<const Vector> centers,
                            int min_steps, std::uint64_t seed, GoalSet* goal_set) {
  if (min_steps < 1) throw std::invalid_argument("CollectRollout: min_steps must be >= 1");
  if (reward_spec.mode != RewardMode::kNone && encoder == nullptr) {
    throw std::invalid_argument("CollectRollout: shaping requires an encoder snapshot");
  }
  RolloutBatch batch;
  int steps = 0;
  std::uint64_t episode = 0;
  while (steps < min_steps) {
    Trajectory traj;
    Vector state = env.Reset(DeriveSeed(seed, {0xE9u, episode}));
    Rng action_rng(DeriveSeed(seed, {0xACu, episode}));
    while (true) {
      auto [action, logp] = policy.SampleAction(state, action_rng);
      double value = policy.Value(state);
      StepResult result = env.Step(action);
      double shaped = ApplyShaping(reward_spec, result.reward, state, encoder, centers);
      traj.states.push_back(state);
      traj.actions.push_back(action);
      traj.raw_rewards.push_back(result.reward);
      traj.shaped_rewards.push_back(shaped);
      traj.log_probs.push_back(logp);
      traj.values.push_back(value);
      state = result.next_state;
      ++steps;
      if (result.done) {
        traj.final_state = state;
        traj.succeeded = result.success;
        traj.truncated = !result.success;
        traj.final_value = traj.truncated ? policy.Value(state) : 0.0;
        break;
      }
    }
    if (goal_set) goal_set->Update(traj.final_state, traj.succeeded);
    batch.episodes.push_back(std::move(traj));
    ++episode;
  }
  return batch;
}

void ComputeGae(std::span<const double> rewards, std::span<const double> values,
                double bootstrap_value, double gamma, double lambda,
                std::vector<double>& advantages, std::vector<double>& targets) {
  if (rewards.size() != values.size()) throw std::invalid_argument("ComputeGae: length mismatch");
  int n = static_cast<int>(rewards.size());
  advantages.assign(n, 0.0);
  targets.assign(n, 0.0);
  double gae = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    double next_value = (t + 1 < n) ? values[t + 1] : bootstrap_value;
    double delta = rewards[t] + gamma * next_value - values[t];
    gae = delta + gamma * lambda * gae;
    advantages[t] = gae;
    targets[t] = gae + values[t];
  }
}

void ComputeAdvantages(RolloutBatch& batch, const PpoConfig& config) {
  batch.advantages.resize(batch.episodes.size());
  batch.value_targets.resize(batch.episodes.size());
  for (std::size_t i = 0; i < batch.episodes.size(); ++i) {
    const Trajectory& e = batch.episodes[i];
    double bootstrap = e.truncated ? e.final_value : 0.0;
    ComputeGae(e.shaped_rewards, e.values, bootstrap, config.gamma, config.gae_lambda,
               batch.advantages[i], batch.value_targets[i]);
  }
}

std::vector<FlatSample> FlattenBatch(const RolloutBatch& batch) {
  if (batch.advantages.size() != batch.episodes.size()) {
    throw std::logic_error("FlattenBatch: run ComputeAdvantages first");
  }
  std::vector<FlatSample> out;
  out.reserve(batch.total_steps());
  for (std::size_t i = 0; i < batch.episodes.size(); ++i) {
    const Trajectory& e = batch.episodes[i];
    for (int t = 0; t < e.length(); ++t) {
      out.push_back(FlatSample{&e.states[t], &e.actions[t], e.log_probs[t],
                               batch.advantages[i][t], batch.value_targets[i][t]});
    }
  }
  return out;
}

double PolicyLoss(std::span<const FlatSample> samples, const Policy& policy,
                  double clip_epsilon) {
  if (samples.empty()) throw std::invalid_argument("PolicyLoss: empty minibatch");
  double acc = 0.0;
  for (const FlatSample& s : samples) {
    double ratio = std::exp(policy.LogProb(*s.state, *s.action) - s.old_log_prob);
    if (!std::isfinite(ratio)) throw std::runtime_error("PolicyLoss: non-finite ratio");
    double clipped = std::min(std::max(ratio, 1.0 - clip_epsilon), 1.0 + clip_epsilon);
    acc += std::min(ratio * s.advantage, clipped * s.advantage);
  }
  return -acc / static_cast<double>(samples.size());
}

double ValueLoss(std::span<const FlatSample> samples, const Policy& policy,
                 double critic_coef) {
  if (samples.empty()) throw std::invalid_argument("ValueLoss: empty minibatch");
  double acc = 0.0;
  for (const FlatSample& s : samples) {
    double diff = policy.Value(*s.state) - s.value_target;
    acc += diff * diff;
  }
  return critic_coef * acc / static_cast<double>(samples.size());
}

double CombinedLossWithGrad(std::span<const FlatSample> samples, const Policy& policy,
                            const PpoConfig& config, std::vector<double>& grad,
                            MinibatchStats* stats) {
  if (samples.empty()) throw std::invalid_argument("CombinedLossWithGrad: empty minibatch");
  const double n = static_cast<double>(samples.size());
  const double eps = config.clip_epsilon;
  const int action_dim = policy.action_dim();

  MlpParams mean_grad = policy.mean_net().ZerosLike();
  MlpParams value_grad = policy.value_net().ZerosLike();
  Vector log_std_grad(action_dim);

  double policy_loss = 0.0, value_loss = 0.0, kl_acc = 0.0, clip_count = 0.0;
  ForwardCache mean_cache, value_cache;

  for (const FlatSample& s : samples) {
    Vector mean = MlpForwardCached(policy.mean_net(), *s.state, mean_cache);
    double logp = 0.0;
    for (int d = 0; d < action_dim; ++d) {
      double sigma = policy.ClampedStd(d);
      double z = ((*s.action)[d] - mean[d]) / sigma;
      logp += -0.5 * z * z - std::log(sigma) - kHalfLog2Pi;
    }
    double log_ratio = logp - s.old_log_prob;
    double ratio = std::exp(log_ratio);
    if (!std::isfinite(ratio)) throw std::runtime_error("CombinedLossWithGrad: non-finite ratio");

    double clipped = std::min(std::max(ratio, 1.0 - eps), 1.0 + eps);
    policy_loss += -std::min(ratio * s.advantage, clipped * s.advantage) / n;
    kl_acc += (ratio - 1.0) - log_ratio;
    if (std::abs(ratio - 1.0) > eps) clip_count += 1.0;

    // d(-min)/d(logp): zero when the clip is binding on the pushing side
    bool active = !((ratio > 1.0 + eps && s.advantage > 0.0) ||
                    (ratio < 1.0 - eps && s.advantage < 0.0));
    if (active) {
      double coef = -(s.advantage * ratio) / n;
      Vector grad_mean(action_dim);
      for (int d = 0; d < action_dim; ++d) {
        double sigma = policy.ClampedStd(d);
        double z = ((*s.action)[d] - mean[d]) / sigma;
        grad_mean[d] = coef * (z / sigma);   // dlogp/dmean = z/sigma
        double ls = policy.log_std()[d];
        if (ls > kLogStdMin && ls < kLogStdMax) {
          log_std_grad[d] += coef * (z * z - 1.0);  // dlogp/dlog_std
        }
      }
      MlpBackward(policy.mean_net(), mean_cache, grad_mean, mean_grad);
    }

    double v = MlpForwardCached(policy.value_net(), *s.state, value_cache)[0];
    double diff = v - s.value_target;
    value_loss += config.critic_coef * diff * diff / n;
    Vector grad_v(1);
    grad_v[0] = config.critic_coef * 2.0 * diff / n;
    MlpBackward(policy.value_net(), value_cache, grad_v, value_grad);
  }

  double entropy = policy.Entropy();
  for (int d = 0; d < action_dim; ++d) {
    double ls = policy.log_std()[d];
    if (ls > kLogStdMin && ls < kLogStdMax) log_std_grad[d] -= config.entropy_coef;
  }

  double total = policy_loss + value_loss - config.entropy_coef * entropy;
  if (!std::isfinite(total)) throw std::runtime_error("CombinedLossWithGrad: non-finite loss");

  // pack gradient in the policy's flat order
  grad.clear();
  grad.reserve(policy.ParameterCount());
  std::vector<double> tmp;
  mean_grad.FlattenTo(tmp);
  grad.insert(grad.end(), tmp.begin(), tmp.end());
  grad.insert(grad.end(), log_std_grad.data(), log_std_grad.data() + log_std_grad.size());
  value_grad.FlattenTo(tmp);
  grad.insert(grad.end(), tmp.begin(), tmp.end());

  if (stats) {
    stats->policy_loss = policy_loss;
    stats->value_loss = value_loss;
    stats->entropy = entropy;
    stats->approx_kl = kl_acc / n;
    stats->clip_fraction = clip_count / n;
  }
  return total;
}

UpdateStats PpoUpdate(RolloutBatch& batch, Policy& policy, AdamState& adam,
                      const PpoConfig& config, std::uint64_t seed) {
  config.Validate();
  ComputeAdvantages(batch, config);
  std::vector<FlatSample> samples = FlattenBatch(batch);
  if (samples.empty()) throw std::invalid_argument("PpoUpdate: empty batch");

  // normalize advantages once per update
  std::vector<double> adv(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) adv[i] = samples[i].advantage;
  double mu = Mean(adv);
  double sd = StdDev(adv);
  for (auto& s : samples) s.advantage = (s.advantage - mu) / (sd + 1e-8);

  Rng rng(seed);
  std::vector<int> index(samples.size());
  std::iota(index.begin(), index.end(), 0);

  UpdateStats stats;
  int minibatches = 0;
  std::vector<double> flat_params, flat_grad;
  std::vector<FlatSample> mb;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with our own generator, for cross-platform replay
    for (std::size_t i = index.size(); i > 1; --i) {
      std::swap(index[i - 1], index[static_cast<std::size_t>(rng.NextInt(static_cast<int>(i)))]);
    }
    for (std::size_t start = 0; start < samples.size();
         start += static_cast<std::size_t>(config.minibatch_size)) {
      std::size_t end = std::min(samples.size(),
                                 start + static_cast<std::size_t>(config.minibatch_size));
      mb.clear();
      for (std::size_t i = start; i < end; ++i) mb.push_back(samples[index[i]]);

      MinibatchStats mstats;
      CombinedLossWithGrad(mb, policy, config, flat_grad, &mstats);
      policy.FlattenParams(flat_params);
      adam.Step(flat_params, flat_grad);
      policy.LoadParams(flat_params);

      stats.policy_loss += mstats.policy_loss;
      stats.value_loss += mstats.value_loss;
      stats.entropy += mstats.entropy;
      stats.approx_kl += mstats.approx_kl;
      stats.clip_fraction += mstats.clip_fraction;
      ++minibatches;
    }
  }
  if (minibatches > 0) {
    stats.policy_loss /= minibatches;
    stats.value_loss /= minibatches;
    stats.entropy /= minibatches;
    stats.approx_kl /= minibatches;
    stats.clip_fraction /= minibatches;
  }
  return stats;
}

}  // namespace tdrp
