#include "tdrp/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "tdrp/kmeans.hpp"
#include "tdrp/stats.hpp"

namespace tdrp {

namespace {

// seed-stream identifiers, one per randomness consumer
enum Stream : std::uint64_t {
  kEnvStream = 1,
  kPolicyInit,
  kEncoderInit,
  kRollout,
  kEncoderTrain,
  kUpdate,
  kEval,
  kKmeansStream,
  kScriptedStream,
  kChainInitSamples,
  kChainEval,
  kChainRollout,
  kChainUpdate,
  kChainDistEval,
};

std::string FormatG(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double MeanGoalDistance(const RolloutBatch& batch, const Encoder& encoder,
                        std::span<const Vector> centers) {
  if (centers.empty()) return 0.0;
  double acc = 0.0;
  long n = 0;
  for (const Trajectory& e : batch.episodes) {
    for (const Vector& s : e.states) {
      Vector emb = encoder.Encode(s);
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& c : centers) best = std::min(best, Distance(emb, c));
      acc += best;
      ++n;
    }
  }
  return n ? acc / static_cast<double>(n) : 0.0;
}

int TotalValidAnchors(std::span<const Trajectory* const> buffer, int step) {
  int total = 0;
  for (const Trajectory* t : buffer) total += ValidAnchorCount(*t, step);
  return total;
}

}  // namespace

void WriteMetricsHeader(std::ostream& out) {
  out << "iteration,env_steps,mean_raw_return,success_rate,mean_shaped_reward,"
         "encoder_loss,mean_goal_distance,policy_loss,value_loss\n";
}

void WriteMetricsRow(std::ostream& out, const MetricsRow& r) {
  out << r.iteration << ',' << r.env_steps << ',' << FormatG(r.mean_raw_return) << ','
      << FormatG(r.success_rate) << ',' << FormatG(r.mean_shaped_reward) << ','
      << FormatG(r.encoder_loss) << ',' << FormatG(r.mean_goal_distance) << ','
      << FormatG(r.policy_loss) << ',' << FormatG(r.value_loss) << "\n";
}

EvalResult EvalPolicy(const Policy& policy, const EnvSpec& spec, int episodes,
                      std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("EvalPolicy: episodes must be >= 1");
  Env env(spec);
  EvalResult result;
  for (int e = 0; e < episodes; ++e) {
    Vector state = env.Reset(DeriveSeed(seed, {0x11u, static_cast<std::uint64_t>(e)}));
    double ret = 0.0;
    bool success = false;
    while (true) {
      StepResult step = env.Step(policy.MeanAction(state));
      ret += step.reward;
      state = step.next_state;
      if (step.done) {
        success = step.success;
        break;
      }
    }
    result.mean_raw_return += ret;
    result.success_rate += success ? 1.0 : 0.0;
  }
  result.mean_raw_return /= episodes;
  result.success_rate /= episodes;
  return result;
}

std::vector<Trajectory> CollectScripted(const EnvSpec& spec, int episodes, double speed,
                                        double noise, std::uint64_t seed,
                                        bool only_successes) {
  if (episodes < 1) throw std::invalid_argument("CollectScripted: episodes must be >= 1");
  Env env(spec);
  ScriptedPolicy pilot(spec, speed, noise, DeriveSeed(seed, 0xCCu));
  std::vector<Trajectory> out;
  for (int e = 0; e < episodes; ++e) {
    std::uint64_t epi = static_cast<std::uint64_t>(e);
    Vector state = env.Reset(DeriveSeed(seed, {0xE9u, epi}));
    pilot.BeginEpisode(DeriveSeed(seed, {0xACu, epi}));
    Trajectory traj;
    while (true) {
      Vector action = pilot.Act(state);
      StepResult step = env.Step(action);
      traj.states.push_back(state);
      traj.actions.push_back(std::move(action));
      traj.raw_rewards.push_back(step.reward);
      traj.shaped_rewards.push_back(step.reward);
      traj.log_probs.push_back(0.0);
      traj.values.push_back(0.0);
      state = step.next_state;
      if (step.done) {
        traj.final_state = state;
        traj.succeeded = step.success;
        traj.truncated = !step.success;
        break;
      }
    }
    if (!only_successes || traj.succeeded) out.push_back(std::move(traj));
  }
  return out;
}

double DistanceGapSpearman(std::span<const Trajectory* const> trajectories,
                           const std::function<double(const Vector&, const Vector&)>& dist) {
  std::vector<double> distances, gaps;
  for (const Trajectory* traj : trajectories) {
    int n = traj->num_states();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        distances.push_back(dist(traj->state_at(i), traj->state_at(j)));
        gaps.push_back(static_cast<double>(j - i));
      }
    }
  }
  if (distances.size() < 2) {
    throw std::invalid_argument("DistanceGapSpearman: not enough state pairs");
  }
  return SpearmanRho(distances, gaps);
}

double EmbeddingGapSpearman(const Encoder& encoder,
                            std::span<const Trajectory* const> trajectories) {
  // precompute embeddings once per state
  std::vector<double> distances, gaps;
  for (const Trajectory* traj : trajectories) {
    int n = traj->num_states();
    std::vector<Vector> embs;
    embs.reserve(n);
    for (int i = 0; i < n; ++i) embs.push_back(encoder.Encode(traj->state_at(i)));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        distances.push_back(Distance(embs[i], embs[j]));
        gaps.push_back(static_cast<double>(j - i));
      }
    }
  }
  if (distances.size() < 2) {
    throw std::invalid_argument("EmbeddingGapSpearman: not enough state pairs");
  }
  return SpearmanRho(distances, gaps);
}

double RawStateGapSpearman(std::span<const Trajectory* const> trajectories) {
  return DistanceGapSpearman(trajectories,
                             [](const Vector& a, const Vector& b) { return Distance(a, b); });
}

void RunSeed(const ExperimentConfig& config, std::uint64_t seed, const std::string& out_dir) {
  config.Validate();
  if (config.reward.mode == RewardMode::kSkillChain) {
    throw std::invalid_argument(
        "RunSeed: skill_chain shaping needs the chain pipeline (use the chain command)");
  }
  std::filesystem::create_directories(out_dir);

  EnvSpec env_spec = config.env;
  env_spec.seed = DeriveSeed(seed, kEnvStream);
  Env env(env_spec);

  Policy policy(env_spec.state_dim(), env_spec.action_dim(), config.ppo,
                DeriveSeed(seed, kPolicyInit));
  AdamState policy_adam(policy.ParameterCount(),
                        AdamConfig{.learning_rate = config.ppo.learning_rate});
  Encoder encoder(env_spec.state_dim(), config.tdrp, DeriveSeed(seed, kEncoderInit));
  GoalSet goal_set(config.goalset_capacity);
  if (!config.demo_file.empty()) {
    goal_set.SeedFromDemonstrations(LoadDemonstrationStates(config.demo_file));
  }
  TrajectoryBuffer buffer(config.buffer_capacity);

  {
    std::ofstream cfg_echo(out_dir + "/config_resolved.cfg");
    WriteConfig(config, cfg_echo);
  }
  std::ofstream metrics(out_dir + "/metrics.csv");
  if (!metrics) throw std::runtime_error("cannot write metrics.csv under " + out_dir);
  WriteMetricsHeader(metrics);

  SaveCheckpoint(out_dir + "/ckpt/iter_0", policy, encoder, goal_set);

  const bool wants_centers = config.reward.mode == RewardMode::kClusteredGoals;
  long env_steps = 0;
  auto t_start = std::chrono::steady_clock::now();

  for (int iter = 1; iter <= config.iterations; ++iter) {
    try {
      // goal centers from the goal set as of the iteration start
      std::span<const Vector> centers;
      if (wants_centers && !goal_set.empty()) {
        centers = goal_set.RefreshCenters(encoder, config.reward.clusters,
                                          DeriveSeed(seed, {kKmeansStream,
                                                            static_cast<std::uint64_t>(iter)}));
      }
      // rewards all iteration long use the iteration-start encoder
      Encoder snapshot = encoder;

      RolloutBatch batch = CollectRollout(
          env, policy, config.reward, &snapshot, centers, config.ppo.rollout_steps,
          DeriveSeed(seed, {kRollout, static_cast<std::uint64_t>(iter)}), &goal_set);
      env_steps += batch.total_steps();
      for (const Trajectory& e : batch.episodes) buffer.Push(e);

      TrainStats encoder_stats;
      auto view = buffer.View();
      if (TotalValidAnchors(view, config.tdrp.step) > 0) {
        encoder_stats = encoder.Train(
            view, DeriveSeed(seed, {kEncoderTrain, static_cast<std::uint64_t>(iter)}));
      }

      UpdateStats update = PpoUpdate(batch, policy, policy_adam, config.ppo,
                                     DeriveSeed(seed, {kUpdate, static_cast<std::uint64_t>(iter)}));

      EvalResult eval = EvalPolicy(policy, env_spec, config.eval_episodes,
                                   DeriveSeed(seed, {kEval, static_cast<std::uint64_t>(iter)}));

      MetricsRow row;
      row.iteration = iter;
      row.env_steps = env_steps;
      row.mean_raw_return = eval.mean_raw_return;
      row.success_rate = eval.success_rate;
      row.mean_shaped_reward = batch.MeanShapedReward();
      row.encoder_loss = encoder_stats.MeanLoss();
      row.mean_goal_distance = MeanGoalDistance(batch, snapshot, centers);
      row.policy_loss = update.policy_loss;
      row.value_loss = update.value_loss;
      WriteMetricsRow(metrics, row);
      metrics.flush();

      if (iter % config.checkpoint_every == 0 || iter == config.iterations) {
        SaveCheckpoint(out_dir + "/ckpt/iter_" + std::to_string(iter), policy, encoder, goal_set);
      }
    } catch (const std::exception& ex) {
      // non-finite training (or any mid-iteration failure): dump and abort
      std::ofstream dump(out_dir + "/crash_dump.txt");
      dump << "iteration " << iter << "\n" << ex.what() << "\n";
      SaveCheckpoint(out_dir + "/ckpt/crash", policy, encoder, goal_set);
      throw;
    }
  }

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  // wall time goes to the console only; emitted files stay bit-reproducible
  std::cout << "seed " << seed << " done: " << config.iterations << " iterations, "
            << env_steps << " env steps, " << elapsed << " s\n";
}

void RunSingleTask(const ExperimentConfig& config) {
  config.Validate();
  for (std::uint64_t seed : config.seeds) {
    RunSeed(config, seed, config.out_dir + "/seed_" + std::to_string(seed));
  }
}

std::vector<AblationRow> RunStepAblation(const ExperimentConfig& config,
                                         std::span<const int> steps,
                                         const std::string& out_dir) {
  config.Validate();
  if (steps.empty()) throw std::invalid_argument("RunStepAblation: empty step list");
  std::filesystem::create_directories(out_dir);

  std::uint64_t root = config.seeds.front();
  EnvSpec spec = config.env;
  spec.seed = DeriveSeed(root, kEnvStream);
  std::vector<Trajectory> corpus =
      CollectScripted(spec, config.ablate_episodes, config.scripted_speed,
                      config.scripted_noise, DeriveSeed(root, kScriptedStream));
  std::vector<const Trajectory*> view;
  for (const Trajectory& t : corpus) view.push_back(&t);

  std::vector<AblationRow> rows;
  for (int step : steps) {
    if (step < 1) throw std::invalid_argument("RunStepAblation: step values must be >= 1");
    if (TotalValidAnchors(view, step) == 0) {
      throw std::invalid_argument(
          "RunStepAblation: step " + std::to_string(step) +
          " leaves every negative window empty (trajectories too short); "
          "reduce step or lengthen episodes");
    }
    TdrpConfig tc = config.tdrp;
    tc.step = step;
    Encoder enc(spec.state_dim(), tc,
                DeriveSeed(root, {kEncoderInit, static_cast<std::uint64_t>(step)}));
    for (int round = 0; round < config.ablate_rounds; ++round) {
      enc.Train(view, DeriveSeed(root, {kEncoderTrain, static_cast<std::uint64_t>(step),
                                        static_cast<std::uint64_t>(round)}));
    }
    double rho = EmbeddingGapSpearman(enc, view);
    rows.push_back(AblationRow{step, rho});

    std::ofstream emb(out_dir + "/embeddings_step_" + std::to_string(step) + ".csv");
    ExportEmbeddingsCsv(enc, view, emb);
  }

  std::ofstream report(out_dir + "/report.csv");
  report << "step,spearman_rho\n";
  for (const AblationRow& r : rows) report << r.step << ',' << FormatG(r.spearman_rho) << "\n";
  return rows;
}

double EvalChained(const Policy& policy_a, const Policy& policy_b, const EnvSpec& spec_a,
                   const EnvSpec& spec_b, int episodes, std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("EvalChained: episodes must be >= 1");
  Env env_a(spec_a);
  Env env_b(spec_b);
  int successes = 0;
  for (int e = 0; e < episodes; ++e) {
    std::uint64_t epi = static_cast<std::uint64_t>(e);
    Vector state = env_a.Reset(DeriveSeed(seed, {0xA0u, epi}));
    bool handoff = false;
    while (true) {
      StepResult step = env_a.Step(policy_a.MeanAction(state));
      state = step.next_state;
      if (step.done) {
        handoff = step.success;
        break;
      }
    }
    if (!handoff) continue;
    state = env_b.ResetFrom(env_a.intrinsic(), DeriveSeed(seed, {0xB0u, epi}));
    while (true) {
      StepResult step = env_b.Step(policy_b.MeanAction(state));
      state = step.next_state;
      if (step.done) {
        if (step.success) ++successes;
        break;
      }
    }
  }
  return static_cast<double>(successes) / episodes;
}

ChainReport RunSkillChainSeed(const ExperimentConfig& config_a, const ExperimentConfig& config_b,
                              const ExperimentConfig& finetune, const LoadedCheckpoint& ckpt_a,
                              const LoadedCheckpoint& ckpt_b, std::uint64_t seed,
                              const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);

  EnvSpec spec_a = config_a.env;
  spec_a.seed = DeriveSeed(seed, {kEnvStream, 0xAu});
  EnvSpec spec_b = config_b.env;
  spec_b.seed = DeriveSeed(seed, {kEnvStream, 0xBu});

  // the encoder trained alongside skill A, frozen for the whole fine-tune
  const Encoder& encoder = ckpt_a.encoder;

  // S_I^next sample: reset the latter skill's env, encode, cluster
  Env env_b(spec_b);
  std::vector<Vector> init_embeddings;
  init_embeddings.reserve(finetune.chain_init_samples);
  for (int i = 0; i < finetune.chain_init_samples; ++i) {
    Vector s = env_b.Reset(DeriveSeed(seed, {kChainInitSamples, static_cast<std::uint64_t>(i)}));
    init_embeddings.push_back(encoder.Encode(s));
  }
  KmeansResult km =
      Kmeans(init_embeddings,
             std::min<int>(finetune.reward.clusters, static_cast<int>(init_embeddings.size())),
             DeriveSeed(seed, kKmeansStream));
  std::vector<Vector> centers = std::move(km.centers);

  ChainReport report;
  report.chained_success_pre =
      EvalChained(ckpt_a.policy, ckpt_b.policy, spec_a, spec_b, finetune.chain_eval_episodes,
                  DeriveSeed(seed, kChainEval));

  Policy policy = ckpt_a.policy;
  AdamState adam(policy.ParameterCount(),
                 AdamConfig{.learning_rate = finetune.ppo.learning_rate});
  Env env_a(spec_a);
  RewardSpec chain_spec = finetune.reward;
  chain_spec.mode = RewardMode::kSkillChain;

  for (int iter = 1; iter <= finetune.iterations; ++iter) {
    RolloutBatch batch = CollectRollout(
        env_a, policy, chain_spec, &encoder, centers, finetune.ppo.rollout_steps,
        DeriveSeed(seed, {kChainRollout, static_cast<std::uint64_t>(iter)}), nullptr);
    PpoUpdate(batch, policy, adam, finetune.ppo,
              DeriveSeed(seed, {kChainUpdate, static_cast<std::uint64_t>(iter)}));

    // Fig. 7(b)-style metric: deterministic rollouts of the fine-tuned skill,
    // mean embedding distance from the terminal state to the nearest center
    Env probe(spec_a);
    double acc = 0.0;
    for (int e = 0; e < finetune.eval_episodes; ++e) {
      Vector state = probe.Reset(DeriveSeed(seed, {kChainDistEval,
                                                   static_cast<std::uint64_t>(iter),
                                                   static_cast<std::uint64_t>(e)}));
      while (true) {
        StepResult step = probe.Step(policy.MeanAction(state));
        state = step.next_state;
        if (step.done) break;
      }
      Vector emb = encoder.Encode(state);
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& c : centers) best = std::min(best, Distance(emb, c));
      acc += best;
    }
    report.iterations.push_back(iter);
    report.mean_center_distance.push_back(acc / finetune.eval_episodes);
  }

  report.chained_success_post =
      EvalChained(policy, ckpt_b.policy, spec_a, spec_b, finetune.chain_eval_episodes,
                  DeriveSeed(seed, kChainEval));

  SaveCheckpoint(out_dir + "/ckpt/finetuned", policy, encoder, GoalSet(1));
  std::ofstream csv(out_dir + "/chain_report.csv");
  WriteChainReportCsv(csv, report);
  return report;
}

void WriteChainReportCsv(std::ostream& out, const ChainReport& report) {
  out << "iteration,mean_center_distance,chained_success_pre,chained_success_post\n";
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    out << report.iterations[i] << ',' << FormatG(report.mean_center_distance[i]) << ','
        << FormatG(report.chained_success_pre) << ',' << FormatG(report.chained_success_post)
        << "\n";
  }
  if (report.iterations.empty()) {
    out << "0,0," << FormatG(report.chained_success_pre) << ','
        << FormatG(report.chained_success_post) << "\n";
  }
}

void RunSkillChain(const ExperimentConfig& config_a, const ExperimentConfig& config_b,
                   const ExperimentConfig& finetune, const std::string& ckpt_a_dir,
                   const std::string& ckpt_b_dir, const std::string& out_dir) {
  finetune.Validate();
  LoadedCheckpoint ckpt_a = LoadCheckpoint(ckpt_a_dir);
  LoadedCheckpoint ckpt_b = LoadCheckpoint(ckpt_b_dir);
  for (std::uint64_t seed : finetune.seeds) {
    RunSkillChainSeed(config_a, config_b, finetune, ckpt_a, ckpt_b, seed,
                      out_dir + "/seed_" + std::to_string(seed));
  }
}

}  // namespace tdrp
