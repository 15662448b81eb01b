#ifndef TDRP_ENVS_HPP_
#define TDRP_ENVS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "tdrp/rng.hpp"
#include "tdrp/vec.hpp"

namespace tdrp {

// Built-in deterministic environments. All rewards are sparse: 1 on the
// transition that reaches the goal, 0 otherwise. Observations append
// `distractors` coordinates of i.i.d. noise, resampled fresh every step, so
// raw-state Euclidean distance carries task-irrelevant variance.
enum class EnvId { kChain, kUmaze, kChain2Skill };

// chain2skill variants: the full task, or one of the two skills.
enum class SkillRole { kFull, kSkillA, kSkillB };

std::string EnvIdName(EnvId id);
EnvId EnvIdFromName(const std::string& name);

struct EnvSpec {
  EnvId id = EnvId::kChain;
  int distractors = 0;
  double noise_scale = 0.1;
  int horizon = 0;           // 0 means the per-env default
  double goal_radius = 0.1;
  double step_size = 0.1;    // Δ, max per-step displacement per axis
  double arm_length = 1.0;   // geometry scale
  std::uint64_t seed = 0;
  SkillRole skill = SkillRole::kFull;

  int intrinsic_dim() const { return id == EnvId::kChain ? 1 : 2; }
  int state_dim() const { return intrinsic_dim() + distractors; }
  int action_dim() const { return intrinsic_dim(); }
  int effective_horizon() const;
  void Validate() const;
};

// Skill wrappers for the chain2skill task. Skill A reaches a handoff line
// from the task start; skill B reaches the final goal from a narrow initial
// band at the mouth of a walled gap. Skill A's unconstrained terminal states
// only partially fall inside skill B's initial set.
EnvSpec SkillAEnv(const EnvSpec& base);
EnvSpec SkillBEnv(const EnvSpec& base);

struct StepResult {
  Vector next_state;
  double reward = 0.0;
  bool done = false;
  bool success = false;
};

class Env {
 public:
  explicit Env(EnvSpec spec);

  Vector Reset(std::uint64_t episode_seed);
  // Starts an episode from a given intrinsic position (skill handoff).
  Vector ResetFrom(const Vector& intrinsic, std::uint64_t episode_seed);
  StepResult Step(const Vector& action);

  bool done() const { return done_; }
  int t() const { return t_; }
  const EnvSpec& spec() const { return spec_; }
  Vector intrinsic() const { return position_; }

  // True if the intrinsic position is inside skill B's initial region.
  bool InSkillBInitialRegion(const Vector& intrinsic) const;

  static Vector IntrinsicOf(const EnvSpec& spec, const Vector& state);

 private:
  Vector BuildState();
  bool Blocked(double x, double y) const;
  bool IsSuccess() const;

  EnvSpec spec_;
  Rng rng_;
  Vector position_;
  int t_ = 0;
  bool done_ = true;
};

// Deterministic near-solution controller with seeded action noise; used for
// demonstrations, encoder-training corpora, and evaluation baselines.
class ScriptedPolicy {
 public:
  ScriptedPolicy(const EnvSpec& spec, double speed, double noise, std::uint64_t seed);
  void BeginEpisode(std::uint64_t episode_seed);
  Vector Act(const Vector& state);

 private:
  EnvSpec spec_;
  double speed_;
  double noise_;
  std::uint64_t seed_;
  Rng rng_;
  int waypoint_ = 0;
};

}  // namespace tdrp

#endif  // TDRP_ENVS_HPP_
