#include "tdrp/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdrp {

namespace {

double Clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// chain2skill geometry (in units of arm_length):
//   plane [0,2]x[0,1]; wall slab x in (1.15,1.25) with a gap at y in (0.4,0.6)
//   skill A: start box [0.05,0.15]x[0.30,0.70], success at x >= 1.0
//   skill B: start box [1.00,1.10]x[0.42,0.58], goal (1.8,0.5)
constexpr double kWallLo = 1.15, kWallHi = 1.25;
constexpr double kGapLo = 0.4, kGapHi = 0.6;
constexpr double kHandoffX = 1.0;

// umaze geometry (units of arm_length): unit square with a central block
// x in (0.4,0.6), y > 0.4; start top of the left arm, goal top of the right.
constexpr double kBlockXLo = 0.4, kBlockXHi = 0.6, kBlockYLo = 0.4;

}  // namespace

std::string EnvIdName(EnvId id) {
  switch (id) {
    case EnvId::kChain: return "chain";
    case EnvId::kUmaze: return "umaze";
    case EnvId::kChain2Skill: return "chain2skill";
  }
  throw std::logic_error("EnvIdName: unknown id");
}

EnvId EnvIdFromName(const std::string& name) {
  if (name == "chain") return EnvId::kChain;
  if (name == "umaze") return EnvId::kUmaze;
  if (name == "chain2skill") return EnvId::kChain2Skill;
  throw std::invalid_argument("unknown env id: " + name);
}

int EnvSpec::effective_horizon() const {
  if (horizon > 0) return horizon;
  switch (id) {
    case EnvId::kChain: return 64;
    case EnvId::kUmaze: return 200;
    case EnvId::kChain2Skill: return skill == SkillRole::kFull ? 200 : 100;
  }
  return 100;
}

void EnvSpec::Validate() const {
  if (effective_horizon() < 2) throw std::invalid_argument("EnvSpec: horizon must be >= 2");
  if (distractors < 0) throw std::invalid_argument("EnvSpec: distractors must be >= 0");
  if (noise_scale < 0.0) throw std::invalid_argument("EnvSpec: noise_scale must be >= 0");
  if (goal_radius <= 0.0) throw std::invalid_argument("EnvSpec: goal_radius must be > 0");
  if (step_size <= 0.0) throw std::invalid_argument("EnvSpec: step_size must be > 0");
  if (arm_length <= 0.0) throw std::invalid_argument("EnvSpec: arm_length must be > 0");
  if (skill != SkillRole::kFull && id != EnvId::kChain2Skill) {
    throw std::invalid_argument("EnvSpec: skill roles only apply to chain2skill");
  }
}

EnvSpec SkillAEnv(const EnvSpec& base) {
  EnvSpec spec = base;
  spec.id = EnvId::kChain2Skill;
  spec.skill = SkillRole::kSkillA;
  if (base.horizon == 0) spec.horizon = 100;
  return spec;
}

EnvSpec SkillBEnv(const EnvSpec& base) {
  EnvSpec spec = base;
  spec.id = EnvId::kChain2Skill;
  spec.skill = SkillRole::kSkillB;
  if (base.horizon == 0) spec.horizon = 100;
  return spec;
}

Env::Env(EnvSpec spec) : spec_(spec), rng_(0) {
  spec_.Validate();
}

Vector Env::Reset(std::uint64_t episode_seed) {
  rng_ = Rng(DeriveSeed(spec_.seed, episode_seed));
  const double a = spec_.arm_length;
  position_ = Vector(spec_.intrinsic_dim());
  switch (spec_.id) {
    case EnvId::kChain:
      position_[0] = 0.0;
      break;
    case EnvId::kUmaze:
      position_[0] = rng_.NextUniform(0.15 * a, 0.25 * a);
      position_[1] = rng_.NextUniform(0.85 * a, 0.95 * a);
      break;
    case EnvId::kChain2Skill:
      if (spec_.skill == SkillRole::kSkillB) {
        position_[0] = rng_.NextUniform(1.00 * a, 1.10 * a);
        position_[1] = rng_.NextUniform(0.42 * a, 0.58 * a);
      } else {
        position_[0] = rng_.NextUniform(0.05 * a, 0.15 * a);
        position_[1] = rng_.NextUniform(0.30 * a, 0.70 * a);
      }
      break;
  }
  t_ = 0;
  done_ = false;
  return BuildState();
}

Vector Env::ResetFrom(const Vector& intrinsic, std::uint64_t episode_seed) {
  if (intrinsic.size() != spec_.intrinsic_dim()) {
    throw std::invalid_argument("Env::ResetFrom: intrinsic dimension mismatch");
  }
  rng_ = Rng(DeriveSeed(spec_.seed, episode_seed));
  position_ = intrinsic;
  t_ = 0;
  done_ = false;
  return BuildState();
}

Vector Env::BuildState() {
  Vector state(spec_.state_dim());
  for (int i = 0; i < position_.size(); ++i) state[i] = position_[i];
  for (int i = 0; i < spec_.distractors; ++i) {
    state[position_.size() + i] = spec_.noise_scale * rng_.NextGaussian();
  }
  return state;
}

bool Env::Blocked(double x, double y) const {
  const double a = spec_.arm_length;
  if (spec_.id == EnvId::kUmaze) {
    if (x < 0.0 || x > a || y < 0.0 || y > a) return true;
    return x > kBlockXLo * a && x < kBlockXHi * a && y > kBlockYLo * a;
  }
  if (spec_.id == EnvId::kChain2Skill) {
    if (x < 0.0 || x > 2.0 * a || y < 0.0 || y > a) return true;
    bool in_slab = x > kWallLo * a && x < kWallHi * a;
    bool in_gap = y > kGapLo * a && y < kGapHi * a;
    return in_slab && !in_gap;
  }
  return false;  // chain is an unbounded line
}

bool Env::IsSuccess() const {
  const double a = spec_.arm_length;
  switch (spec_.id) {
    case EnvId::kChain:
      return std::abs(position_[0] - a) < spec_.goal_radius;
    case EnvId::kUmaze: {
      double dx = position_[0] - 0.8 * a;
      double dy = position_[1] - 0.9 * a;
      return std::sqrt(dx * dx + dy * dy) < spec_.goal_radius;
    }
    case EnvId::kChain2Skill: {
      if (spec_.skill == SkillRole::kSkillA) return position_[0] >= kHandoffX * a;
      double dx = position_[0] - 1.8 * a;
      double dy = position_[1] - 0.5 * a;
      return std::sqrt(dx * dx + dy * dy) < spec_.goal_radius;
    }
  }
  return false;
}

StepResult Env::Step(const Vector& action) {
  if (done_) throw std::logic_error("Env::Step: episode is done, call Reset");
  if (action.size() != spec_.action_dim()) {
    throw std::invalid_argument("Env::Step: action dimension mismatch");
  }
  action.EnsureFinite("Env::Step action");

  const double d = spec_.step_size;
  if (spec_.id == EnvId::kChain) {
    position_[0] += Clip(action[0], -1.0, 1.0) * d;
  } else {
    // axis-separated collision: a blocked axis leaves that coordinate unchanged
    double nx = position_[0] + Clip(action[0], -1.0, 1.0) * d;
    if (!Blocked(nx, position_[1])) position_[0] = nx;
    double ny = position_[1] + Clip(action[1], -1.0, 1.0) * d;
    if (!Blocked(position_[0], ny)) position_[1] = ny;
  }
  ++t_;

  StepResult result;
  result.success = IsSuccess();
  result.reward = result.success ? 1.0 : 0.0;
  result.done = result.success || t_ >= spec_.effective_horizon();
  result.next_state = BuildState();
  done_ = result.done;
  return result;
}

bool Env::InSkillBInitialRegion(const Vector& intrinsic) const {
  if (spec_.id != EnvId::kChain2Skill) return false;
  const double a = spec_.arm_length;
  return intrinsic[0] >= 1.00 * a && intrinsic[0] <= 1.10 * a &&
         intrinsic[1] >= 0.42 * a && intrinsic[1] <= 0.58 * a;
}

Vector Env::IntrinsicOf(const EnvSpec& spec, const Vector& state) {
  if (state.size() != spec.state_dim()) {
    throw std::invalid_argument("IntrinsicOf: state dimension mismatch");
  }
  Vector out(spec.intrinsic_dim());
  for (int i = 0; i < out.size(); ++i) out[i] = state[i];
  return out;
}

ScriptedPolicy::ScriptedPolicy(const EnvSpec& spec, double speed, double noise,
                               std::uint64_t seed)
    : spec_(spec), speed_(speed), noise_(noise), seed_(seed), rng_(seed) {
  if (speed <= 0.0 || speed > 1.0) {
    throw std::invalid_argument("ScriptedPolicy: speed must be in (0, 1]");
  }
}

void ScriptedPolicy::BeginEpisode(std::uint64_t episode_seed) {
  rng_ = Rng(DeriveSeed(seed_, episode_seed));
  waypoint_ = 0;
}

Vector ScriptedPolicy::Act(const Vector& state) {
  const double a = spec_.arm_length;
  Vector intr = Env::IntrinsicOf(spec_, state);
  Vector action(spec_.action_dim());

  if (spec_.id == EnvId::kChain) {
    action[0] = Clip(speed_ + noise_ * rng_.NextGaussian(), -1.0, 1.0);
    return action;
  }

  // waypoint lists at unit scale
  static const double kUmazeWps[3][2] = {{0.2, 0.25}, {0.8, 0.25}, {0.8, 0.9}};
  static const double kSkillBWps[2][2] = {{1.2, 0.5}, {1.8, 0.5}};
  static const double kFullWps[2][2] = {{1.2, 0.5}, {1.8, 0.5}};

  const double(*wps)[2] = nullptr;
  int n_wps = 0;
  if (spec_.id == EnvId::kUmaze) {
    wps = kUmazeWps;
    n_wps = 3;
  } else if (spec_.skill == SkillRole::kSkillB) {
    wps = kSkillBWps;
    n_wps = 2;
  } else if (spec_.skill == SkillRole::kFull) {
    wps = kFullWps;
    n_wps = 2;
  }

  double tx, ty;
  if (wps == nullptr) {
    // skill A: head straight for the handoff line, keeping the entry y
    tx = intr[0] + 10.0 * a;
    ty = intr[1];
  } else {
    if (waypoint_ >= n_wps) waypoint_ = n_wps - 1;
    while (waypoint_ + 1 < n_wps) {
      double dx = intr[0] - wps[waypoint_][0] * a;
      double dy = intr[1] - wps[waypoint_][1] * a;
      if (std::sqrt(dx * dx + dy * dy) < 0.12 * a) {
        ++waypoint_;
      } else {
        break;
      }
    }
    tx = wps[waypoint_][0] * a;
    ty = wps[waypoint_][1] * a;
  }

  double dx = tx - intr[0];
  double dy = ty - intr[1];
  double norm = std::sqrt(dx * dx + dy * dy);
  if (norm > 1e-12) {
    dx /= norm;
    dy /= norm;
  }
  action[0] = Clip(dx * speed_ + noise_ * rng_.NextGaussian(), -1.0, 1.0);
  action[1] = Clip(dy * speed_ + noise_ * rng_.NextGaussian(), -1.0, 1.0);
  return action;
}

}  // namespace tdrp
