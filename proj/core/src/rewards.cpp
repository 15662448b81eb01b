#include "tdrp/rewards.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tdrp/kmeans.hpp"

namespace tdrp {

std::string RewardModeName(RewardMode mode) {
  switch (mode) {
    case RewardMode::kNone: return "none";
    case RewardMode::kGoalState: return "goal_state";
    case RewardMode::kClusteredGoals: return "clustered_goals";
    case RewardMode::kSkillChain: return "skill_chain";
  }
  throw std::logic_error("RewardModeName: unknown mode");
}

RewardMode RewardModeFromName(const std::string& name) {
  if (name == "none") return RewardMode::kNone;
  if (name == "goal_state") return RewardMode::kGoalState;
  if (name == "clustered_goals") return RewardMode::kClusteredGoals;
  if (name == "skill_chain") return RewardMode::kSkillChain;
  throw std::invalid_argument("unknown reward mode: " + name);
}

void RewardSpec::Validate() const {
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw std::invalid_argument("RewardSpec: lambda factors must be >= 0");
  }
  if (clusters < 1) throw std::invalid_argument("RewardSpec: clusters must be >= 1");
  if (mode == RewardMode::kGoalState && !goal_state.has_value()) {
    throw std::invalid_argument("RewardSpec: goal_state mode requires a goal state");
  }
}

namespace {
double MinCenterDistance(const Vector& embedding, std::span<const Vector> centers) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& c : centers) best = std::min(best, Distance(embedding, c));
  return best;
}
}  // namespace

double GoalReward(double raw_reward, const Vector& state, const Vector& goal,
                  double lambda1, const Encoder& encoder) {
  if (lambda1 < 0.0) throw std::invalid_argument("GoalReward: lambda1 must be >= 0");
  return raw_reward - lambda1 * encoder.EmbeddingDistance(state, goal);
}

double ClusteredGoalReward(double raw_reward, const Vector& state,
                           std::span<const Vector> centers, double lambda1,
                           const Encoder& encoder) {
  if (centers.empty()) throw std::invalid_argument("ClusteredGoalReward: empty centers");
  return raw_reward - lambda1 * MinCenterDistance(encoder.Encode(state), centers);
}

double ChainReward(double raw_reward, const Vector& state,
                   std::span<const Vector> centers, double lambda2,
                   const Encoder& encoder) {
  if (centers.empty()) throw std::invalid_argument("ChainReward: empty centers");
  return raw_reward - lambda2 * MinCenterDistance(encoder.Encode(state), centers);
}

double ApplyShaping(const RewardSpec& spec, double raw_reward, const Vector& state,
                    const Encoder* encoder, std::span<const Vector> centers) {
  switch (spec.mode) {
    case RewardMode::kNone:
      return raw_reward;
    case RewardMode::kGoalState:
      if (!spec.goal_state.has_value()) {
        throw std::invalid_argument("ApplyShaping: goal_state mode without goal");
      }
      return GoalReward(raw_reward, state, *spec.goal_state, spec.lambda1, *encoder);
    case RewardMode::kClusteredGoals:
      if (centers.empty()) return raw_reward;  // cold start: no goals known yet
      return ClusteredGoalReward(raw_reward, state, centers, spec.lambda1, *encoder);
    case RewardMode::kSkillChain:
      return ChainReward(raw_reward, state, centers, spec.lambda2, *encoder);
  }
  throw std::logic_error("ApplyShaping: unknown mode");
}

GoalSet::GoalSet(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("GoalSet: capacity must be >= 1");
}

void GoalSet::Update(const Vector& final_state, bool success) {
  if (!success) return;
  states_.push_back(final_state);
  while (static_cast<int>(states_.size()) > capacity_) states_.pop_front();
  dirty_ = true;
}

void GoalSet::SeedFromDemonstrations(std::span<const Vector> states) {
  for (const Vector& s : states) Update(s, true);
}

const std::vector<Vector>& GoalSet::RefreshCenters(const Encoder& encoder, int n,
                                                   std::uint64_t seed) {
  if (states_.empty()) {
    throw std::runtime_error("GoalSet::RefreshCenters: goal set is empty");
  }
  if (!dirty_ && cached_round_ == encoder.rounds() && cached_n_ == n) return centers_;
  std::vector<Vector> embeddings;
  embeddings.reserve(states_.size());
  for (const Vector& s : states_) embeddings.push_back(encoder.Encode(s));
  KmeansResult km = Kmeans(embeddings, std::min<int>(n, static_cast<int>(embeddings.size())),
                           seed);
  centers_ = std::move(km.centers);
  dirty_ = false;
  cached_round_ = encoder.rounds();
  cached_n_ = n;
  return centers_;
}

std::vector<Vector> LoadDemonstrationStates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open demonstration file: " + path);
  std::vector<Vector> states;
  std::string line;
  int expected_dim = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (expected_dim < 0) expected_dim = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != expected_dim) {
      throw std::runtime_error("demonstration file has ragged rows: " + path);
    }
    states.push_back(Vector::FromData(std::move(row)));
  }
  if (states.empty()) throw std::runtime_error("demonstration file is empty: " + path);
  return states;
}

void SaveDemonstrationStates(const std::string& path, std::span<const Vector> states) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write demonstration file: " + path);
  char buf[64];
  for (const Vector& s : states) {
    for (int i = 0; i < s.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", s[i]);
      if (i) out << ",";
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace tdrp
