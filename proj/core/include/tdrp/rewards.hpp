#ifndef TDRP_REWARDS_HPP_
#define TDRP_REWARDS_HPP_

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdrp/encoder.hpp"
#include "tdrp/vec.hpp"

namespace tdrp {

enum class RewardMode { kNone, kGoalState, kClusteredGoals, kSkillChain };

std::string RewardModeName(RewardMode mode);
RewardMode RewardModeFromName(const std::string& name);

struct RewardSpec {
  RewardMode mode = RewardMode::kNone;
  double lambda1 = 0.1;
  double lambda2 = 0.1;
  int clusters = 8;  // n; skill chaining defaults to 20 via config
  std::optional<Vector> goal_state;

  void Validate() const;
};

// r' = raw − λ₁·‖φ(state) − φ(goal)‖₂
double GoalReward(double raw_reward, const Vector& state, const Vector& goal,
                  double lambda1, const Encoder& encoder);

// r' = raw − λ₁·min_k ‖φ(state) − c_k‖₂ over embedding-space centers
double ClusteredGoalReward(double raw_reward, const Vector& state,
                           std::span<const Vector> centers, double lambda1,
                           const Encoder& encoder);

// r' = raw − λ₂·min_k ‖φ(state) − c_k‖₂, centers from the next skill's
// initial-state set
double ChainReward(double raw_reward, const Vector& state,
                   std::span<const Vector> centers, double lambda2,
                   const Encoder& encoder);

// Dispatch on the spec. Clustered mode degrades to the raw reward while no
// centers exist yet (cold start before the first success/demonstration);
// chain mode requires centers.
double ApplyShaping(const RewardSpec& spec, double raw_reward, const Vector& state,
                    const Encoder* encoder, std::span<const Vector> centers);

// Final states of successful episodes, FIFO-capped, with cached k-means
// centers in embedding space. The cache is invalidated by appends and by
// encoder round advances.
class GoalSet {
 public:
  explicit GoalSet(int capacity = 128);

  // appends on success (evicting the oldest past capacity), no-op otherwise
  void Update(const Vector& final_state, bool success);
  void SeedFromDemonstrations(std::span<const Vector> states);

  // encodes all goal states, runs k-means with k = min(n, size), caches
  const std::vector<Vector>& RefreshCenters(const Encoder& encoder, int n,
                                            std::uint64_t seed);
  const std::vector<Vector>& centers() const { return centers_; }
  bool has_centers() const { return !centers_.empty(); }

  const std::deque<Vector>& states() const { return states_; }
  int size() const { return static_cast<int>(states_.size()); }
  bool empty() const { return states_.empty(); }
  int capacity() const { return capacity_; }

 private:
  int capacity_;
  std::deque<Vector> states_;
  std::vector<Vector> centers_;
  bool dirty_ = true;
  int cached_round_ = -1;
  int cached_n_ = -1;
};

// Demonstration goal-seed file: CSV of raw states, one per row.
std::vector<Vector> LoadDemonstrationStates(const std::string& path);
void SaveDemonstrationStates(const std::string& path, std::span<const Vector> states);

}  // namespace tdrp

#endif  // TDRP_REWARDS_HPP_
