#ifndef TDRP_TRAJECTORY_HPP_
#define TDRP_TRAJECTORY_HPP_

#include <deque>
#include <vector>

#include "tdrp/vec.hpp"

namespace tdrp {

// One episode. Parallel arrays over steps; states[t] is the state an action
// was taken from, final_state the state the episode ended in, so the full
// state sequence has length() + 1 entries.
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> actions;
  std::vector<double> raw_rewards;
  std::vector<double> shaped_rewards;
  std::vector<double> log_probs;
  std::vector<double> values;
  Vector final_state;
  bool succeeded = false;
  bool truncated = false;   // ended by the time limit, not by success
  double final_value = 0.0; // V(final_state), the truncation bootstrap

  int length() const { return static_cast<int>(states.size()); }
  int num_states() const { return length() + 1; }
  const Vector& state_at(int i) const {
    return i == length() ? final_state : states[i];
  }
  double RawReturn() const;
  double ShapedReturn() const;
};

// Encoder training buffer: most recent trajectories, capped by total
// transition count. Oldest whole episodes are evicted first.
class TrajectoryBuffer {
 public:
  explicit TrajectoryBuffer(int transition_capacity = 50000);

  void Push(Trajectory trajectory);
  const std::deque<Trajectory>& trajectories() const { return trajectories_; }
  int total_transitions() const { return total_transitions_; }
  int capacity() const { return capacity_; }
  bool empty() const { return trajectories_.empty(); }
  std::vector<const Trajectory*> View() const;

 private:
  int capacity_;
  int total_transitions_ = 0;
  std::deque<Trajectory> trajectories_;
};

}  // namespace tdrp

#endif  // TDRP_TRAJECTORY_HPP_
