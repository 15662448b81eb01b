#include "tdrp/trajectory.hpp"

#include <numeric>
#include <stdexcept>

namespace tdrp {

double Trajectory::RawReturn() const {
  return std::accumulate(raw_rewards.begin(), raw_rewards.end(), 0.0);
}

double Trajectory::ShapedReturn() const {
  return std::accumulate(shaped_rewards.begin(), shaped_rewards.end(), 0.0);
}

TrajectoryBuffer::TrajectoryBuffer(int transition_capacity) : capacity_(transition_capacity) {
  if (transition_capacity < 1) {
    throw std::invalid_argument("TrajectoryBuffer: capacity must be positive");
  }
}

void TrajectoryBuffer::Push(Trajectory trajectory) {
  total_transitions_ += trajectory.length();
  trajectories_.push_back(std::move(trajectory));
  while (total_transitions_ > capacity_ && trajectories_.size() > 1) {
    total_transitions_ -= trajectories_.front().length();
    trajectories_.pop_front();
  }
}

std::vector<const Trajectory*> TrajectoryBuffer::View() const {
  std::vector<const Trajectory*> out;
  out.reserve(trajectories_.size());
  for (const auto& t : trajectories_) out.push_back(&t);
  return out;
}

}  // namespace tdrp
