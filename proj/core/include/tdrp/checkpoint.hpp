#ifndef TDRP_CHECKPOINT_HPP_
#define TDRP_CHECKPOINT_HPP_

#include <string>

#include "tdrp/encoder.hpp"
#include "tdrp/ppo.hpp"
#include "tdrp/rewards.hpp"

namespace tdrp {

// Versioned textual dump of every learned parameter plus the goal set.
// Values are written as C hexfloats, so a save/load cycle is bit-exact.
void SaveCheckpoint(const std::string& dir, const Policy& policy,
                    const Encoder& encoder, const GoalSet& goal_set);

struct LoadedCheckpoint {
  Policy policy;
  Encoder encoder;
  GoalSet goal_set;
};

LoadedCheckpoint LoadCheckpoint(const std::string& dir);

}  // namespace tdrp

#endif  // TDRP_CHECKPOINT_HPP_
