#ifndef TDRP_ADAM_HPP_
#define TDRP_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "tdrp/mlp.hpp"

namespace tdrp {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second-moment accumulators over a flat parameter vector, with bias
// correction. The step counter increases by exactly one per Step call.
class AdamState {
 public:
  AdamState() = default;
  AdamState(std::size_t parameter_count, AdamConfig config);

  // in-place update: params -= lr * m_hat / (sqrt(v_hat) + eps)
  void Step(std::span<double> params, std::span<const double> grads);

  std::int64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }
  std::size_t parameter_count() const { return m_.size(); }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t step_count_ = 0;
};

// Structured convenience: flattens params/grads around a single Adam step.
void AdamStep(MlpParams& params, const MlpParams& grads, AdamState& state);

}  // namespace tdrp

#endif  // TDRP_ADAM_HPP_
