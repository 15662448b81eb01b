#include "tdrp/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace tdrp {

AdamState::AdamState(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {
  if (config.learning_rate <= 0.0) {
    throw std::invalid_argument("AdamState: learning rate must be positive");
  }
}

void AdamState::Step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("AdamState::Step: shape mismatch");
  }
  ++step_count_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  for (std::size_t i = 0; i < m_.size(); ++i) {
    double g = grads[i];
    if (!std::isfinite(g)) throw std::runtime_error("AdamState::Step: non-finite gradient");
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    double m_hat = m_[i] / correction1;
    double v_hat = v_[i] / correction2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

void AdamStep(MlpParams& params, const MlpParams& grads, AdamState& state) {
  if (params.ParameterCount() != grads.ParameterCount() ||
      params.ParameterCount() != state.parameter_count()) {
    throw std::invalid_argument("AdamStep: shape mismatch");
  }
  std::vector<double> flat_p, flat_g;
  params.FlattenTo(flat_p);
  grads.FlattenTo(flat_g);
  state.Step(flat_p, flat_g);
  params.LoadFlat(flat_p);
}

}  // namespace tdrp
