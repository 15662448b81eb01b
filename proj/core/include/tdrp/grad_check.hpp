#ifndef TDRP_GRAD_CHECK_HPP_
#define TDRP_GRAD_CHECK_HPP_

#include <functional>
#include <span>
#include <vector>

#include "tdrp/mlp.hpp"

namespace tdrp {

// A differentiable scalar objective over a flat parameter vector: the value
// and its analytic gradient, evaluated at arbitrary points.
struct FlatLoss {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;
};

// Same, phrased over structured network parameters.
struct ScalarLoss {
  std::function<double(const MlpParams&)> value;
  std::function<MlpParams(const MlpParams&)> gradient;
};

// Compares the analytic gradient against central finite differences at `at`.
// Returns max over parameters of |analytic - central| / (|central| + 1e-8).
double FiniteDiffCheck(const FlatLoss& loss, std::span<const double> at, double h);
double FiniteDiffCheck(const ScalarLoss& loss, const MlpParams& at, double h);

}  // namespace tdrp

#endif  // TDRP_GRAD_CHECK_HPP_
