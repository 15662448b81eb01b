#include "tdrp/grad_check.hpp"

#include <cmath>
#include <stdexcept>

namespace tdrp {

double FiniteDiffCheck(const FlatLoss& loss, std::span<const double> at, double h) {
  if (h <= 0.0) throw std::invalid_argument("FiniteDiffCheck: h must be positive");
  std::vector<double> point(at.begin(), at.end());
  std::vector<double> analytic = loss.gradient(point);
  if (analytic.size() != point.size()) {
    throw std::invalid_argument("FiniteDiffCheck: gradient size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    double saved = point[i];
    point[i] = saved + h;
    double up = loss.value(point);
    point[i] = saved - h;
    double down = loss.value(point);
    point[i] = saved;
    double central = (up - down) / (2.0 * h);
    if (!std::isfinite(central)) {
      throw std::runtime_error("FiniteDiffCheck: non-finite central difference");
    }
    double err = std::abs(analytic[i] - central) / (std::abs(central) + 1e-8);
    if (err > worst) worst = err;
  }
  return worst;
}

double FiniteDiffCheck(const ScalarLoss& loss, const MlpParams& at, double h) {
  MlpParams shape = at;
  FlatLoss flat;
  flat.value = [&loss, shape](std::span<const double> x) mutable {
    shape.LoadFlat(x);
    return loss.value(shape);
  };
  flat.gradient = [&loss, shape](std::span<const double> x) mutable {
    shape.LoadFlat(x);
    MlpParams g = loss.gradient(shape);
    std::vector<double> out;
    g.FlattenTo(out);
    return out;
  };
  std::vector<double> point;
  at.FlattenTo(point);
  return FiniteDiffCheck(flat, point, h);
}

}  // namespace tdrp
