#ifndef TDRP_KMEANS_HPP_
#define TDRP_KMEANS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "tdrp/vec.hpp"

namespace tdrp {

struct KmeansResult {
  std::vector<Vector> centers;
  std::vector<int> assignments;  // index of the nearest center per point
  double inertia = 0.0;          // sum of squared point-to-center distances
  int iterations = 0;
  int k = 0;                     // after clamping to the point count
};

// Lloyd's algorithm from a k-means++ seeded initialization. Deterministic
// given (points, k, seed): ties break to the lowest index, empty clusters are
// re-seeded to the point farthest from its assigned center. k larger than the
// point count is clamped (recorded in the result).
KmeansResult Kmeans(std::span<const Vector> points, int k, std::uint64_t seed,
                    int max_iter = 100, double tol = 1e-10);

}  // namespace tdrp

#endif  // TDRP_KMEANS_HPP_
