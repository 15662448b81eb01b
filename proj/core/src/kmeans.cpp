#include "tdrp/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tdrp/rng.hpp"

namespace tdrp {

namespace {

int NearestCenter(const Vector& p, const std::vector<Vector>& centers) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(centers.size()); ++c) {
    double d = SquaredDistance(p, centers[c]);
    if (d < best_d) {  // strict: ties keep the lowest index
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Vector> PlusPlusInit(std::span<const Vector> points, int k, Rng& rng) {
  std::vector<Vector> centers;
  centers.reserve(k);
  centers.push_back(points[rng.NextInt(static_cast<int>(points.size()))]);
  std::vector<double> d2(points.size());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& c : centers) best = std::min(best, SquaredDistance(points[i], c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // all points coincide with existing centers; duplicate the first point
      centers.push_back(points[0]);
      continue;
    }
    double r = rng.NextDouble() * total;
    std::size_t pick = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      acc += d2[i];
      if (r < acc) {
        pick = i;
        break;
      }
      if (i + 1 == points.size()) pick = i;
    }
    centers.push_back(points[pick]);
  }
  return centers;
}

}  // namespace

KmeansResult Kmeans(std::span<const Vector> points, int k, std::uint64_t seed,
                    int max_iter, double tol) {
  if (points.empty()) throw std::invalid_argument("Kmeans: empty input");
  if (k < 1) throw std::invalid_argument("Kmeans: k must be >= 1");
  int n = static_cast<int>(points.size());
  k = std::min(k, n);

  Rng rng(seed);
  KmeansResult result;
  result.k = k;
  result.centers = PlusPlusInit(points, k, rng);
  result.assignments.assign(n, 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    result.iterations = iter + 1;
    for (int i = 0; i < n; ++i) result.assignments[i] = NearestCenter(points[i], result.centers);

    std::vector<Vector> sums(k, Vector(points[0].size()));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[result.assignments[i]] += points[i];
      ++counts[result.assignments[i]];
    }

    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      Vector next(points[0].size());
      if (counts[c] > 0) {
        next = sums[c] * (1.0 / counts[c]);
      } else {
        // re-seed an empty cluster to the point farthest from its own center
        int farthest = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          double d = SquaredDistance(points[i], result.centers[result.assignments[i]]);
          if (d > far_d) {
            far_d = d;
            farthest = i;
          }
        }
        next = points[farthest];
      }
      movement = std::max(movement, Distance(next, result.centers[c]));
      result.centers[c] = std::move(next);
    }
    if (movement < tol) break;
  }

  // final assignment and inertia against the settled centers
  result.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    result.assignments[i] = NearestCenter(points[i], result.centers);
    result.inertia += SquaredDistance(points[i], result.centers[result.assignments[i]]);
  }
  return result;
}

}  // namespace tdrp
