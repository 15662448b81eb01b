#ifndef TDRP_STATS_HPP_
#define TDRP_STATS_HPP_

#include <span>
#include <vector>

namespace tdrp {

double Mean(std::span<const double> xs);
double StdDev(std::span<const double> xs);  // population (divides by n)

// Ranks with ties replaced by average ranks, 1-based.
std::vector<double> AverageRanks(std::span<const double> xs);

// Spearman rank correlation; returns 0 for degenerate (constant) inputs.
double SpearmanRho(std::span<const double> xs, std::span<const double> ys);

}  // namespace tdrp

#endif  // TDRP_STATS_HPP_
