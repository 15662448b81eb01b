#include "tdrp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdrp {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t stream) {
  return SplitMix64(SplitMix64(root) ^ SplitMix64(stream + 0x632BE59BD9B4E019ULL));
}

std::uint64_t DeriveSeed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = root;
  for (std::uint64_t p : path) s = DeriveSeed(s, p);
  return s;
}

int Rng::NextInt(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::NextInt: n must be positive");
  // Lemire multiply-shift; bias is immaterial here, portability is not.
  return static_cast<int>((static_cast<unsigned __int128>(NextU64()) *
                           static_cast<unsigned __int128>(n)) >> 64);
}

double Rng::NextGaussian() {
  double u1 = 1.0 - NextDouble();  // (0, 1]
  double u2 = NextDouble();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace tdrp
