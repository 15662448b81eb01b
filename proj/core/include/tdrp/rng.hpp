#ifndef TDRP_RNG_HPP_
#define TDRP_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tdrp {

// Splits a root seed into independent stream seeds. Every source of
// randomness in an experiment is reached through a (root, path) derivation,
// so components can be re-seeded independently and runs replayed exactly.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t stream);
std::uint64_t DeriveSeed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Seeded generator with hand-rolled distributions. The standard library's
// distribution objects are implementation-defined; these are not, so a
// (seed, call sequence) pair reproduces the same numbers everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // uniform in [0, 1) with 53 random bits
  double NextDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double NextUniform(double lo, double hi) {
    return lo + (hi - lo) * NextDouble();
  }

  // uniform in [0, n)
  int NextInt(int n);

  // standard normal, Box-Muller (cosine branch only)
  double NextGaussian();

  Rng Child(std::uint64_t stream) { return Rng(DeriveSeed(engine_(), stream)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tdrp

#endif  // TDRP_RNG_HPP_
