#ifndef FAIRBANDIT_TYPES_HPP
#define FAIRBANDIT_TYPES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace fairbandit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// All stochastic components draw from this engine. Trial-level streams are
// derived from a master seed with derive_seed, never by incrementing seeds.
using Rng = std::mt19937_64;

// SplitMix64 output function (Steele, Lea, Flood 2014). The sequence constant
// is the 64-bit golden ratio.
inline constexpr std::uint64_t kSeedSequenceConstant = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Stream i of a master seed: splitmix64 evaluated at the i-th point of the
// golden-ratio progression. Distinct (master, index) pairs give independent
// streams; indices need not be contiguous.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * kSeedSequenceConstant);
}

}  // namespace fairbandit

#endif
