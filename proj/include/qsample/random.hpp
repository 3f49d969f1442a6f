#pragma once

#include <cstdint>
#include <random>

#include "qsample/types.hpp"

namespace qsample {

/// Seedable stream generator. Stream `s` of master seed `seed` is a mt19937_64
/// initialized from seed_seq{lo(seed), hi(seed), lo(s), hi(s)}, so chains and
/// substreams are reproducible and independent of scheduling. Uniforms take the
/// top 53 bits of one 64-bit draw; normals use the Marsaglia polar method on
/// those uniforms (no std::*_distribution, whose output is library specific).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  Vector normal_vector(Eigen::Index n, double stddev = 1.0);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0;
};

/// Stream-id ranges used by the library; a seed drives several independent
/// consumers without overlap.
namespace streams {
inline constexpr std::uint64_t kChain = 0;              // + chain index
inline constexpr std::uint64_t kGinibre = 1ULL << 32;   // + block index
inline constexpr std::uint64_t kFiber = 2ULL << 32;
inline constexpr std::uint64_t kResample = 3ULL << 32;
}  // namespace streams

}  // namespace qsample
