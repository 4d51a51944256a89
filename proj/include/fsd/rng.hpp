#pragma once

#include <cstdint>
#include <random>

namespace fsd {

// Seedable generator with a fully specified output sequence.
//
// std::mt19937_64 is bit-reproducible across standard libraries, but the
// std distributions are not, so uniform and Gaussian draws are derived here
// from raw engine words. This keeps CSV output byte-identical for a given seed
// regardless of toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal, Box-Muller; the second variate of each pair is cached.
  double gaussian();

  int bit() { return static_cast<int>(next_u64() >> 63); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// splitmix64 finalizer over (master, index); used to give each frame or
// worker an independent, order-free stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace fsd
