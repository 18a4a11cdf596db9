#pragma once

#include <cstdint>
#include <random>

namespace swion {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for run `run` of scan point `point` under master seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t run);

/// Reproducible sampler: std::mt19937_64 (bit-exact by the standard) with
/// hand-written transforms, since the standard distributions are
/// implementation-defined.
///   uniform  - top 53 bits scaled to [0, 1)
///   normal   - Box-Muller, both variates used
///   poisson  - sequential inversion below mean 30, Hormann's PTRS above
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  std::int64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace swion
