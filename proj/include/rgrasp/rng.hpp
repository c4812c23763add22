#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rgrasp {

/// splitmix64 finalizer applied to (seed, stream). Gives each epoch / run
/// its own reproducible stream without sharing generator state.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded generator used everywhere randomness is needed.
///
/// Engine is std::mt19937_64. Gaussians use the Box-Muller transform
/// implemented here (not std::normal_distribution) so that generated
/// datasets do not depend on the standard library's normal sampler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform in the open interval (0, 1).
  double open_unit();
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rgrasp
