#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace expo_surf {

/// Mixes a root seed and a substream index into an independent 64-bit seed
/// (SplitMix64 finalizer applied twice).
std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t index);

/// Seeded random stream. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the uniform, normal, and gamma
/// transforms on top of it are implemented here rather than taken from
/// <random>, whose distributions differ between standard libraries. A given
/// (seed, substream) therefore produces the same numbers on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t root_seed, std::uint64_t substream = 0);

  /// Independent stream for worker/trial `index` under the same root seed.
  RandomStream substream(std::uint64_t index) const { return RandomStream(root_seed_, index); }

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t substream_index() const { return substream_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Gamma(shape, 1). Marsaglia–Tsang squeeze/rejection for shape >= 1;
  /// for shape < 1 uses Gamma(shape + 1)·U^{1/shape}.
  double gamma(double shape);

  /// Fills `out` with a direction uniform on the unit sphere S^{d-1}.
  void unit_vector(std::span<double> out);

 private:
  std::uint64_t root_seed_;
  std::uint64_t substream_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace expo_surf
