#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tailrisk {

/// Seeded random stream. Independent streams are derived from a root seed and
/// a path of indices (resample number, draw number, ...), so a unit of work
/// sees the same numbers whichever thread runs it and in whatever order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  /// Uniform on [0, 1); never returns 1.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(engine_); }

  std::int64_t poisson(double mean);

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace tailrisk
