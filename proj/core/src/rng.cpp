#include "tailrisk/rng.hpp"

namespace tailrisk {

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = mix_seed(seed);
  for (std::uint64_t i : path) state = mix_seed(state ^ mix_seed(i + 0x632BE59BD9B4E019ull));
  return Rng(state);
}

std::int64_t Rng::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(engine_);
}

std::size_t Rng::index(std::size_t n) {
  // Lemire's multiply-shift with rejection; unbiased for any n.
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -static_cast<std::uint64_t>(n) % n;
    while (low < threshold) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

}  // namespace tailrisk
