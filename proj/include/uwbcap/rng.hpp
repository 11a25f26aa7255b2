#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace uwbcap {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replicate `index` under a master seed. Replicate k's seed depends
/// only on (master, k), so growing the replicate count leaves earlier
/// replicates untouched.
constexpr std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Named sub-stream of a replicate seed (network, destinations, tessellation...).
enum class Stream : std::uint64_t {
  nodes = 1,
  destinations = 2,
  tessellation = 3,
  audit = 4,
};

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream s) noexcept {
  return splitmix64(seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(s)));
}

/// Seeded generator with platform-independent real and index draws.
///
/// std::uniform_real_distribution is implementation-defined, so draws are
/// built directly from the 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound) by rejection (bound > 0).
  std::size_t index(std::size_t bound) {
    const std::uint64_t b = bound;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % b);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uwbcap
