#pragma once

// Portable, seed-addressed random streams.
//
// Stream derivation (part of the published file formats, version 1):
//
//   mix(z)  = splitmix64 finalizer:
//             z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
//             z ^= z >> 27; z *= 0x94d049bb133111eb; z ^= z >> 31
//   seed    = mix(mix(master_seed) + 0x9e3779b97f4a7c15 * (stream_index + 1))
//   engine  = std::mt19937_64(seed)
//   uniform = (engine() >> 11) * 2^-53                      in [0, 1)
//   normal  = Box-Muller on (1 - uniform, uniform), cosine branch first,
//             sine branch cached for the next call
//
// Every piece is fully specified by the C++ standard or above, so any
// implementation reproduces the same variates.

#include <cmath>
#include <cstdint>
#include <random>

namespace exset {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t derive_stream_seed(SeedSpec s) noexcept {
  return splitmix64_mix(splitmix64_mix(s.master_seed) +
                        0x9e3779b97f4a7c15ULL * (s.stream_index + 1));
}

class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed) : engine_(derive_stream_seed(seed)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace exset
