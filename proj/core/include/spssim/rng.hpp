#pragma once

#include <cstdint>
#include <random>

#include "spssim/units.hpp"

namespace spssim {

using RandomStream = std::mt19937_64;

enum class StreamPurpose : std::uint32_t { Fading = 1, Mac = 2, Decode = 3, Traffic = 4 };

/// Derives independent, reproducible random streams from one master seed.
///
/// Each (UE, purpose) pair gets its own generator seeded through a SplitMix64
/// chain over (master, ue, purpose), so adding UEs or purposes never shifts the
/// draws of an existing stream.
class RngPlan {
 public:
  explicit RngPlan(std::uint64_t master_seed) : master_(master_seed) {}

  std::uint64_t master_seed() const { return master_; }

  std::uint64_t stream_seed(UeId ue, StreamPurpose purpose) const {
    std::uint64_t s = splitmix64(master_);
    s = splitmix64(s ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ue)) << 8));
    s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    return s;
  }

  RandomStream stream(UeId ue, StreamPurpose purpose) const {
    return RandomStream(stream_seed(ue, purpose));
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t master_;
};

/// Uniform draw on [0, 1) with 53 random bits.
inline double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace spssim
