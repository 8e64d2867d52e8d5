#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace spssim {

/// Absolute subframe index. One subframe is 1 ms.
using Subframe = std::int64_t;

/// Index of a UE (vehicle) within a run.
using UeId = std::int32_t;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) {
  if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(linear);
}

// dBm <-> mW share the same conversion as dB <-> linear.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

inline constexpr double kSpeedOfLight = 299'792'458.0;

}  // namespace spssim
