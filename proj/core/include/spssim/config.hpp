#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spssim/metrics.hpp"
#include "spssim/phy_layer.hpp"
#include "spssim/resource_grid.hpp"
#include "spssim/scenario.hpp"
#include "spssim/sps_scheduler.hpp"

namespace spssim {

struct ChannelConfig {
  double carrier_mhz = 5860.0;
  double antenna_height_m = 1.5;
  double reflection_coefficient = -1.0;  // real ground-reflection coefficient
  bool fading = true;
  double weibull_k = 1.4;

  void validate() const;
  bool operator==(const ChannelConfig&) const = default;
};

struct RunOptions {
  std::uint64_t seed = 1;
  bool trace = false;
  /// "builtin" or a path to a curve file in the BLER asset format.
  std::string bler_curve = "builtin";

  bool operator==(const RunOptions&) const = default;
};

/// Fully resolved run configuration. Defaults are the reference highway
/// setup: 10 MHz, MCS 5, 190 B at 10 Hz, 23 dBm, T1 = 1, T2 = 100.
struct RunConfig {
  GridConfig grid;
  RadioConfig radio;
  SpsConfig sps;
  ChannelConfig channel;
  ScenarioConfig scenario;
  MetricsConfig metrics;
  RunOptions run;

  /// Validates every section and the cross-section invariants. Throws
  /// ConfigError; returns warnings for accepted non-standard values.
  std::vector<std::string> validate(bool strict = false) const;

  bool operator==(const RunConfig&) const = default;
};

struct ParsedConfig {
  RunConfig config;
  std::vector<std::string> warnings;
};

/// Parses sectioned key = value text over the defaults. Unknown sections or
/// keys, duplicates and malformed values are ConfigErrors.
ParsedConfig parse_config(std::string_view text, bool strict = false);
ParsedConfig load_config(const std::filesystem::path& path, bool strict = false);

/// Sets one "section.key" on a config. Throws ConfigError on unknown keys or
/// malformed values. "scenario.preset" sets density and speed.
void set_config_value(RunConfig& cfg, std::string_view dotted_key, std::string_view value);

/// Every key, including the resolved defaults; parse_config of the result
/// reproduces `cfg`.
std::string emit_config(const RunConfig& cfg);

/// Formats a double in its shortest round-trip form.
std::string format_double(double value);

}  // namespace spssim
