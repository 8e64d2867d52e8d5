#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spssim/rng.hpp"
#include "spssim/units.hpp"

namespace spssim {

/// Packet generation phase of the population.
struct OffsetMode {
  enum class Kind { Synchronized, Uniform } kind = Kind::Uniform;
  int max_ms = 99;  // Uniform: phases drawn from U{0..max_ms}

  static OffsetMode synchronized() { return {Kind::Synchronized, 0}; }
  static OffsetMode uniform(int max_ms) { return {Kind::Uniform, max_ms}; }

  bool operator==(const OffsetMode&) const = default;
};

/// "synchronized", "uniform:49" or "UniformOffset(49)".
OffsetMode offset_mode_from_string(std::string_view text);
std::string to_string(const OffsetMode& mode);

enum class EdgeMode {
  Open,  // straight road, metrics restricted to the platoon's central stretch
  Ring,  // road closed into a ring; the measurement stretch is fixed on the road
};

std::string_view to_string(EdgeMode mode);
EdgeMode edge_mode_from_string(std::string_view text);

struct ScenarioConfig {
  int lanes = 4;
  double lane_spacing_m = 3.0;
  double road_length_m = 2000.0;
  double density = 25.0;  // vehicles per km per lane
  double speed_kmh = 70.0;
  int t_gen_ms = 100;
  int packet_bytes = 190;
  double sim_time_s = 100.0;
  OffsetMode offset_mode;
  EdgeMode edge_mode = EdgeMode::Open;
  double measurement_window_m = 1000.0;

  int vehicle_count() const;
  double speed_mps() const { return speed_kmh / 3.6; }
  Subframe subframes() const;
  /// Central stretch [low, high) of the road frame.
  double window_low_m() const { return 0.5 * (road_length_m - measurement_window_m); }
  double window_high_m() const { return window_low_m() + measurement_window_m; }

  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Named congestion scenario: density and speed.
struct Preset {
  std::string_view name;
  double density;
  double speed_kmh;
};

inline constexpr Preset kPresets[] = {
    {"s1", 12.5, 140.0},
    {"s2", 25.0, 70.0},
    {"s3", 50.0, 60.0},
    {"s4", 100.0, 15.0},
};

/// Throws ConfigError for an unknown name.
const Preset& preset(std::string_view name);
void apply_preset(ScenarioConfig& cfg, std::string_view name);

struct Vehicle {
  UeId id = 0;
  int lane = 0;
  double position_m = 0.0;
  double speed_mps = 0.0;
  int phase_ms = 0;
};

/// Vehicles evenly spaced per lane at 1000/density m; lane k is shifted by
/// k/lanes of that interval. Phases are drawn from each vehicle's traffic
/// stream.
std::vector<Vehicle> spawn(const ScenarioConfig& cfg, const RngPlan& plan);

/// Moves every vehicle by speed * dt. Positions wrap on the road length.
void advance(std::vector<Vehicle>& vehicles, double dt_s, double road_length_m);

struct Packet {
  std::uint64_t id = 0;
  UeId source = 0;
  Subframe generated = 0;
  int bytes = 0;
};

/// Packet emitted at t iff t >= phase and (t - phase) mod t_gen == 0.
std::optional<Packet> next_packet(const Vehicle& vehicle, Subframe t, const ScenarioConfig& cfg);

/// max(t_offset, t2 - t_offset).
int effective_offset(int t_offset_ms, int t2_ms);

/// Euclidean distance with lane offsets; the longitudinal part is
/// ring-minimal in EdgeMode::Ring.
double pair_distance(const Vehicle& a, const Vehicle& b, const ScenarioConfig& cfg);

/// Whether a receiver at this road position lies in the measurement stretch.
bool in_measurement_window(double position_m, const ScenarioConfig& cfg);

}  // namespace spssim
