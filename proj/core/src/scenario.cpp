#include "spssim/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <random>

#include "spssim/errors.hpp"

namespace spssim {

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

OffsetMode offset_mode_from_string(std::string_view text) {
  const std::string t = lower(text);
  if (t == "synchronized") return OffsetMode::synchronized();
  if (t.starts_with("uniform:")) {
    return OffsetMode::uniform(parse_int(std::string_view(t).substr(8), "offset"));
  }
  if (t.starts_with("uniformoffset(") && t.ends_with(")")) {
    return OffsetMode::uniform(
        parse_int(std::string_view(t).substr(14, t.size() - 15), "offset"));
  }
  throw ConfigError("unknown offset mode '" + std::string(text) +
                    "' (expected synchronized or uniform:N)");
}

std::string to_string(const OffsetMode& mode) {
  if (mode.kind == OffsetMode::Kind::Synchronized) return "synchronized";
  return "uniform:" + std::to_string(mode.max_ms);
}

std::string_view to_string(EdgeMode mode) { return mode == EdgeMode::Open ? "open" : "ring"; }

EdgeMode edge_mode_from_string(std::string_view text) {
  if (text == "open") return EdgeMode::Open;
  if (text == "ring") return EdgeMode::Ring;
  throw ConfigError("unknown edge mode '" + std::string(text) + "'");
}

int ScenarioConfig::vehicle_count() const {
  return static_cast<int>(std::lround(density * lanes * road_length_m / 1000.0));
}

Subframe ScenarioConfig::subframes() const {
  return static_cast<Subframe>(std::llround(sim_time_s * 1000.0));
}

void ScenarioConfig::validate() const {
  if (lanes < 1) throw ConfigError("scenario.lanes must be >= 1");
  if (!(lane_spacing_m >= 0.0)) throw ConfigError("scenario.lane_spacing_m must be >= 0");
  if (!(road_length_m > 0.0)) throw ConfigError("scenario.road_length_m must be > 0");
  if (!(density > 0.0)) throw ConfigError("scenario.density must be > 0");
  if (!(speed_kmh >= 0.0)) throw ConfigError("scenario.speed_kmh must be >= 0");
  if (t_gen_ms < 1) throw ConfigError("scenario.t_gen_ms must be >= 1");
  if (packet_bytes < 1) throw ConfigError("scenario.packet_bytes must be >= 1");
  if (!(sim_time_s >= 0.0)) throw ConfigError("scenario.sim_time_s must be >= 0");
  if (offset_mode.kind == OffsetMode::Kind::Uniform &&
      (offset_mode.max_ms < 0 || offset_mode.max_ms >= t_gen_ms)) {
    throw ConfigError("scenario.offset_mode: max offset must be in [0, t_gen_ms)");
  }
  if (!(measurement_window_m > 0.0 && measurement_window_m <= road_length_m)) {
    throw ConfigError("scenario.measurement_window_m must be in (0, road_length_m]");
  }
}

const Preset& preset(std::string_view name) {
  for (const Preset& p : kPresets) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected s1..s4)");
}

void apply_preset(ScenarioConfig& cfg, std::string_view name) {
  const Preset& p = preset(name);
  cfg.density = p.density;
  cfg.speed_kmh = p.speed_kmh;
}

std::vector<Vehicle> spawn(const ScenarioConfig& cfg, const RngPlan& plan) {
  const int n = cfg.vehicle_count();
  const int per_lane_base = n / cfg.lanes;
  const int extra = n % cfg.lanes;
  std::vector<Vehicle> out;
  out.reserve(static_cast<std::size_t>(n));
  UeId id = 0;
  for (int lane = 0; lane < cfg.lanes; ++lane) {
    const int count = per_lane_base + (lane < extra ? 1 : 0);
    if (count == 0) continue;
    const double interval = cfg.road_length_m / count;
    const double stagger = interval * lane / cfg.lanes;
    for (int i = 0; i < count; ++i) {
      Vehicle v;
      v.id = id;
      v.lane = lane;
      v.position_m = std::fmod(stagger + interval * i, cfg.road_length_m);
      v.speed_mps = cfg.speed_mps();
      if (cfg.offset_mode.kind == OffsetMode::Kind::Uniform) {
        RandomStream rng = plan.stream(id, StreamPurpose::Traffic);
        v.phase_ms = std::uniform_int_distribution<int>(0, cfg.offset_mode.max_ms)(rng);
      }
      out.push_back(v);
      ++id;
    }
  }
  return out;
}

void advance(std::vector<Vehicle>& vehicles, double dt_s, double road_length_m) {
  if (!(dt_s > 0.0)) return;
  for (Vehicle& v : vehicles) {
    v.position_m = std::fmod(v.position_m + v.speed_mps * dt_s, road_length_m);
    if (v.position_m < 0.0) v.position_m += road_length_m;
  }
}

std::optional<Packet> next_packet(const Vehicle& vehicle, Subframe t, const ScenarioConfig& cfg) {
  if (t < vehicle.phase_ms || (t - vehicle.phase_ms) % cfg.t_gen_ms != 0) return std::nullopt;
  Packet p;
  p.source = vehicle.id;
  p.generated = t;
  p.bytes = cfg.packet_bytes;
  const auto seq = static_cast<std::uint64_t>((t - vehicle.phase_ms) / cfg.t_gen_ms);
  p.id = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(vehicle.id)) << 32) | seq;
  return p;
}

int effective_offset(int t_offset_ms, int t2_ms) {
  if (t_offset_ms < 0 || t_offset_ms > t2_ms) {
    throw DomainError("effective_offset needs 0 <= t_offset <= t2");
  }
  return std::max(t_offset_ms, t2_ms - t_offset_ms);
}

double pair_distance(const Vehicle& a, const Vehicle& b, const ScenarioConfig& cfg) {
  double dx = std::abs(a.position_m - b.position_m);
  if (cfg.edge_mode == EdgeMode::Ring) dx = std::min(dx, cfg.road_length_m - dx);
  const double dy = (a.lane - b.lane) * cfg.lane_spacing_m;
  return std::hypot(dx, dy);
}

bool in_measurement_window(double position_m, const ScenarioConfig& cfg) {
  return position_m >= cfg.window_low_m() && position_m < cfg.window_high_m();
}

}  // namespace spssim
