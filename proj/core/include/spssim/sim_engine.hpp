#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spssim/channel_model.hpp"
#include "spssim/config.hpp"
#include "spssim/metrics.hpp"
#include "spssim/phy_layer.hpp"
#include "spssim/scenario.hpp"
#include "spssim/sensing_record.hpp"
#include "spssim/sps_scheduler.hpp"

namespace spssim {

struct RunCounters {
  std::uint64_t packets_generated = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t reselections = 0;
  std::uint64_t keeps = 0;
  std::uint64_t mac_dropped = 0;
  std::uint64_t missed_opportunities = 0;
  std::uint64_t c1_relaxed = 0;
  std::uint64_t sci_decoded = 0;
  std::array<std::uint64_t, 7> triggers{};  // indexed by Trigger
};

/// One reservation decision.
struct GrantEvent {
  Subframe t = 0;
  UeId ue = 0;
  Trigger trigger = Trigger::None;
  bool reselected = false;  // false: kept the previous grant on counter expiry
  Csr grant;
  std::optional<int> harq_offset;
  int slrrc = 0;
  double threshold_dbm = 0.0;
  bool c1_relaxed = false;
};

struct RunResult {
  RunConfig config;
  int vehicle_count = 0;
  Metrics metrics;
  RunCounters counters;
  std::vector<GrantEvent> trace;
};

/// Subframe-stepped simulation of one run.
///
/// Each subframe t runs six phases in order: packet arrivals, MAC decisions
/// (reading sensing data through t - 1 only), placement on the grid,
/// per-receiver SINR and decoding, sensing update with t, and metrics.
class Simulation {
 public:
  /// Validates `cfg` (ConfigError) and spawns the scenario.
  explicit Simulation(RunConfig cfg);
  /// Uses the given vehicles instead of the scenario's platoon.
  Simulation(RunConfig cfg, std::vector<Vehicle> vehicles);

  Subframe now() const { return now_; }
  Subframe end() const { return end_; }
  bool done() const { return now_ >= end_; }
  void step();
  /// Runs the remaining subframes and closes the metrics.
  RunResult finish();

  int vehicle_count() const { return n_; }
  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const SpsState& state(UeId ue) const { return ues_[static_cast<std::size_t>(ue)].sps; }
  const SensingRecord& record(UeId ue) const { return ues_[static_cast<std::size_t>(ue)].record; }
  const std::vector<Transmission>& placements() const { return placements_; }
  const Metrics& metrics() const { return metrics_; }
  const RunCounters& counters() const { return counters_; }
  double distance(UeId a, UeId b) const { return distance_[pair(a, b)]; }

 private:
  struct Ue {
    SensingRecord record;
    SpsState sps;
    RandomStream mac;
    RandomStream fading;
    RandomStream decode;
    std::deque<Packet> queue;
    std::optional<Packet> in_flight;  // awaiting its HARQ copy
    Subframe in_flight_until = 0;
    bool pair_sent = false;
  };
  struct Outcome {
    UeId tx;
    UeId rx;
    std::uint64_t packet_id;
    bool retransmission;
    ReceptionOutcome outcome;
  };

  std::size_t pair(UeId a, UeId b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }
  void init();
  void phase_traffic(std::vector<UeId>& arrivals);
  void phase_mac(const std::vector<UeId>& arrivals);
  void phase_placement();
  void phase_receive();
  void phase_metrics();
  void reselect(UeId ue, Trigger trigger);
  bool in_scope(UeId tx, UeId rx) const;
  double receiver_position(UeId rx) const;

  RunConfig cfg_;
  std::vector<Vehicle> vehicles_;
  int n_ = 0;
  Subframe now_ = 0;
  Subframe end_ = 0;
  int pdu_bits_ = 0;
  int capacity_bits_ = 0;
  int horizon_ms_ = 0;
  BlerCurve curve_;
  std::vector<Ue> ues_;
  std::vector<double> distance_;
  std::vector<double> mean_rx_mw_;
  std::vector<std::uint8_t> fading_bin_;
  std::vector<FadingSampler> laws_;
  std::vector<Transmission> placements_;
  std::vector<std::uint8_t> transmitting_;
  std::vector<Outcome> outcomes_;
  std::vector<SciEntry> scis_;
  std::vector<double> rx_mw_;
  Metrics metrics_;
  RunCounters counters_;
  std::vector<GrantEvent> trace_;
};

/// Validates and runs a full configuration.
RunResult run(const RunConfig& cfg);

/// Loads "builtin" or a curve file.
BlerCurve load_bler_curve(const std::string& spec);

/// Writes per_curve.csv, ipg_hist.csv, summary.txt, config.ini and, with
/// tracing on, grant_trace.csv into `dir`.
void write_artifacts(const RunResult& result, const std::filesystem::path& dir);

/// summary.txt content: key=value lines.
std::string summary_text(const RunResult& result);

}  // namespace spssim
