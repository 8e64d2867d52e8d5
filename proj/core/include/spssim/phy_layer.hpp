#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spssim/resource_grid.hpp"
#include "spssim/rng.hpp"
#include "spssim/units.hpp"

namespace spssim {

/// How PSCCH (SCI) reception is decided.
enum class SciModel {
  Threshold,  // power above sensitivity and SINR above a fixed threshold
  Always,     // decodable whenever the power clears the sensitivity floor
};

std::string_view to_string(SciModel model);
SciModel sci_model_from_string(std::string_view text);

struct RadioConfig {
  double tx_power_dbm = 23.0;
  double antenna_gain_dbi = 3.0;
  double noise_figure_db = 9.0;
  int rx_antennas = 2;  // folded into the BLER curve
  double thermal_noise_dbm_per_hz = -174.0;
  double rb_bandwidth_hz = 180e3;
  double sci_sensitivity_dbm = -107.0;
  double sci_sinr_threshold_db = 0.0;
  SciModel sci_model = SciModel::Threshold;

  void validate() const;
  bool operator==(const RadioConfig&) const = default;
};

/// Total received power for a given path loss, both antenna gains included.
double received_power_dbm(const RadioConfig& radio, double loss_db);

/// Thermal noise plus noise figure over n_rb resource blocks.
double noise_floor_dbm(int n_rb, const RadioConfig& radio);

/// Signal over the linear sum of interferers and noise, in dB.
double sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm);

/// Receiver model: SINR (dB) to transport-block error rate.
class BlerCurve {
 public:
  struct Point {
    double sinr_db;
    double bler;

    bool operator==(const Point&) const = default;
  };

  /// Strict parse of the two-column asset format; rejects unsorted SINR,
  /// increasing BLER and values outside [0, 1].
  static BlerCurve parse(std::string_view text);
  static BlerCurve from_points(std::vector<Point> points);
  static const BlerCurve& builtin();

  /// 1 below the first point, 0 above the last one; log-linear in between
  /// (linear on segments that touch zero).
  double bler(double sinr_db) const;

  const std::vector<Point>& points() const { return points_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<Point> points_;
  std::string provenance_;
};

enum class DecodeOutcome { Decoded, Lost };

/// Lost iff bler(sinr) > u for a uniform draw u.
DecodeOutcome decode_with_draw(double sinr_db, const BlerCurve& curve, double u);
DecodeOutcome decode(double sinr_db, const BlerCurve& curve, RandomStream& rng);

/// A transmission placed on the grid for one subframe.
struct Transmission {
  UeId tx = 0;
  Csr csr;
  int p_rsvp_ms = 100;
  bool retransmission = false;
  std::uint64_t packet_id = 0;
};

enum class GateState { MayReceive, Transmitting };

/// Transmitting iff the UE owns any placement (initial or HARQ) in the
/// subframe's finalized schedule.
GateState half_duplex_gate(UeId ue, std::span<const Transmission> placements);

/// Per-RB share of a transmission's power landing on a span of RBs.
double power_share(const RbSpan& occupied, int total_rbs, const RbSpan& measured);

/// RSRP approximation: per-RE power of the transport block.
double rsrp_dbm(double tb_power_dbm, int n_pssch_rb);

}  // namespace spssim
