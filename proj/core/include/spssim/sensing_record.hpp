#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spssim/phy_layer.hpp"
#include "spssim/resource_grid.hpp"
#include "spssim/units.hpp"

namespace spssim {

/// Control message decoded during sensing, with the reservation it signals.
struct SciEntry {
  UeId tx = 0;
  Csr csr;
  double rsrp_dbm = 0.0;
  int p_rsvp_ms = 100;
  bool retransmission = false;
};

/// One received transmission as seen by a sensing UE.
struct Arrival {
  Csr csr;
  double rx_power_mw = 0.0;  // total over all RBs of the transmission
};

/// Sliding record of the last `window` subframes of channel observations.
///
/// Slots are written for consecutive subframes only. A slot is either
/// monitored (per-sub-channel S-RSSI in mW plus decoded SCIs) or
/// unmonitored (the UE was transmitting). Before the first write the record
/// reads as an idle, monitored channel at `idle_rssi_mw` per sub-channel.
class SensingRecord {
 public:
  SensingRecord(int n_subch, int window, double idle_rssi_mw, Subframe first_subframe = 0);

  void record_monitored(Subframe t, std::span<const double> rssi_mw,
                        std::span<const SciEntry> scis);
  void record_unmonitored(Subframe t);

  int n_subch() const { return n_subch_; }
  int window() const { return window_; }
  /// Last subframe written; first_subframe - 1 before any write.
  Subframe latest() const { return latest_; }

  bool contains(Subframe t) const { return t <= latest_ && t > latest_ - window_; }
  bool monitored(Subframe t) const;
  std::span<const double> rssi_mw(Subframe t) const;
  std::span<const SciEntry> scis(Subframe t) const;

  /// Linear mean S-RSSI over every monitored (slot, sub-channel) in the
  /// window; substitute for slots without a measurement.
  double mean_monitored_rssi_mw() const;

 private:
  std::size_t slot(Subframe t) const;

  int n_subch_;
  int window_;
  int sci_capacity_;
  Subframe latest_;
  std::vector<double> rssi_;
  std::vector<std::uint8_t> monitored_;
  std::vector<SciEntry> scis_;
  std::vector<std::uint16_t> sci_count_;
};

/// Per-sub-channel S-RSSI: linear sum of each arrival's power share on the
/// sub-channel plus the sub-channel noise.
std::vector<double> subchannel_rssi_mw(const GridConfig& grid, const RadioConfig& radio,
                                       std::span<const Arrival> arrivals);

/// Writes one subframe into the record. A transmitting UE stores the slot
/// as unmonitored and ignores the observations.
void record_subframe(SensingRecord& record, Subframe t, GateState gate,
                     std::span<const double> rssi_mw, std::span<const SciEntry> scis);

}  // namespace spssim
