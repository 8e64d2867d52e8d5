#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spssim/resource_grid.hpp"
#include "spssim/rng.hpp"
#include "spssim/sensing_record.hpp"
#include "spssim/units.hpp"

namespace spssim {

/// Reservation intervals a UE may signal, in ms.
inline constexpr std::array<int, 12> kAllowedReservationPeriods = {
    20, 50, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
/// Reselection probabilities the RRC configuration can signal.
inline constexpr std::array<double, 6> kStandardReselectionProbabilities = {0.0, 0.2, 0.4, 0.6, 0.8,
                                                                           1.0};
/// The sensing window spans this many P_step periods.
inline constexpr int kSensingPeriods = 10;
inline constexpr double kThresholdStepDb = 3.0;
/// HARQ second set lies strictly inside (-15, 15) subframes of the first.
inline constexpr int kHarqMaxOffset = 14;
inline constexpr Subframe kIdleTriggerMs = 1000;

enum class TieBreak {
  Ordered,  // (subframe, start_subch) ascending
  Random,   // seeded shuffle before a stable sort
};

std::string_view to_string(TieBreak tie_break);
TieBreak tie_break_from_string(std::string_view text);

struct SpsConfig {
  int t1 = 1;
  int t2 = 100;
  int p_rsvp = 100;
  int p_step = 100;
  double th_sps_dbm = -80.0;
  double p_resel = 0.0;
  bool harq_enabled = false;
  int max_missed_opportunities = 1;
  TieBreak tie_break = TieBreak::Random;

  int sensing_window() const { return kSensingPeriods * p_step; }

  /// Throws ConfigError on hard violations; returns warnings for values
  /// accepted outside the standard's listed set.
  std::vector<std::string> validate() const;

  bool operator==(const SpsConfig&) const = default;
};

/// Per-UE scheduler state.
struct SpsState {
  int slrrc = 0;
  int c_resel = 0;
  int p_rsvp_ms = 100;
  std::optional<Csr> grant;       // first reserved occurrence, recurring every p_rsvp_ms
  std::optional<Csr> harq_grant;  // first occurrence of the blind-retransmission set
  Subframe reserved_at = 0;
  std::optional<Subframe> last_tx_time;
  int missed_opportunities = 0;

  /// Distance from the first to the last reserved occurrence.
  Subframe horizon_ms() const {
    return static_cast<Subframe>(p_rsvp_ms) * static_cast<Subframe>(c_resel - 1);
  }
  std::optional<int> harq_offset() const;
};

/// Report-window CSRs that survive exemption.
struct CandidateSet {
  int initial_count = 0;
  std::vector<Csr> survivors;
  double final_threshold_dbm = 0.0;
  /// Condition 1 alone left fewer than 20% of the window and was dropped.
  bool c1_relaxed = false;
};

/// ceil(0.2 * initial), computed exactly.
int min_candidate_count(int initial_count);

std::vector<Csr> build_report_window(Subframe n, const SpsConfig& cfg, const GridConfig& grid);

/// True iff w + k * p_rx == y + j * p_tx for some k >= 1 and 0 <= j <= max_j.
bool projections_meet(Subframe w, int p_rx, Subframe y, int p_tx, int max_j);

/// Reservation horizon used when exempting candidates: the longest one a
/// fresh counter can produce for the UE's own period.
int exemption_horizon_ms(const SpsConfig& cfg);

/// Applies Conditions 1 and 2 with the +3 dB loop until at least 20% of the
/// report window survives. `record` must hold data through now - 1 only.
CandidateSet exempt(std::span<const Csr> candidates, const SensingRecord& record,
                    const SpsConfig& cfg, Subframe now, int horizon_ms);

/// Linear-average S-RSSI metric of each CSR over the last 10 P_step
/// repetitions of its subframe. Slots without a measurement use the
/// record's mean monitored S-RSSI.
std::vector<double> candidate_energy(std::span<const Csr> csrs, const SensingRecord& record,
                                     const SpsConfig& cfg, Subframe now);

/// The ceil(20%) of the initial window with lowest energy. `tie_rng` is
/// consulted only for TieBreak::Random.
std::vector<Csr> rank_select(const CandidateSet& set, const SensingRecord& record,
                             const SpsConfig& cfg, Subframe now, RandomStream* tie_rng = nullptr);

std::pair<int, int> slrrc_range(int p_rsvp);
int draw_slrrc(int p_rsvp, RandomStream& rng);

/// Picks a CSR from S_B, draws a fresh counter and, with HARQ, a second set
/// inside (-15, 15) subframes.
SpsState reserve(std::span<const Csr> s_b, const SpsConfig& cfg, Subframe now,
                 RandomStream& rng);

enum class Trigger {
  None,
  NoGrant,
  CounterExpired,
  Idle,
  MissedOpportunities,
  Latency,
  PduTooLarge,
};

std::string_view to_string(Trigger trigger);

struct ArrivalEvent {
  Subframe now = 0;
  int pdu_bits = 0;
  int grant_capacity_bits = 0;
};

/// First trigger that holds at a packet arrival, or Trigger::None.
Trigger check_triggers(const SpsState& state, const ArrivalEvent& event, const SpsConfig& cfg);
inline bool triggers(const SpsState& state, const ArrivalEvent& event, const SpsConfig& cfg) {
  return check_triggers(state, event, cfg) != Trigger::None;
}

/// Counts one transmission against the counter.
void on_transmit(SpsState& state, Subframe t);
/// A reserved opportunity passed with nothing to send.
void on_missed(SpsState& state);

enum class ExpiryDecision { Keep, Reselect };

/// Keep-or-reselect on counter expiry. Keep redraws the counter and leaves
/// the grant in place.
ExpiryDecision on_expiry(SpsState& state, const SpsConfig& cfg, Subframe now, RandomStream& rng);

/// First occurrence of a recurring CSR at or after `from`.
Subframe next_occurrence(const Csr& first, int period, Subframe from);

}  // namespace spssim
