#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "spssim/units.hpp"

namespace spssim {

enum class ReceptionOutcome { Decoded, Lost, HalfDuplexMissed };

struct MetricsConfig {
  double bin_width_m = 25.0;
  double max_range_m = 1000.0;  // receivers farther away are not accounted
  int ipg_bin_ms = 10;
  int ipg_cap_ms = 500;

  int bin_count() const;
  void validate() const;

  bool operator==(const MetricsConfig&) const = default;
};

/// Counters of one directed (tx, rx) link.
struct LinkStats {
  std::uint64_t expected = 0;
  std::uint64_t decoded = 0;
  std::uint64_t lost = 0;
  std::uint64_t half_duplex_missed = 0;
  std::uint64_t ipg_samples = 0;
  std::optional<Subframe> last_reception;
};

struct PerBin {
  double low_m = 0.0;
  double high_m = 0.0;
  std::uint64_t attempts = 0;
  std::uint64_t failures = 0;
  std::uint64_t half_duplex_missed = 0;

  /// Absent for an empty bin.
  std::optional<double> per() const;
};

struct IpgBin {
  int low_ms = 0;
  int high_ms = 0;  // -1 for the overflow bucket
  std::uint64_t count = 0;
  double freq = 0.0;
};

struct IpgSummary {
  std::uint64_t samples = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double p95_ms = 0.0;
  int mode_ms = 0;
  double fraction_above_cap = 0.0;
};

/// Packet delivery accounting for one run.
///
/// A packet opens one expected reception per in-scope receiver at its first
/// transmission. Every attempt (initial or HARQ) then reports an outcome;
/// the packet counts as decoded if any attempt decodes, as lost if any
/// attempt reached the decoder, and as a half-duplex miss otherwise.
class Metrics {
 public:
  Metrics(int n_ues, MetricsConfig cfg);

  int n_ues() const { return n_; }
  const MetricsConfig& config() const { return cfg_; }

  /// Opens the expected reception of `packet_id` at `rx`. A second call for
  /// the packet already open on the link is a no-op and returns false.
  bool on_transmission(UeId tx, UeId rx, std::uint64_t packet_id, double distance_m);
  /// Whether `packet_id` is the packet currently open on the link.
  bool is_open(UeId tx, UeId rx, std::uint64_t packet_id) const;
  void on_reception(UeId tx, UeId rx, std::uint64_t packet_id, Subframe t,
                    ReceptionOutcome outcome);
  /// Closes every open packet. Idempotent.
  void finish();

  /// Adds another run's closed counters (same UE count and config).
  void merge(const Metrics& other);

  const LinkStats& link(UeId tx, UeId rx) const { return links_[index(tx, rx)]; }
  std::vector<PerBin> per_curve() const;
  /// Bins of ipg_bin_ms up to ipg_cap_ms plus one overflow bucket.
  std::vector<IpgBin> ipg_histogram() const;
  IpgSummary ipg_summary() const;
  /// IPG sample counts indexed by gap in ms.
  const std::vector<std::uint64_t>& ipg_counts() const { return ipg_counts_; }

  std::uint64_t expected_total() const;
  std::uint64_t decoded_total() const;
  std::uint64_t lost_total() const;
  std::uint64_t half_duplex_total() const;
  double per_total() const;
  double data_rate_bps(int packet_bytes, double sim_time_s) const;

  void write_per_curve_csv(std::ostream& out) const;
  void write_ipg_csv(std::ostream& out) const;

 private:
  enum class Pending : std::uint8_t { HalfDuplex, Lost, Decoded };
  struct Open {
    std::uint64_t packet_id = 0;
    int bin = -1;
    bool active = false;
    bool reported = false;
    Pending state = Pending::HalfDuplex;
  };

  std::size_t index(UeId tx, UeId rx) const;
  void close(std::size_t link);
  void add_ipg(Subframe gap);

  int n_;
  MetricsConfig cfg_;
  std::vector<LinkStats> links_;
  std::vector<Open> open_;
  std::vector<PerBin> bins_;
  std::vector<std::uint64_t> ipg_counts_;
};

}  // namespace spssim
