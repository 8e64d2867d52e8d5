#include "spssim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spssim/errors.hpp"

namespace spssim {

int MetricsConfig::bin_count() const {
  return static_cast<int>(std::ceil(max_range_m / bin_width_m - 1e-9));
}

void MetricsConfig::validate() const {
  if (!(bin_width_m > 0.0)) throw ConfigError("metrics.bin_width_m must be > 0");
  if (!(max_range_m > 0.0)) throw ConfigError("metrics.max_range_m must be > 0");
  if (ipg_bin_ms < 1) throw ConfigError("metrics.ipg_bin_ms must be >= 1");
  if (ipg_cap_ms < ipg_bin_ms || ipg_cap_ms % ipg_bin_ms != 0) {
    throw ConfigError("metrics.ipg_cap_ms must be a positive multiple of metrics.ipg_bin_ms");
  }
}

std::optional<double> PerBin::per() const {
  if (attempts == 0) return std::nullopt;
  return static_cast<double>(failures) / static_cast<double>(attempts);
}

Metrics::Metrics(int n_ues, MetricsConfig cfg)
    : n_(n_ues),
      cfg_(cfg),
      links_(static_cast<std::size_t>(n_ues) * static_cast<std::size_t>(n_ues)),
      open_(links_.size()) {
  cfg_.validate();
  const int nb = cfg_.bin_count();
  bins_.resize(static_cast<std::size_t>(nb));
  for (int i = 0; i < nb; ++i) {
    bins_[static_cast<std::size_t>(i)].low_m = i * cfg_.bin_width_m;
    bins_[static_cast<std::size_t>(i)].high_m = std::min((i + 1) * cfg_.bin_width_m, cfg_.max_range_m);
  }
}

std::size_t Metrics::index(UeId tx, UeId rx) const {
  if (tx < 0 || rx < 0 || tx >= n_ || rx >= n_ || tx == rx) {
    throw InvariantViolation("metrics: bad link " + std::to_string(tx) + "->" + std::to_string(rx));
  }
  return static_cast<std::size_t>(tx) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(rx);
}

bool Metrics::on_transmission(UeId tx, UeId rx, std::uint64_t packet_id, double distance_m) {
  if (!(distance_m >= 0.0) || distance_m >= cfg_.max_range_m) {
    throw InvariantViolation("metrics: receiver distance outside the accounting range");
  }
  const std::size_t l = index(tx, rx);
  Open& o = open_[l];
  if (o.active && o.packet_id == packet_id) return false;
  if (o.active) close(l);
  o.packet_id = packet_id;
  o.bin = std::min(static_cast<int>(distance_m / cfg_.bin_width_m), static_cast<int>(bins_.size()) - 1);
  o.active = true;
  o.reported = false;
  o.state = Pending::HalfDuplex;
  ++links_[l].expected;
  return true;
}

bool Metrics::is_open(UeId tx, UeId rx, std::uint64_t packet_id) const {
  const Open& o = open_[index(tx, rx)];
  return o.active && o.packet_id == packet_id;
}

void Metrics::on_reception(UeId tx, UeId rx, std::uint64_t packet_id, Subframe t,
                           ReceptionOutcome outcome) {
  const std::size_t l = index(tx, rx);
  Open& o = open_[l];
  if (!o.active || o.packet_id != packet_id) {
    throw InvariantViolation("metrics: reception without an open packet");
  }
  o.reported = true;
  if (o.state == Pending::Decoded) return;
  switch (outcome) {
    case ReceptionOutcome::Decoded: {
      o.state = Pending::Decoded;
      LinkStats& s = links_[l];
      if (s.last_reception) {
        add_ipg(t - *s.last_reception);
        ++s.ipg_samples;
      }
      s.last_reception = t;
      break;
    }
    case ReceptionOutcome::Lost:
      o.state = Pending::Lost;
      break;
    case ReceptionOutcome::HalfDuplexMissed:
      break;
  }
}

void Metrics::close(std::size_t l) {
  Open& o = open_[l];
  if (!o.active) return;
  if (!o.reported) throw InvariantViolation("metrics: packet closed without any outcome");
  LinkStats& s = links_[l];
  PerBin& b = bins_[static_cast<std::size_t>(o.bin)];
  ++b.attempts;
  switch (o.state) {
    case Pending::Decoded:
      ++s.decoded;
      break;
    case Pending::Lost:
      ++s.lost;
      ++b.failures;
      break;
    case Pending::HalfDuplex:
      ++s.half_duplex_missed;
      ++b.failures;
      ++b.half_duplex_missed;
      break;
  }
  o.active = false;
}

void Metrics::finish() {
  for (std::size_t l = 0; l < open_.size(); ++l) close(l);
}

void Metrics::add_ipg(Subframe gap) {
  if (gap <= 0) throw InvariantViolation("metrics: non-positive inter-packet gap");
  const auto g = static_cast<std::size_t>(gap);
  if (ipg_counts_.size() <= g) ipg_counts_.resize(g + 1, 0);
  ++ipg_counts_[g];
}

void Metrics::merge(const Metrics& other) {
  if (other.n_ != n_ || !(other.cfg_ == cfg_)) {
    throw InvariantViolation("metrics: merge of incompatible accumulators");
  }
  for (std::size_t l = 0; l < links_.size(); ++l) {
    LinkStats& a = links_[l];
    const LinkStats& b = other.links_[l];
    a.expected += b.expected;
    a.decoded += b.decoded;
    a.lost += b.lost;
    a.half_duplex_missed += b.half_duplex_missed;
    a.ipg_samples += b.ipg_samples;
    if (b.last_reception) {
      a.last_reception = a.last_reception ? std::max(*a.last_reception, *b.last_reception)
                                          : b.last_reception;
    }
  }
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    bins_[i].attempts += other.bins_[i].attempts;
    bins_[i].failures += other.bins_[i].failures;
    bins_[i].half_duplex_missed += other.bins_[i].half_duplex_missed;
  }
  if (ipg_counts_.size() < other.ipg_counts_.size()) ipg_counts_.resize(other.ipg_counts_.size(), 0);
  for (std::size_t g = 0; g < other.ipg_counts_.size(); ++g) ipg_counts_[g] += other.ipg_counts_[g];
}

std::vector<PerBin> Metrics::per_curve() const { return bins_; }

std::vector<IpgBin> Metrics::ipg_histogram() const {
  const int nb = cfg_.ipg_cap_ms / cfg_.ipg_bin_ms;
  std::vector<IpgBin> out(static_cast<std::size_t>(nb) + 1);
  for (int i = 0; i < nb; ++i) {
    out[static_cast<std::size_t>(i)].low_ms = i * cfg_.ipg_bin_ms;
    out[static_cast<std::size_t>(i)].high_ms = (i + 1) * cfg_.ipg_bin_ms;
  }
  out.back().low_ms = cfg_.ipg_cap_ms;
  out.back().high_ms = -1;
  std::uint64_t total = 0;
  for (std::size_t g = 0; g < ipg_counts_.size(); ++g) {
    const std::uint64_t c = ipg_counts_[g];
    if (c == 0) continue;
    const int gi = static_cast<int>(g);
    const std::size_t b = gi >= cfg_.ipg_cap_ms ? out.size() - 1
                                                : static_cast<std::size_t>(gi / cfg_.ipg_bin_ms);
    out[b].count += c;
    total += c;
  }
  if (total > 0) {
    for (IpgBin& b : out) b.freq = static_cast<double>(b.count) / static_cast<double>(total);
  }
  return out;
}

IpgSummary Metrics::ipg_summary() const {
  IpgSummary s;
  double sum = 0.0;
  std::uint64_t above = 0;
  std::uint64_t best = 0;
  for (std::size_t g = 0; g < ipg_counts_.size(); ++g) {
    const std::uint64_t c = ipg_counts_[g];
    s.samples += c;
    sum += static_cast<double>(g) * static_cast<double>(c);
    if (static_cast<int>(g) > cfg_.ipg_cap_ms) above += c;
    if (c > best) {
      best = c;
      s.mode_ms = static_cast<int>(g);
    }
  }
  if (s.samples == 0) return s;
  s.mean_ms = sum / static_cast<double>(s.samples);
  s.fraction_above_cap = static_cast<double>(above) / static_cast<double>(s.samples);
  // Nearest-rank percentiles.
  auto rank = [&](double q) {
    const auto target = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(s.samples)));
    std::uint64_t acc = 0;
    for (std::size_t g = 0; g < ipg_counts_.size(); ++g) {
      acc += ipg_counts_[g];
      if (acc >= std::max<std::uint64_t>(target, 1)) return static_cast<double>(g);
    }
    return static_cast<double>(ipg_counts_.size() - 1);
  };
  s.median_ms = rank(0.5);
  s.p95_ms = rank(0.95);
  return s;
}

std::uint64_t Metrics::expected_total() const {
  std::uint64_t n = 0;
  for (const LinkStats& s : links_) n += s.expected;
  return n;
}

std::uint64_t Metrics::decoded_total() const {
  std::uint64_t n = 0;
  for (const LinkStats& s : links_) n += s.decoded;
  return n;
}

std::uint64_t Metrics::lost_total() const {
  std::uint64_t n = 0;
  for (const LinkStats& s : links_) n += s.lost;
  return n;
}

std::uint64_t Metrics::half_duplex_total() const {
  std::uint64_t n = 0;
  for (const LinkStats& s : links_) n += s.half_duplex_missed;
  return n;
}

double Metrics::per_total() const {
  std::uint64_t attempts = 0;
  std::uint64_t failures = 0;
  for (const PerBin& b : bins_) {
    attempts += b.attempts;
    failures += b.failures;
  }
  return attempts == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(attempts);
}

double Metrics::data_rate_bps(int packet_bytes, double sim_time_s) const {
  if (!(sim_time_s > 0.0)) return 0.0;
  return static_cast<double>(decoded_total()) * packet_bytes * 8.0 / sim_time_s;
}

void Metrics::write_per_curve_csv(std::ostream& out) const {
  out << "bin_low_m,bin_high_m,attempts,failures,per,hd_missed\n";
  for (const PerBin& b : bins_) {
    out << b.low_m << ',' << b.high_m << ',' << b.attempts << ',' << b.failures << ',';
    if (const auto p = b.per()) out << *p;
    out << ',' << b.half_duplex_missed << '\n';
  }
}

void Metrics::write_ipg_csv(std::ostream& out) const {
  out << "bin_low_ms,bin_high_ms,freq,count\n";
  for (const IpgBin& b : ipg_histogram()) {
    out << b.low_ms << ',';
    if (b.high_ms < 0) {
      out << "inf";
    } else {
      out << b.high_ms;
    }
    out << ',' << b.freq << ',' << b.count << '\n';
  }
}

}  // namespace spssim
