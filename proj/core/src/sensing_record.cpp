#include "spssim/sensing_record.hpp"

#include <algorithm>
#include <string>

#include "spssim/errors.hpp"

namespace spssim {

SensingRecord::SensingRecord(int n_subch, int window, double idle_rssi_mw,
                             Subframe first_subframe)
    : n_subch_(n_subch),
      window_(window),
      sci_capacity_(n_subch),
      latest_(first_subframe - 1),
      rssi_(static_cast<std::size_t>(n_subch) * static_cast<std::size_t>(window), idle_rssi_mw),
      monitored_(static_cast<std::size_t>(window), 1),
      scis_(static_cast<std::size_t>(n_subch) * static_cast<std::size_t>(window)),
      sci_count_(static_cast<std::size_t>(window), 0) {
  if (n_subch < 1 || window < 1) throw ConfigError("sensing record needs n_subch, window >= 1");
}

std::size_t SensingRecord::slot(Subframe t) const {
  const auto w = static_cast<Subframe>(window_);
  return static_cast<std::size_t>(((t % w) + w) % w);
}

void SensingRecord::record_monitored(Subframe t, std::span<const double> rssi_mw,
                                     std::span<const SciEntry> scis) {
  if (t != latest_ + 1)
    throw InvariantViolation("sensing record written out of order at subframe " +
                             std::to_string(t));
  if (static_cast<int>(rssi_mw.size()) != n_subch_)
    throw InvariantViolation("sensing record: S-RSSI width mismatch");
  if (static_cast<int>(scis.size()) > sci_capacity_)
    throw InvariantViolation("sensing record: more decoded SCIs than sub-channels");
  const std::size_t s = slot(t);
  std::copy(rssi_mw.begin(), rssi_mw.end(),
            rssi_.begin() + static_cast<std::ptrdiff_t>(s * static_cast<std::size_t>(n_subch_)));
  std::copy(scis.begin(), scis.end(),
            scis_.begin() + static_cast<std::ptrdiff_t>(s * static_cast<std::size_t>(n_subch_)));
  sci_count_[s] = static_cast<std::uint16_t>(scis.size());
  monitored_[s] = 1;
  latest_ = t;
}

void SensingRecord::record_unmonitored(Subframe t) {
  if (t != latest_ + 1)
    throw InvariantViolation("sensing record written out of order at subframe " +
                             std::to_string(t));
  const std::size_t s = slot(t);
  sci_count_[s] = 0;
  monitored_[s] = 0;
  latest_ = t;
}

bool SensingRecord::monitored(Subframe t) const {
  if (!contains(t)) return false;
  return monitored_[slot(t)] != 0;
}

std::span<const double> SensingRecord::rssi_mw(Subframe t) const {
  if (!monitored(t)) return {};
  const std::size_t s = slot(t);
  return {rssi_.data() + s * static_cast<std::size_t>(n_subch_),
          static_cast<std::size_t>(n_subch_)};
}

std::span<const SciEntry> SensingRecord::scis(Subframe t) const {
  if (!monitored(t)) return {};
  const std::size_t s = slot(t);
  return {scis_.data() + s * static_cast<std::size_t>(n_subch_), sci_count_[s]};
}

double SensingRecord::mean_monitored_rssi_mw() const {
  double sum = 0.0;
  std::int64_t count = 0;
  for (Subframe t = latest_ - window_ + 1; t <= latest_; ++t) {
    if (!monitored(t)) continue;
    for (double v : rssi_mw(t)) sum += v;
    count += n_subch_;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

std::vector<double> subchannel_rssi_mw(const GridConfig& grid, const RadioConfig& radio,
                                       std::span<const Arrival> arrivals) {
  const int n = grid.n_subch();
  const double noise = dbm_to_mw(noise_floor_dbm(grid.subchannel_size, radio));
  std::vector<double> rssi(static_cast<std::size_t>(n), noise);
  const int all_rbs = transmission_rbs(grid);
  for (const auto& a : arrivals) {
    const RbSpan tb = tb_rbs(grid, a.csr.start_subch);
    const RbSpan sci = sci_rbs(grid, a.csr.start_subch);
    for (int j = a.csr.start_subch; j < a.csr.end_subch() && j < n; ++j) {
      const RbSpan sub{j * grid.subchannel_size, grid.subchannel_size};
      rssi[static_cast<std::size_t>(j)] +=
          a.rx_power_mw * (power_share(tb, all_rbs, sub) + power_share(sci, all_rbs, sub));
    }
  }
  return rssi;
}

void record_subframe(SensingRecord& record, Subframe t, GateState gate,
                     std::span<const double> rssi_mw, std::span<const SciEntry> scis) {
  if (gate == GateState::Transmitting)
    record.record_unmonitored(t);
  else
    record.record_monitored(t, rssi_mw, scis);
}

}  // namespace spssim
