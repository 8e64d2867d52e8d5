#include "spssim/sps_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "spssim/errors.hpp"

namespace spssim {

namespace {

Subframe floor_mod(Subframe a, Subframe m) {
  const Subframe r = a % m;
  return r < 0 ? r + m : r;
}

Subframe ceil_div(Subframe a, Subframe b) {
  // b > 0
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

void require_causal(const SensingRecord& record, Subframe now) {
  if (record.latest() >= now) {
    throw InvariantViolation("sensing record holds subframe " + std::to_string(record.latest()) +
                             " at decision time " + std::to_string(now));
  }
}

}  // namespace

std::string_view to_string(TieBreak tie_break) {
  return tie_break == TieBreak::Ordered ? "ordered" : "random";
}

TieBreak tie_break_from_string(std::string_view text) {
  if (text == "ordered") return TieBreak::Ordered;
  if (text == "random") return TieBreak::Random;
  throw ConfigError("unknown tie break '" + std::string(text) + "'");
}

std::vector<std::string> SpsConfig::validate() const {
  std::vector<std::string> warnings;
  if (t1 < 1 || t1 > 4) throw ConfigError("sps.t1 must be in [1, 4]");
  if (t2 < 20 || t2 > 100) throw ConfigError("sps.t2 must be in [20, 100]");
  if (std::find(kAllowedReservationPeriods.begin(), kAllowedReservationPeriods.end(), p_rsvp) ==
      kAllowedReservationPeriods.end()) {
    throw ConfigError("sps.p_rsvp=" + std::to_string(p_rsvp) + " is not an allowed period");
  }
  if (p_step != 20 && p_step != 50 && p_step != 100) {
    throw ConfigError("sps.p_step must be 20, 50 or 100");
  }
  if (!std::isfinite(th_sps_dbm)) throw ConfigError("sps.th_sps_dbm must be finite");
  if (!(p_resel >= 0.0 && p_resel <= 1.0)) throw ConfigError("sps.p_resel must be in [0, 1]");
  if (max_missed_opportunities < 0) throw ConfigError("sps.max_missed must be >= 0");
  const bool listed =
      std::any_of(kStandardReselectionProbabilities.begin(),
                  kStandardReselectionProbabilities.end(),
                  [&](double p) { return std::abs(p - p_resel) < 1e-12; });
  if (!listed) {
    warnings.push_back("sps.p_resel=" + std::to_string(p_resel) +
                       " is not one of 0, 0.2, 0.4, 0.6, 0.8, 1");
  }
  return warnings;
}

std::optional<int> SpsState::harq_offset() const {
  if (!grant || !harq_grant) return std::nullopt;
  return static_cast<int>(harq_grant->subframe - grant->subframe);
}

int min_candidate_count(int initial_count) { return (initial_count + 4) / 5; }

std::vector<Csr> build_report_window(Subframe n, const SpsConfig& cfg, const GridConfig& grid) {
  const std::vector<int> starts = csr_starts(grid);
  std::vector<Csr> out;
  out.reserve(static_cast<std::size_t>(cfg.t2 - cfg.t1 + 1) * starts.size());
  for (Subframe t = n + cfg.t1; t <= n + cfg.t2; ++t) {
    for (int s : starts) out.push_back(Csr{t, s, grid.l_subch});
  }
  return out;
}

bool projections_meet(Subframe w, int p_rx, Subframe y, int p_tx, int max_j) {
  if (p_rx <= 0 || p_tx <= 0) throw DomainError("projection periods must be positive");
  if (max_j < 0) return false;
  const Subframe period = p_rx / std::gcd(p_rx, p_tx);
  Subframe j0 = -1;
  for (Subframe j = 0; j < period; ++j) {
    if (floor_mod(y + j * p_tx - w, p_rx) == 0) {
      j0 = j;
      break;
    }
  }
  if (j0 < 0) return false;
  // k >= 1 needs y + j * p_tx >= w + p_rx.
  const Subframe j_min = std::max<Subframe>(0, ceil_div(w + p_rx - y, p_tx));
  Subframe j = j0;
  if (j < j_min) j += ceil_div(j_min - j0, period) * period;
  return j <= max_j;
}

int exemption_horizon_ms(const SpsConfig& cfg) {
  return cfg.p_rsvp * (10 * slrrc_range(cfg.p_rsvp).second - 1);
}

CandidateSet exempt(std::span<const Csr> candidates, const SensingRecord& record,
                    const SpsConfig& cfg, Subframe now, int horizon_ms) {
  require_causal(record, now);
  const int max_j = horizon_ms / cfg.p_rsvp;
  const std::size_t n = candidates.size();

  // Candidates grouped by subframe; projections depend on the subframe only.
  std::vector<Subframe> ys;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find(ys.begin(), ys.end(), candidates[i].subframe);
    if (it == ys.end()) {
      ys.push_back(candidates[i].subframe);
      members.emplace_back();
      it = ys.end() - 1;
    }
    members[static_cast<std::size_t>(it - ys.begin())].push_back(i);
  }

  std::vector<char> c1(n, 0);
  std::vector<double> max_rsrp(n, -std::numeric_limits<double>::infinity());
  for (Subframe w = now - cfg.sensing_window(); w < now; ++w) {
    if (!record.contains(w)) continue;
    if (!record.monitored(w)) {
      for (std::size_t g = 0; g < ys.size(); ++g) {
        const bool hit = std::any_of(
            kAllowedReservationPeriods.begin(), kAllowedReservationPeriods.end(),
            [&](int p) { return projections_meet(w, p, ys[g], cfg.p_rsvp, max_j); });
        if (hit) {
          for (std::size_t i : members[g]) c1[i] = 1;
        }
      }
      continue;
    }
    for (const SciEntry& sci : record.scis(w)) {
      for (std::size_t g = 0; g < ys.size(); ++g) {
        if (!projections_meet(w, sci.p_rsvp_ms, ys[g], cfg.p_rsvp, max_j)) continue;
        for (std::size_t i : members[g]) {
          if (candidates[i].overlaps(sci.csr)) max_rsrp[i] = std::max(max_rsrp[i], sci.rsrp_dbm);
        }
      }
    }
  }

  CandidateSet out;
  out.initial_count = static_cast<int>(n);
  const auto need = static_cast<std::size_t>(min_candidate_count(out.initial_count));
  const auto c1_free = static_cast<std::size_t>(std::count(c1.begin(), c1.end(), 0));
  out.c1_relaxed = c1_free < need;

  std::vector<double> eligible;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.c1_relaxed || !c1[i]) eligible.push_back(max_rsrp[i]);
  }
  std::sort(eligible.begin(), eligible.end());

  double threshold = cfg.th_sps_dbm;
  for (int k = 0;; ++k) {
    threshold = cfg.th_sps_dbm + kThresholdStepDb * k;
    const auto passing = static_cast<std::size_t>(
        std::lower_bound(eligible.begin(), eligible.end(), threshold) - eligible.begin());
    if (passing >= need) break;
  }
  out.final_threshold_dbm = threshold;
  for (std::size_t i = 0; i < n; ++i) {
    if ((out.c1_relaxed || !c1[i]) && max_rsrp[i] < threshold) {
      out.survivors.push_back(candidates[i]);
    }
  }
  return out;
}

std::vector<double> candidate_energy(std::span<const Csr> csrs, const SensingRecord& record,
                                     const SpsConfig& cfg, Subframe now) {
  require_causal(record, now);
  const double fill = record.mean_monitored_rssi_mw();
  std::vector<double> out;
  out.reserve(csrs.size());
  for (const Csr& c : csrs) {
    double sum = 0.0;
    for (int i = 1; i <= kSensingPeriods; ++i) {
      const Subframe s = c.subframe - static_cast<Subframe>(i) * cfg.p_step;
      const bool measured = s < now && record.contains(s) && record.monitored(s);
      const auto rssi = measured ? record.rssi_mw(s) : std::span<const double>{};
      for (int j = c.start_subch; j < c.end_subch(); ++j) {
        sum += measured ? rssi[static_cast<std::size_t>(j)] : fill;
      }
    }
    out.push_back(sum / kSensingPeriods);
  }
  return out;
}

std::vector<Csr> rank_select(const CandidateSet& set, const SensingRecord& record,
                             const SpsConfig& cfg, Subframe now, RandomStream* tie_rng) {
  const std::vector<double> energy = candidate_energy(set.survivors, record, cfg, now);
  std::vector<std::size_t> order(set.survivors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (cfg.tie_break == TieBreak::Random) {
    if (tie_rng == nullptr) throw SchedulingError("random tie break needs a random stream");
    std::shuffle(order.begin(), order.end(), *tie_rng);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });
  const std::size_t take =
      std::min(order.size(), static_cast<std::size_t>(min_candidate_count(set.initial_count)));
  std::vector<Csr> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(set.survivors[order[i]]);
  return out;
}

std::pair<int, int> slrrc_range(int p_rsvp) {
  if (p_rsvp >= 100) return {5, 15};
  if (p_rsvp == 50) return {10, 30};
  if (p_rsvp == 20) return {25, 75};
  throw ConfigError("no counter range for p_rsvp=" + std::to_string(p_rsvp));
}

int draw_slrrc(int p_rsvp, RandomStream& rng) {
  const auto [lo, hi] = slrrc_range(p_rsvp);
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

SpsState reserve(std::span<const Csr> s_b, const SpsConfig& cfg, Subframe now,
                 RandomStream& rng) {
  if (s_b.empty()) throw SchedulingError("reserve called with an empty S_B");
  SpsState state;
  const auto pick = std::uniform_int_distribution<std::size_t>(0, s_b.size() - 1)(rng);
  state.grant = s_b[pick];
  state.slrrc = draw_slrrc(cfg.p_rsvp, rng);
  state.c_resel = 10 * state.slrrc;
  state.p_rsvp_ms = cfg.p_rsvp;
  state.reserved_at = now;
  if (cfg.harq_enabled) {
    std::vector<Csr> options;
    for (const Csr& c : s_b) {
      const Subframe d = c.subframe - state.grant->subframe;
      if (d != 0 && d >= -kHarqMaxOffset && d <= kHarqMaxOffset) options.push_back(c);
    }
    if (!options.empty()) {
      const auto h = std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng);
      state.harq_grant = options[h];
    }
  }
  return state;
}

std::string_view to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::None: return "none";
    case Trigger::NoGrant: return "no_grant";
    case Trigger::CounterExpired: return "counter_expired";
    case Trigger::Idle: return "idle";
    case Trigger::MissedOpportunities: return "missed_opportunities";
    case Trigger::Latency: return "latency";
    case Trigger::PduTooLarge: return "pdu_too_large";
  }
  return "unknown";
}

Trigger check_triggers(const SpsState& state, const ArrivalEvent& event, const SpsConfig& cfg) {
  if (!state.grant) return Trigger::NoGrant;
  if (state.slrrc == 0) return Trigger::CounterExpired;
  const Subframe active = std::max(state.reserved_at, state.last_tx_time.value_or(state.reserved_at));
  if (event.now - active > kIdleTriggerMs) return Trigger::Idle;
  if (state.missed_opportunities > cfg.max_missed_opportunities) {
    return Trigger::MissedOpportunities;
  }
  const Subframe next = next_occurrence(*state.grant, state.p_rsvp_ms, event.now + cfg.t1);
  if (next - event.now > cfg.t2) return Trigger::Latency;
  if (event.pdu_bits > event.grant_capacity_bits) return Trigger::PduTooLarge;
  return Trigger::None;
}

void on_transmit(SpsState& state, Subframe t) {
  if (!state.grant) throw SchedulingError("transmission without a grant");
  if (state.slrrc <= 0) throw SchedulingError("transmission with an expired counter");
  --state.slrrc;
  state.last_tx_time = t;
  state.missed_opportunities = 0;
}

void on_missed(SpsState& state) { ++state.missed_opportunities; }

ExpiryDecision on_expiry(SpsState& state, const SpsConfig& cfg, Subframe now, RandomStream& rng) {
  if (!state.grant) throw SchedulingError("expiry without a grant");
  if (state.slrrc != 0) throw SchedulingError("expiry with a running counter");
  if (uniform01(rng) < cfg.p_resel) return ExpiryDecision::Reselect;
  state.slrrc = draw_slrrc(state.p_rsvp_ms, rng);
  state.c_resel = 10 * state.slrrc;
  state.reserved_at = now;
  return ExpiryDecision::Keep;
}

Subframe next_occurrence(const Csr& first, int period, Subframe from) {
  if (period <= 0) throw DomainError("period must be positive");
  if (from <= first.subframe) return first.subframe;
  return first.subframe + ceil_div(from - first.subframe, period) * period;
}

}  // namespace spssim
