#include "spssim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spssim/errors.hpp"

namespace spssim {

namespace {

bool occurs(const Csr& first, int period, Subframe t) {
  return t >= first.subframe && (t - first.subframe) % period == 0;
}

RunConfig validated(RunConfig cfg) {
  cfg.validate(false);
  return cfg;
}

}  // namespace

BlerCurve load_bler_curve(const std::string& spec) {
  if (spec == "builtin") return BlerCurve::builtin();
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw ConfigError("cannot read BLER curve " + spec);
  std::ostringstream ss;
  ss << in.rdbuf();
  return BlerCurve::parse(ss.str());
}

Simulation::Simulation(RunConfig cfg)
    : cfg_(validated(std::move(cfg))),
      vehicles_(spawn(cfg_.scenario, RngPlan(cfg_.run.seed))),
      metrics_(static_cast<int>(vehicles_.size()), cfg_.metrics) {
  init();
}

Simulation::Simulation(RunConfig cfg, std::vector<Vehicle> vehicles)
    : cfg_(validated(std::move(cfg))),
      vehicles_(std::move(vehicles)),
      metrics_(static_cast<int>(vehicles_.size()), cfg_.metrics) {
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (vehicles_[i].id != static_cast<UeId>(i)) throw ConfigError("vehicle ids must be 0..n-1");
  }
  init();
}

void Simulation::init() {
  n_ = static_cast<int>(vehicles_.size());
  end_ = cfg_.scenario.subframes();
  pdu_bits_ = cfg_.scenario.packet_bytes * 8;
  capacity_bits_ = tb_size(cfg_.grid.mcs_index, cfg_.grid.n_pssch_rb);
  horizon_ms_ = exemption_horizon_ms(cfg_.sps);
  curve_ = load_bler_curve(cfg_.run.bler_curve);

  const RngPlan plan(cfg_.run.seed);
  const double idle_mw = dbm_to_mw(noise_floor_dbm(cfg_.grid.subchannel_size, cfg_.radio));
  ues_.reserve(static_cast<std::size_t>(n_));
  for (UeId i = 0; i < n_; ++i) {
    ues_.push_back(Ue{SensingRecord(cfg_.grid.n_subch(), cfg_.sps.sensing_window(), idle_mw, 0),
                      SpsState{}, plan.stream(i, StreamPurpose::Mac),
                      plan.stream(i, StreamPurpose::Fading), plan.stream(i, StreamPurpose::Decode),
                      {}, std::nullopt, 0, false});
  }

  PathLossTable table = PathLossTable::fowlerville();
  table.weibull_k = cfg_.channel.weibull_k;
  table.validate();
  laws_.clear();
  for (const PathLossBin& b : table.bins) {
    laws_.emplace_back(b.nakagami_m ? FadingLaw{FadingLaw::Kind::Nakagami, *b.nakagami_m}
                                    : FadingLaw{FadingLaw::Kind::Weibull, table.weibull_k});
  }
  const TwoRayParams params = TwoRayParams::from_carrier(
      cfg_.channel.carrier_mhz * 1e6, cfg_.channel.antenna_height_m,
      {cfg_.channel.reflection_coefficient, 0.0});

  // Relative geometry is invariant under the platoon's rigid motion.
  const std::size_t nn = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  distance_.assign(nn, 0.0);
  mean_rx_mw_.assign(nn, 0.0);
  fading_bin_.assign(nn, 0);
  for (UeId a = 0; a < n_; ++a) {
    for (UeId b = 0; b < n_; ++b) {
      if (a == b) continue;
      const double d = pair_distance(vehicles_[static_cast<std::size_t>(a)],
                                     vehicles_[static_cast<std::size_t>(b)], cfg_.scenario);
      if (!(d > 0.0)) throw ConfigError("two vehicles share a position");
      const std::size_t p = pair(a, b);
      distance_[p] = d;
      mean_rx_mw_[p] =
          dbm_to_mw(received_power_dbm(cfg_.radio, large_scale_loss_db(d, params, table)));
      fading_bin_[p] = static_cast<std::uint8_t>(table.bin_index(d));
    }
  }
  transmitting_.assign(static_cast<std::size_t>(n_), 0);
}

double Simulation::receiver_position(UeId rx) const {
  const Vehicle& v = vehicles_[static_cast<std::size_t>(rx)];
  if (cfg_.scenario.edge_mode == EdgeMode::Open) return v.position_m;
  const double L = cfg_.scenario.road_length_m;
  const double p = std::fmod(v.position_m + v.speed_mps * static_cast<double>(now_) * 1e-3, L);
  return p < 0.0 ? p + L : p;
}

bool Simulation::in_scope(UeId tx, UeId rx) const {
  return distance_[pair(tx, rx)] < cfg_.metrics.max_range_m &&
         in_measurement_window(receiver_position(rx), cfg_.scenario);
}

void Simulation::step() {
  if (done()) return;
  std::vector<UeId> arrivals;
  phase_traffic(arrivals);
  phase_mac(arrivals);
  phase_placement();
  phase_receive();
  phase_metrics();
  ++now_;
}

void Simulation::phase_traffic(std::vector<UeId>& arrivals) {
  for (UeId i = 0; i < n_; ++i) {
    Ue& ue = ues_[static_cast<std::size_t>(i)];
    while (!ue.queue.empty() && now_ > ue.queue.front().generated + cfg_.sps.t2) {
      ue.queue.pop_front();
      ++counters_.mac_dropped;
    }
    if (auto p = next_packet(vehicles_[static_cast<std::size_t>(i)], now_, cfg_.scenario)) {
      ue.queue.push_back(*p);
      ++counters_.packets_generated;
      arrivals.push_back(i);
    }
  }
}

void Simulation::phase_mac(const std::vector<UeId>& arrivals) {
  for (UeId i : arrivals) {
    Ue& ue = ues_[static_cast<std::size_t>(i)];
    const ArrivalEvent event{now_, pdu_bits_, capacity_bits_};
    Trigger trigger = check_triggers(ue.sps, event, cfg_.sps);
    if (trigger == Trigger::CounterExpired) {
      ++counters_.triggers[static_cast<std::size_t>(trigger)];
      if (on_expiry(ue.sps, cfg_.sps, now_, ue.mac) == ExpiryDecision::Keep) {
        ++counters_.keeps;
        if (cfg_.run.trace) {
          trace_.push_back(GrantEvent{now_, i, trigger, false, *ue.sps.grant,
                                      ue.sps.harq_offset(), ue.sps.slrrc, cfg_.sps.th_sps_dbm,
                                      false});
        }
        trigger = check_triggers(ue.sps, event, cfg_.sps);
        if (trigger == Trigger::None) continue;
        ++counters_.triggers[static_cast<std::size_t>(trigger)];
      }
      reselect(i, trigger);
      continue;
    }
    if (trigger != Trigger::None) {
      ++counters_.triggers[static_cast<std::size_t>(trigger)];
      reselect(i, trigger);
    }
  }
}

void Simulation::reselect(UeId i, Trigger trigger) {
  Ue& ue = ues_[static_cast<std::size_t>(i)];
  const std::vector<Csr> window = build_report_window(now_, cfg_.sps, cfg_.grid);
  const CandidateSet set = exempt(window, ue.record, cfg_.sps, now_, horizon_ms_);
  const std::vector<Csr> s_b = rank_select(set, ue.record, cfg_.sps, now_, &ue.mac);
  const std::optional<Subframe> last_tx = ue.sps.last_tx_time;
  ue.sps = reserve(s_b, cfg_.sps, now_, ue.mac);
  ue.sps.last_tx_time = last_tx;
  ue.in_flight.reset();
  ue.pair_sent = false;
  ++counters_.reselections;
  if (set.c1_relaxed) ++counters_.c1_relaxed;
  if (cfg_.run.trace) {
    trace_.push_back(GrantEvent{now_, i, trigger, true, *ue.sps.grant, ue.sps.harq_offset(),
                                ue.sps.slrrc, set.final_threshold_dbm, set.c1_relaxed});
  }
}

void Simulation::phase_placement() {
  placements_.clear();
  std::fill(transmitting_.begin(), transmitting_.end(), 0);
  for (UeId i = 0; i < n_; ++i) {
    Ue& ue = ues_[static_cast<std::size_t>(i)];
    if (!ue.sps.grant) continue;
    const int p = ue.sps.p_rsvp_ms;
    const bool primary = occurs(*ue.sps.grant, p, now_);
    const bool harq = ue.sps.harq_grant && occurs(*ue.sps.harq_grant, p, now_);
    if (!primary && !harq) continue;
    const std::optional<int> offset = ue.sps.harq_offset();
    // With a HARQ set, occurrences come in pairs; `later` marks the second one.
    const bool later = offset && ((primary && *offset < 0) || (harq && *offset > 0));
    const int l = cfg_.grid.l_subch;
    const Csr& base = primary ? *ue.sps.grant : *ue.sps.harq_grant;
    const Csr here{now_, base.start_subch, l};

    bool sent = false;
    if (ue.in_flight && now_ <= ue.in_flight_until) {
      placements_.push_back(Transmission{i, here, p, true, ue.in_flight->id});
      ue.in_flight.reset();
      ++counters_.retransmissions;
      sent = true;
    } else if (ue.sps.slrrc > 0 && !ue.queue.empty() &&
               ue.queue.front().generated + cfg_.sps.t1 <= now_) {
      const Packet pkt = ue.queue.front();
      ue.queue.pop_front();
      placements_.push_back(Transmission{i, here, p, false, pkt.id});
      on_transmit(ue.sps, now_);
      ++counters_.transmissions;
      if (offset && !later) {
        ue.in_flight = pkt;
        ue.in_flight_until = now_ + std::abs(*offset);
      }
      sent = true;
    }
    if (!offset) {
      if (!sent && ue.sps.slrrc > 0) {
        on_missed(ue.sps);
        ++counters_.missed_opportunities;
      }
    } else if (!later) {
      ue.pair_sent = sent;
    } else {
      if (!sent && !ue.pair_sent && ue.sps.slrrc > 0) {
        on_missed(ue.sps);
        ++counters_.missed_opportunities;
      }
      ue.pair_sent = false;
    }
    if (sent) transmitting_[static_cast<std::size_t>(i)] = 1;
  }
}

void Simulation::phase_receive() {
  outcomes_.clear();
  const GridConfig& g = cfg_.grid;
  const int all_rbs = transmission_rbs(g);
  const double noise_tb_mw = dbm_to_mw(noise_floor_dbm(g.n_pssch_rb, cfg_.radio));
  const double noise_sci_mw = dbm_to_mw(noise_floor_dbm(kSciRbs, cfg_.radio));
  const double sci_sinr_lin = db_to_linear(cfg_.radio.sci_sinr_threshold_db);
  const double sci_floor_mw = dbm_to_mw(cfg_.radio.sci_sensitivity_dbm);
  const std::size_t k = placements_.size();

  std::vector<RbSpan> tb(k);
  std::vector<RbSpan> sci(k);
  for (std::size_t a = 0; a < k; ++a) {
    tb[a] = tb_rbs(g, placements_[a].csr.start_subch);
    sci[a] = sci_rbs(g, placements_[a].csr.start_subch);
  }
  // Power share of transmission b on the TB and SCI RBs of transmission a.
  std::vector<double> on_tb(k * k, 0.0);
  std::vector<double> on_sci(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      on_tb[a * k + b] = power_share(tb[b], all_rbs, tb[a]) + power_share(sci[b], all_rbs, tb[a]);
      on_sci[a * k + b] =
          power_share(tb[b], all_rbs, sci[a]) + power_share(sci[b], all_rbs, sci[a]);
    }
  }
  // Share of each transmission's power per sub-channel, as in subchannel_rssi_mw.
  const int n_subch = g.n_subch();
  const double noise_subch_mw = dbm_to_mw(noise_floor_dbm(g.subchannel_size, cfg_.radio));
  std::vector<double> on_subch(k * static_cast<std::size_t>(n_subch), 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    const Csr& c = placements_[a].csr;
    for (int j = c.start_subch; j < c.end_subch() && j < n_subch; ++j) {
      const RbSpan sub{j * g.subchannel_size, g.subchannel_size};
      on_subch[a * static_cast<std::size_t>(n_subch) + static_cast<std::size_t>(j)] =
          power_share(tb[a], all_rbs, sub) + power_share(sci[a], all_rbs, sub);
    }
  }
  std::vector<double> rssi(static_cast<std::size_t>(n_subch));
  const double tb_share = static_cast<double>(g.n_pssch_rb) / all_rbs;
  const double sci_share = static_cast<double>(kSciRbs) / all_rbs;

  rx_mw_.resize(k);
  for (UeId r = 0; r < n_; ++r) {
    Ue& ue = ues_[static_cast<std::size_t>(r)];
    if (transmitting_[static_cast<std::size_t>(r)]) {
      for (const Transmission& t : placements_) {
        if (t.tx != r) {
          outcomes_.push_back(
              Outcome{t.tx, r, t.packet_id, t.retransmission, ReceptionOutcome::HalfDuplexMissed});
        }
      }
      ue.record.record_unmonitored(now_);
      continue;
    }
    scis_.clear();
    std::fill(rssi.begin(), rssi.end(), noise_subch_mw);
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t p = pair(placements_[a].tx, r);
      double gain = 1.0;
      if (cfg_.channel.fading) gain = laws_[fading_bin_[p]](ue.fading);
      rx_mw_[a] = mean_rx_mw_[p] * gain;
      const Csr& c = placements_[a].csr;
      for (int j = c.start_subch; j < c.end_subch() && j < n_subch; ++j) {
        rssi[static_cast<std::size_t>(j)] +=
            rx_mw_[a] * on_subch[a * static_cast<std::size_t>(n_subch) + static_cast<std::size_t>(j)];
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      const Transmission& t = placements_[a];
      double i_tb = 0.0;
      double i_sci = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        i_tb += rx_mw_[b] * on_tb[a * k + b];
        i_sci += rx_mw_[b] * on_sci[a * k + b];
      }
      const double s_sci = rx_mw_[a] * sci_share;
      bool sci_ok = s_sci >= sci_floor_mw;
      if (cfg_.radio.sci_model == SciModel::Threshold) {
        sci_ok = sci_ok && s_sci >= sci_sinr_lin * (i_sci + noise_sci_mw);
      }
      const double s_tb = rx_mw_[a] * tb_share;
      if (sci_ok) {
        ++counters_.sci_decoded;
        scis_.push_back(SciEntry{t.tx, t.csr, rsrp_dbm(mw_to_dbm(s_tb), g.n_pssch_rb), t.p_rsvp_ms,
                                 t.retransmission});
      }
      const bool tracked =
          t.retransmission ? metrics_.is_open(t.tx, r, t.packet_id) : in_scope(t.tx, r);
      if (!tracked) continue;
      ReceptionOutcome outcome = ReceptionOutcome::Lost;
      if (sci_ok) {
        const double sinr = linear_to_db(s_tb / (i_tb + noise_tb_mw));
        if (decode(sinr, curve_, ue.decode) == DecodeOutcome::Decoded) {
          outcome = ReceptionOutcome::Decoded;
        }
      }
      outcomes_.push_back(Outcome{t.tx, r, t.packet_id, t.retransmission, outcome});
    }
    ue.record.record_monitored(now_, rssi, scis_);
  }
}

void Simulation::phase_metrics() {
  for (const Outcome& o : outcomes_) {
    if (o.retransmission) {
      if (!metrics_.is_open(o.tx, o.rx, o.packet_id)) continue;
    } else {
      if (!in_scope(o.tx, o.rx)) continue;
      metrics_.on_transmission(o.tx, o.rx, o.packet_id, distance_[pair(o.tx, o.rx)]);
    }
    metrics_.on_reception(o.tx, o.rx, o.packet_id, now_, o.outcome);
  }
}

RunResult Simulation::finish() {
  while (!done()) step();
  metrics_.finish();
  return RunResult{cfg_, n_, metrics_, counters_, trace_};
}

RunResult run(const RunConfig& cfg) {
  Simulation sim(cfg);
  return sim.finish();
}

std::string summary_text(const RunResult& r) {
  const Metrics& m = r.metrics;
  const IpgSummary ipg = m.ipg_summary();
  const RunCounters& c = r.counters;
  std::ostringstream out;
  out << std::setprecision(12);
  out << "per_total=" << m.per_total() << '\n'
      << "ipg_mean_ms=" << ipg.mean_ms << '\n'
      << "ipg_p95_ms=" << ipg.p95_ms << '\n'
      << "data_rate_bps=" << m.data_rate_bps(r.config.scenario.packet_bytes,
                                             r.config.scenario.sim_time_s)
      << '\n'
      << "vehicle_count=" << r.vehicle_count << '\n'
      << "seed=" << r.config.run.seed << '\n'
      << "ipg_median_ms=" << ipg.median_ms << '\n'
      << "ipg_mode_ms=" << ipg.mode_ms << '\n'
      << "ipg_samples=" << ipg.samples << '\n'
      << "ipg_over_cap_fraction=" << ipg.fraction_above_cap << '\n'
      << "expected=" << m.expected_total() << '\n'
      << "decoded=" << m.decoded_total() << '\n'
      << "lost=" << m.lost_total() << '\n'
      << "half_duplex_missed=" << m.half_duplex_total() << '\n'
      << "packets_generated=" << c.packets_generated << '\n'
      << "transmissions=" << c.transmissions << '\n'
      << "retransmissions=" << c.retransmissions << '\n'
      << "reselections=" << c.reselections << '\n'
      << "keeps=" << c.keeps << '\n'
      << "mac_dropped=" << c.mac_dropped << '\n'
      << "missed_opportunities=" << c.missed_opportunities << '\n'
      << "c1_relaxed=" << c.c1_relaxed << '\n';
  for (std::size_t i = 1; i < c.triggers.size(); ++i) {
    out << "trigger_" << to_string(static_cast<Trigger>(i)) << '=' << c.triggers[i] << '\n';
  }
  return out.str();
}

void write_artifacts(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f << std::setprecision(12);
    return f;
  };
  {
    auto f = open("per_curve.csv");
    r.metrics.write_per_curve_csv(f);
  }
  {
    auto f = open("ipg_hist.csv");
    r.metrics.write_ipg_csv(f);
  }
  open("summary.txt") << summary_text(r);
  open("config.ini") << emit_config(r.config);
  if (r.config.run.trace) {
    auto f = open("grant_trace.csv");
    f << "subframe,ue,trigger,action,grant_subframe,start_subch,l_subch,harq_offset,slrrc,"
         "threshold_dbm,c1_relaxed\n";
    for (const GrantEvent& e : r.trace) {
      f << e.t << ',' << e.ue << ',' << to_string(e.trigger) << ','
        << (e.reselected ? "reselect" : "keep") << ',' << e.grant.subframe << ','
        << e.grant.start_subch << ',' << e.grant.l_subch << ',';
      if (e.harq_offset) f << *e.harq_offset;
      f << ',' << e.slrrc << ',' << e.threshold_dbm << ',' << (e.c1_relaxed ? 1 : 0) << '\n';
    }
  }
}

}  // namespace spssim
