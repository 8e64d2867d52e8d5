#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace oracle {

const std::vector<int>& reservation_periods() {
  static const std::vector<int> periods = {20,  50,  100, 200, 300, 400,
                                           500, 600, 700, 800, 900, 1000};
  return periods;
}

double History::fill_mw() const {
  double sum = 0.0;
  long count = 0;
  for (const auto& [t, slot] : slots) {
    if (!slot.monitored) continue;
    for (double v : slot.rssi_mw) {
      sum += v;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

namespace {

std::set<Subframe> occurrences(Subframe y, int p_tx, int horizon_ms) {
  std::set<Subframe> out;
  for (int j = 0; j * p_tx <= horizon_ms; ++j) out.insert(y + static_cast<Subframe>(j) * p_tx);
  return out;
}

bool projects_onto(Subframe w, int period, const std::set<Subframe>& occ) {
  const Subframe last = *occ.rbegin();
  for (Subframe s = w + period; s <= last; s += period) {
    if (occ.contains(s)) return true;
  }
  return false;
}

}  // namespace

Expected brute_force(const Instance& inst) {
  const std::size_t n = inst.candidates.size();
  std::vector<bool> c1(n, false);
  std::vector<std::vector<double>> c2_rsrp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Csr& c = inst.candidates[i];
    const std::set<Subframe> occ = occurrences(c.subframe, inst.p_tx, inst.horizon_ms);
    for (const auto& [w, slot] : inst.history.slots) {
      if (!slot.monitored) {
        for (int p : reservation_periods()) {
          if (projects_onto(w, p, occ)) c1[i] = true;
        }
        continue;
      }
      for (const Sci& s : slot.scis) {
        const bool overlap = c.start_subch < s.csr.start_subch + s.csr.l_subch &&
                             s.csr.start_subch < c.start_subch + c.l_subch;
        if (overlap && projects_onto(w, s.p_rsvp_ms, occ)) c2_rsrp[i].push_back(s.rsrp_dbm);
      }
    }
  }

  const std::size_t need = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n) - 1e-9));
  Expected out;
  out.c1_relaxed = static_cast<std::size_t>(std::count(c1.begin(), c1.end(), false)) < need;
  for (int k = 0; k < 10000; ++k) {
    const double th = inst.th_sps_dbm + 3.0 * k;
    std::vector<Csr> survivors;
    for (std::size_t i = 0; i < n; ++i) {
      if (c1[i] && !out.c1_relaxed) continue;
      const bool c2 = std::any_of(c2_rsrp[i].begin(), c2_rsrp[i].end(),
                                  [&](double r) { return r >= th; });
      if (!c2) survivors.push_back(inst.candidates[i]);
    }
    if (survivors.size() >= need) {
      out.survivors = survivors;
      out.threshold_dbm = th;
      break;
    }
  }

  std::vector<std::pair<double, Csr>> ranked;
  for (const Csr& c : out.survivors) ranked.emplace_back(energy(c, inst.history, inst.p_step), c);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.subframe != b.second.subframe) return a.second.subframe < b.second.subframe;
    return a.second.start_subch < b.second.start_subch;
  });
  for (std::size_t i = 0; i < std::min(need, ranked.size()); ++i) out.s_b.push_back(ranked[i].second);
  return out;
}

double energy(const Csr& csr, const History& history, int p_step) {
  const double fill = history.fill_mw();
  double total = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const auto it = history.slots.find(csr.subframe - static_cast<Subframe>(i) * p_step);
    for (int j = csr.start_subch; j < csr.start_subch + csr.l_subch; ++j) {
      if (it == history.slots.end() || !it->second.monitored) {
        total += fill;
      } else {
        total += it->second.rssi_mw[static_cast<std::size_t>(j)];
      }
    }
  }
  return total / 10.0;
}

Instance random_instance(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto real = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Instance inst;
  const int n_subch = pick(1, 4);
  inst.l_subch = pick(1, n_subch);
  inst.p_step = pick(1, 3);
  inst.p_tx = std::vector<int>{20, 50, 100}[static_cast<std::size_t>(pick(0, 2))];
  inst.horizon_ms = inst.p_tx * pick(0, 4);
  inst.th_sps_dbm = real(-95.0, -75.0);

  History& h = inst.history;
  h.n_subch = n_subch;
  h.window = 10 * inst.p_step;
  h.now = pick(h.window, 200);
  // A third of the instances spend most of the window transmitting.
  const double unmonitored_rate = pick(0, 2) == 0 ? real(0.3, 0.9) : real(0.0, 0.15);
  for (Subframe t = h.now - h.window; t < h.now; ++t) {
    Slot s;
    s.monitored = real(0.0, 1.0) >= unmonitored_rate;
    for (int j = 0; j < n_subch; ++j) s.rssi_mw.push_back(std::pow(10.0, real(-11.0, -7.0)));
    h.slots[t] = s;
  }
  const int n_sci = pick(0, 5);
  std::vector<Subframe> monitored;
  for (const auto& [t, s] : h.slots) {
    if (s.monitored) monitored.push_back(t);
  }
  const int starts = n_subch / inst.l_subch;
  for (int k = 0; k < n_sci && !monitored.empty(); ++k) {
    const Subframe t = monitored[static_cast<std::size_t>(pick(0, static_cast<int>(monitored.size()) - 1))];
    Slot& s = h.slots[t];
    if (static_cast<int>(s.scis.size()) >= starts) continue;
    Sci sci;
    sci.csr = Csr{t, pick(0, starts - 1) * inst.l_subch, inst.l_subch};
    const bool taken = std::any_of(s.scis.begin(), s.scis.end(), [&](const Sci& o) {
      return o.csr.start_subch == sci.csr.start_subch;
    });
    if (taken) continue;
    // Coarse RSRP grid makes threshold ties with th + 3k reachable.
    sci.rsrp_dbm = inst.th_sps_dbm + 1.5 * pick(-4, 12);
    sci.p_rsvp_ms = std::vector<int>{20, 50, 100}[static_cast<std::size_t>(pick(0, 2))];
    s.scis.push_back(sci);
  }

  const int t1 = pick(1, 4);
  const int t2 = t1 + pick(0, 25);
  for (Subframe y = h.now + t1; y <= h.now + t2; ++y) {
    for (int x = 0; x + inst.l_subch <= n_subch; x += inst.l_subch) {
      inst.candidates.push_back(Csr{y, x, inst.l_subch});
    }
  }
  return inst;
}

spssim::SensingRecord to_record(const History& h) {
  spssim::SensingRecord rec(h.n_subch, h.window, 1e-12, h.now - h.window);
  for (const auto& [t, slot] : h.slots) {
    if (!slot.monitored) {
      rec.record_unmonitored(t);
      continue;
    }
    std::vector<spssim::SciEntry> scis;
    for (const Sci& s : slot.scis) {
      scis.push_back(spssim::SciEntry{0, s.csr, s.rsrp_dbm, s.p_rsvp_ms, false});
    }
    rec.record_monitored(t, slot.rssi_mw, scis);
  }
  return rec;
}

spssim::SpsConfig config_for(const Instance& inst) {
  spssim::SpsConfig cfg;
  cfg.p_rsvp = inst.p_tx;
  cfg.p_step = inst.p_step;
  cfg.th_sps_dbm = inst.th_sps_dbm;
  cfg.tie_break = spssim::TieBreak::Ordered;
  return cfg;
}

}  // namespace oracle
