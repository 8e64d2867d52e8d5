#include "spssim/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spssim/errors.hpp"

namespace spssim {

namespace {

struct Alias {
  std::string_view alias;
  std::string_view key;
};

constexpr Alias kAliases[] = {
    {"p_resel", "sps.p_resel"},           {"th_sps", "sps.th_sps_dbm"},
    {"offset_mode", "scenario.offset_mode"}, {"preset", "scenario.preset"},
    {"density", "scenario.density"},      {"t2", "sps.t2"},
    {"harq", "sps.harq"},
};

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

const std::vector<std::string_view>& sweepable_keys() {
  static const std::vector<std::string_view> keys = {
      "sps.p_resel",      "sps.th_sps_dbm",      "sps.t2",          "sps.harq",
      "scenario.offset_mode", "scenario.preset", "scenario.density", "scenario.speed_kmh",
      "scenario.packet_bytes",
  };
  return keys;
}

std::string canonical_sweep_key(std::string_view key) {
  for (const Alias& a : kAliases) {
    if (a.alias == key) return std::string(a.key);
  }
  const auto& keys = sweepable_keys();
  if (std::find(keys.begin(), keys.end(), key) != keys.end()) return std::string(key);
  std::string list;
  for (std::string_view k : keys) list += (list.empty() ? "" : ", ") + std::string(k);
  throw ConfigError("'" + std::string(key) + "' is not sweepable; sweepable keys: " + list);
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("sweep must look like KEY=V1,V2,...");
  }
  SweepAxis axis;
  axis.key = canonical_sweep_key(text.substr(0, eq));
  std::string_view rest = text.substr(eq + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view v = rest.substr(0, comma);
    if (v.empty()) throw ConfigError("empty sweep value");
    axis.values.emplace_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return axis;
}

std::vector<SweepRun> expand_sweep(const RunConfig& base, const std::optional<SweepAxis>& axis,
                                   int seeds) {
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  std::vector<std::string> values = axis ? axis->values : std::vector<std::string>{""};
  std::vector<SweepRun> out;
  for (const std::string& v : values) {
    RunConfig cfg = base;
    if (axis) set_config_value(cfg, axis->key, v);
    for (int s = 0; s < seeds; ++s) {
      RunConfig c = cfg;
      c.run.seed = base.run.seed + static_cast<std::uint64_t>(s);
      c.validate(false);
      out.push_back(SweepRun{v, c.run.seed, std::move(c)});
    }
  }
  return out;
}

std::string run_directory_name(const SweepRun& run) {
  std::string name;
  if (!run.value.empty()) {
    for (char c : run.value) {
      name += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    }
    name += '_';
  }
  return name + "seed" + std::to_string(run.seed);
}

std::vector<RunResult> run_sweep(const RunConfig& base, const std::optional<SweepAxis>& axis,
                                 int seeds, const std::filesystem::path& out_dir,
                                 const std::function<void(const SweepRun&)>& on_start) {
  const std::vector<SweepRun> runs = expand_sweep(base, axis, seeds);
  std::vector<RunResult> results;
  results.reserve(runs.size());
  for (const SweepRun& r : runs) {
    if (on_start) on_start(r);
    results.push_back(run(r.config));
    write_artifacts(results.back(), out_dir / run_directory_name(r));
  }

  const std::string axis_name = axis ? axis->key : "none";
  std::filesystem::create_directories(out_dir);
  std::ofstream per(out_dir / "per_curve_long.csv", std::ios::binary);
  std::ofstream ipg(out_dir / "ipg_hist_long.csv", std::ios::binary);
  std::ofstream sum(out_dir / "summary_long.csv", std::ios::binary);
  if (!per || !ipg || !sum) throw Error("cannot write combined CSVs in " + out_dir.string());
  per << std::setprecision(12);
  ipg << std::setprecision(12);
  sum << std::setprecision(12);
  per << "axis,value,seed,bin_low_m,bin_high_m,attempts,failures,per,hd_missed\n";
  ipg << "axis,value,seed,bin_low_ms,bin_high_ms,freq,count\n";
  sum << "axis,value,seed,metric,metric_value\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string prefix =
        axis_name + ',' + quote(runs[i].value) + ',' + std::to_string(runs[i].seed) + ',';
    for (const PerBin& b : results[i].metrics.per_curve()) {
      per << prefix << b.low_m << ',' << b.high_m << ',' << b.attempts << ',' << b.failures << ',';
      if (const auto p = b.per()) per << *p;
      per << ',' << b.half_duplex_missed << '\n';
    }
    for (const IpgBin& b : results[i].metrics.ipg_histogram()) {
      ipg << prefix << b.low_ms << ',';
      if (b.high_ms < 0) {
        ipg << "inf";
      } else {
        ipg << b.high_ms;
      }
      ipg << ',' << b.freq << ',' << b.count << '\n';
    }
    std::istringstream lines(summary_text(results[i]));
    for (std::string line; std::getline(lines, line);) {
      const auto eq = line.find('=');
      sum << prefix << line.substr(0, eq) << ',' << line.substr(eq + 1) << '\n';
    }
  }
  return results;
}

}  // namespace spssim
