#include "spssim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "spssim/errors.hpp"

namespace spssim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError(std::string(key) + ": expected " + std::string(want) + ", got '" +
                    std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "a number");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true or false");
}

struct Field {
  std::string_view key;  // section.key
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

#define SPSSIM_DOUBLE(name, member)                                               \
  Field {                                                                         \
    name, [](const RunConfig& c) { return format_double(c.member); },             \
        [](RunConfig& c, std::string_view v) { c.member = to_double(name, v); } \
  }
#define SPSSIM_INT(name, member)                                                     \
  Field {                                                                            \
    name, [](const RunConfig& c) { return std::to_string(c.member); },               \
        [](RunConfig& c, std::string_view v) {                                       \
          c.member = to_int<std::remove_cvref_t<decltype(c.member)>>(name, v);       \
        }                                                                            \
  }
#define SPSSIM_BOOL(name, member)                                                \
  Field {                                                                        \
    name, [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }, \
        [](RunConfig& c, std::string_view v) { c.member = to_bool(name, v); }    \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      SPSSIM_INT("grid.bandwidth_rbs", grid.bandwidth_rbs),
      SPSSIM_INT("grid.subchannel_size", grid.subchannel_size),
      SPSSIM_INT("grid.l_subch", grid.l_subch),
      SPSSIM_INT("grid.mcs_index", grid.mcs_index),
      Field{"grid.pscch_scheme",
            [](const RunConfig& c) { return std::string(to_string(c.grid.pscch_scheme)); },
            [](RunConfig& c, std::string_view v) {
              c.grid.pscch_scheme = pscch_scheme_from_string(v);
            }},
      SPSSIM_INT("grid.n_pssch_rb", grid.n_pssch_rb),

      SPSSIM_DOUBLE("radio.tx_power_dbm", radio.tx_power_dbm),
      SPSSIM_DOUBLE("radio.antenna_gain_dbi", radio.antenna_gain_dbi),
      SPSSIM_DOUBLE("radio.noise_figure_db", radio.noise_figure_db),
      SPSSIM_INT("radio.rx_antennas", radio.rx_antennas),
      SPSSIM_DOUBLE("radio.thermal_noise_dbm_per_hz", radio.thermal_noise_dbm_per_hz),
      SPSSIM_DOUBLE("radio.rb_bandwidth_hz", radio.rb_bandwidth_hz),
      SPSSIM_DOUBLE("radio.sci_sensitivity_dbm", radio.sci_sensitivity_dbm),
      SPSSIM_DOUBLE("radio.sci_sinr_threshold_db", radio.sci_sinr_threshold_db),
      Field{"radio.sci_model",
            [](const RunConfig& c) { return std::string(to_string(c.radio.sci_model)); },
            [](RunConfig& c, std::string_view v) { c.radio.sci_model = sci_model_from_string(v); }},
      Field{"radio.bler_curve", [](const RunConfig& c) { return c.run.bler_curve; },
            [](RunConfig& c, std::string_view v) { c.run.bler_curve = std::string(v); }},

      SPSSIM_INT("sps.t1", sps.t1),
      SPSSIM_INT("sps.t2", sps.t2),
      SPSSIM_INT("sps.p_rsvp", sps.p_rsvp),
      SPSSIM_INT("sps.p_step", sps.p_step),
      SPSSIM_DOUBLE("sps.th_sps_dbm", sps.th_sps_dbm),
      SPSSIM_DOUBLE("sps.p_resel", sps.p_resel),
      SPSSIM_BOOL("sps.harq", sps.harq_enabled),
      SPSSIM_INT("sps.max_missed", sps.max_missed_opportunities),
      Field{"sps.tie_break",
            [](const RunConfig& c) { return std::string(to_string(c.sps.tie_break)); },
            [](RunConfig& c, std::string_view v) { c.sps.tie_break = tie_break_from_string(v); }},

      SPSSIM_DOUBLE("channel.carrier_mhz", channel.carrier_mhz),
      SPSSIM_DOUBLE("channel.antenna_height_m", channel.antenna_height_m),
      SPSSIM_DOUBLE("channel.reflection_coefficient", channel.reflection_coefficient),
      SPSSIM_BOOL("channel.fading", channel.fading),
      SPSSIM_DOUBLE("channel.weibull_k", channel.weibull_k),

      Field{"scenario.preset", nullptr,
            [](RunConfig& c, std::string_view v) { apply_preset(c.scenario, v); }},
      SPSSIM_INT("scenario.lanes", scenario.lanes),
      SPSSIM_DOUBLE("scenario.lane_spacing_m", scenario.lane_spacing_m),
      SPSSIM_DOUBLE("scenario.road_length_m", scenario.road_length_m),
      SPSSIM_DOUBLE("scenario.density", scenario.density),
      SPSSIM_DOUBLE("scenario.speed_kmh", scenario.speed_kmh),
      SPSSIM_INT("scenario.t_gen_ms", scenario.t_gen_ms),
      SPSSIM_INT("scenario.packet_bytes", scenario.packet_bytes),
      SPSSIM_DOUBLE("scenario.sim_time_s", scenario.sim_time_s),
      Field{"scenario.offset_mode",
            [](const RunConfig& c) { return to_string(c.scenario.offset_mode); },
            [](RunConfig& c, std::string_view v) {
              c.scenario.offset_mode = offset_mode_from_string(v);
            }},
      Field{"scenario.edge_mode",
            [](const RunConfig& c) { return std::string(to_string(c.scenario.edge_mode)); },
            [](RunConfig& c, std::string_view v) {
              c.scenario.edge_mode = edge_mode_from_string(v);
            }},
      SPSSIM_DOUBLE("scenario.measurement_window_m", scenario.measurement_window_m),

      SPSSIM_DOUBLE("metrics.bin_width_m", metrics.bin_width_m),
      SPSSIM_DOUBLE("metrics.max_range_m", metrics.max_range_m),
      SPSSIM_INT("metrics.ipg_bin_ms", metrics.ipg_bin_ms),
      SPSSIM_INT("metrics.ipg_cap_ms", metrics.ipg_cap_ms),

      SPSSIM_INT("run.seed", run.seed),
      SPSSIM_BOOL("run.trace", run.trace),
  };
  return table;
}

#undef SPSSIM_DOUBLE
#undef SPSSIM_INT
#undef SPSSIM_BOOL

const Field& find_field(std::string_view dotted_key) {
  const auto& table = fields();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const Field& f) { return f.key == dotted_key; });
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(dotted_key) + "'");
  return *it;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, end);
}

void ChannelConfig::validate() const {
  if (!(carrier_mhz > 0.0)) throw ConfigError("channel.carrier_mhz must be > 0");
  if (!(antenna_height_m > 0.0)) throw ConfigError("channel.antenna_height_m must be > 0");
  if (!(reflection_coefficient >= -1.0 && reflection_coefficient <= 1.0)) {
    throw ConfigError("channel.reflection_coefficient must be in [-1, 1]");
  }
  if (!(weibull_k > 0.0)) throw ConfigError("channel.weibull_k must be > 0");
}

std::vector<std::string> RunConfig::validate(bool strict) const {
  grid.validate(strict);
  radio.validate();
  std::vector<std::string> warnings = sps.validate();
  channel.validate();
  scenario.validate();
  metrics.validate();
  const int capacity = tb_size(grid.mcs_index, grid.n_pssch_rb);
  if (capacity < scenario.packet_bytes * 8) {
    throw ConfigError("grid.n_pssch_rb=" + std::to_string(grid.n_pssch_rb) + " carries " +
                      std::to_string(capacity) + " bits at grid.mcs_index=" +
                      std::to_string(grid.mcs_index) + ", below scenario.packet_bytes=" +
                      std::to_string(scenario.packet_bytes));
  }
  return warnings;
}

void set_config_value(RunConfig& cfg, std::string_view dotted_key, std::string_view value) {
  find_field(dotted_key).set(cfg, trim(value));
}

ParsedConfig parse_config(std::string_view text, bool strict) {
  ParsedConfig out;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string, std::less<>> known = {"grid",     "radio",   "sps",
                                                               "channel",  "scenario", "metrics",
                                                               "run"};
      if (!known.contains(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      set_config_value(out.config, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  out.warnings = out.config.validate(strict);
  return out;
}

ParsedConfig load_config(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), strict);
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const Field& f : fields()) {
    if (!f.get) continue;
    const auto dot = f.key.find('.');
    const std::string s(f.key.substr(0, dot));
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << f.key.substr(dot + 1) << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace spssim
