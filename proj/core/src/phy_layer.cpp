#include "spssim/phy_layer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spssim/assets.hpp"
#include "spssim/errors.hpp"

namespace spssim {

std::string_view to_string(SciModel model) {
  return model == SciModel::Threshold ? "threshold" : "always";
}

SciModel sci_model_from_string(std::string_view text) {
  if (text == "threshold") return SciModel::Threshold;
  if (text == "always") return SciModel::Always;
  throw ConfigError("unknown sci_model '" + std::string(text) + "' (threshold|always)");
}

void RadioConfig::validate() const {
  for (double v : {tx_power_dbm, antenna_gain_dbi, noise_figure_db, thermal_noise_dbm_per_hz,
                   rb_bandwidth_hz, sci_sensitivity_dbm, sci_sinr_threshold_db}) {
    if (!std::isfinite(v)) throw ConfigError("radio: all values must be finite");
  }
  // UE power class 3 upper bound for the ITS band.
  if (tx_power_dbm > 33.0) throw ConfigError("radio.tx_power_dbm exceeds 33 dBm");
  if (rx_antennas < 1) throw ConfigError("radio.rx_antennas must be >= 1");
  if (!(rb_bandwidth_hz > 0.0)) throw ConfigError("radio.rb_bandwidth_hz must be positive");
}

double received_power_dbm(const RadioConfig& radio, double loss_db) {
  return radio.tx_power_dbm + 2.0 * radio.antenna_gain_dbi - loss_db;
}

double noise_floor_dbm(int n_rb, const RadioConfig& radio) {
  if (n_rb < 1) throw DomainError("noise floor needs at least one RB");
  return radio.thermal_noise_dbm_per_hz + 10.0 * std::log10(n_rb * radio.rb_bandwidth_hz) +
         radio.noise_figure_db;
}

double sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm) {
  double denominator = dbm_to_mw(noise_dbm);
  for (double i : interferers_dbm) denominator += dbm_to_mw(i);
  return linear_to_db(dbm_to_mw(signal_dbm) / denominator);
}

BlerCurve BlerCurve::from_points(std::vector<Point> points) {
  if (points.size() < 2) throw ConfigError("BLER curve needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!std::isfinite(p.sinr_db) || !(p.bler >= 0.0 && p.bler <= 1.0))
      throw ConfigError("BLER curve: point " + std::to_string(i) + " out of range");
    if (i > 0) {
      if (!(p.sinr_db > points[i - 1].sinr_db))
        throw ConfigError("BLER curve: SINR must be strictly increasing");
      if (p.bler > points[i - 1].bler)
        throw ConfigError("BLER curve: BLER must be non-increasing");
    }
  }
  BlerCurve curve;
  curve.points_ = std::move(points);
  return curve;
}

BlerCurve BlerCurve::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string provenance;
  std::vector<Point> points;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (provenance.empty()) provenance = line.substr(line.find_first_not_of("# \t", first));
      continue;
    }
    std::istringstream row(line);
    Point p{};
    std::string trailing;
    if (!(row >> p.sinr_db >> p.bler) || (row >> trailing))
      throw ConfigError("BLER curve: malformed line " + std::to_string(line_no));
    points.push_back(p);
  }
  if (provenance.empty()) throw ConfigError("BLER curve: missing provenance header line");
  auto curve = from_points(std::move(points));
  curve.provenance_ = std::move(provenance);
  return curve;
}

const BlerCurve& BlerCurve::builtin() {
  static const BlerCurve curve = parse(assets::bler_default_text());
  return curve;
}

double BlerCurve::bler(double sinr_db) const {
  if (sinr_db <= points_.front().sinr_db) return sinr_db < points_.front().sinr_db ? 1.0 : points_.front().bler;
  if (sinr_db >= points_.back().sinr_db) return sinr_db > points_.back().sinr_db ? 0.0 : points_.back().bler;
  const auto upper = std::upper_bound(points_.begin(), points_.end(), sinr_db,
                                      [](double s, const Point& p) { return s < p.sinr_db; });
  const auto& hi = *upper;
  const auto& lo = *(upper - 1);
  const double frac = (sinr_db - lo.sinr_db) / (hi.sinr_db - lo.sinr_db);
  if (lo.bler <= 0.0 || hi.bler <= 0.0) return lo.bler + frac * (hi.bler - lo.bler);
  const double log_lo = std::log(lo.bler);
  const double log_hi = std::log(hi.bler);
  return std::exp(log_lo + frac * (log_hi - log_lo));
}

DecodeOutcome decode_with_draw(double sinr_db, const BlerCurve& curve, double u) {
  return curve.bler(sinr_db) > u ? DecodeOutcome::Lost : DecodeOutcome::Decoded;
}

DecodeOutcome decode(double sinr_db, const BlerCurve& curve, RandomStream& rng) {
  return decode_with_draw(sinr_db, curve, uniform01(rng));
}

GateState half_duplex_gate(UeId ue, std::span<const Transmission> placements) {
  const bool transmitting = std::any_of(placements.begin(), placements.end(),
                                        [ue](const Transmission& t) { return t.tx == ue; });
  return transmitting ? GateState::Transmitting : GateState::MayReceive;
}

double power_share(const RbSpan& occupied, int total_rbs, const RbSpan& measured) {
  return static_cast<double>(occupied.overlap(measured)) / static_cast<double>(total_rbs);
}

double rsrp_dbm(double tb_power_dbm, int n_pssch_rb) {
  return tb_power_dbm - 10.0 * std::log10(static_cast<double>(kSubcarriersPerRb * n_pssch_rb));
}

}  // namespace spssim
