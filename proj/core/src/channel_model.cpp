#include "spssim/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "spssim/errors.hpp"

namespace spssim {

namespace {

// Floor on |1 + Gamma e^{i phi}| so an exact two-ray null stays finite.
constexpr double kMinTwoRayMagnitude = 1e-12;

}  // namespace

PathLossTable PathLossTable::fowlerville() {
  PathLossTable table;
  table.bins = {
      {8.0, std::nullopt, 2.272},
      {45.0, 1.71, 1.340},
      {111.0, 1.77, 1.438},
      {400.0, 1.85, 1.357},
      {639.0, 1.88, 1.000},
      {std::numeric_limits<double>::infinity(), 1.90, std::nullopt},
  };
  table.weibull_k = 1.4;
  return table;
}

void PathLossTable::validate() const {
  if (bins.empty()) throw ConfigError("channel: path-loss table has no bins");
  if (!std::isinf(bins.back().d_max_m))
    throw ConfigError("channel: last path-loss bin must extend to infinity");
  if (!(weibull_k > 0.0)) throw ConfigError("channel.weibull_k must be positive");
  double prev_edge = 0.0;
  double prev_alpha = 0.0;
  bool weibull_seen = false;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& bin = bins[i];
    if (!(bin.d_max_m > prev_edge))
      throw ConfigError("channel: bin edges must be strictly increasing");
    prev_edge = bin.d_max_m;
    if (bin.alpha) {
      if (!(*bin.alpha > 0.0)) throw ConfigError("channel: alpha must be positive");
      if (*bin.alpha < prev_alpha)
        throw ConfigError("channel: alpha must be non-decreasing with distance");
      prev_alpha = *bin.alpha;
    } else if (i != 0) {
      throw ConfigError("channel: only the first bin may use the linear near-field rule");
    }
    if (bin.nakagami_m) {
      if (weibull_seen)
        throw ConfigError("channel: Nakagami bins must precede the Weibull range");
      if (!(*bin.nakagami_m >= 0.5)) throw ConfigError("channel: Nakagami m must be >= 0.5");
    } else {
      weibull_seen = true;
    }
  }
}

std::size_t PathLossTable::bin_index(double d_m) const {
  for (std::size_t i = 0; i < bins.size(); ++i)
    if (d_m <= bins[i].d_max_m) return i;
  return bins.size() - 1;
}

const PathLossBin& PathLossTable::bin_for(double d_m) const { return bins[bin_index(d_m)]; }

TwoRayParams TwoRayParams::from_carrier(double carrier_hz, double antenna_height_m,
                                        std::complex<double> gamma) {
  if (!(carrier_hz > 0.0)) throw ConfigError("channel.carrier_mhz must be positive");
  if (std::abs(gamma) > 1.0) throw ConfigError("channel: |gamma| must not exceed 1");
  return {kSpeedOfLight / carrier_hz, gamma, antenna_height_m};
}

double alpha_for_distance(double d_m, const PathLossTable& table) {
  if (!(d_m > 0.0)) throw DomainError("distance must be positive");
  return table.bin_for(d_m).alpha.value_or(kNearFieldAlpha);
}

double two_ray_phase(double d_m, const TwoRayParams& params) {
  const double two_h = 2.0 * params.antenna_height_m;
  const double reflected = std::sqrt(d_m * d_m + two_h * two_h);
  return 2.0 * std::numbers::pi * (reflected - d_m) / params.wavelength_m;
}

double large_scale_loss_db(double d_m, double alpha, const TwoRayParams& params) {
  if (!(d_m > 0.0)) throw DomainError("distance must be positive");
  const std::complex<double> ray_sum =
      1.0 + params.gamma * std::polar(1.0, two_ray_phase(d_m, params));
  const double magnitude = std::max(std::abs(ray_sum), kMinTwoRayMagnitude);
  const double free_space = 4.0 * std::numbers::pi * d_m / params.wavelength_m;
  return 10.0 * alpha * std::log10(free_space / magnitude);
}

double large_scale_loss_db(double d_m, const TwoRayParams& params, const PathLossTable& table) {
  return large_scale_loss_db(d_m, alpha_for_distance(d_m, table), params);
}

double FadingLaw::variance() const {
  if (kind == Kind::Nakagami) return 1.0 / shape;
  const double g1 = std::tgamma(1.0 + 1.0 / shape);
  const double g2 = std::tgamma(1.0 + 2.0 / shape);
  return g2 / (g1 * g1) - 1.0;
}

double FadingLaw::draw(RandomStream& rng) const { return FadingSampler(*this)(rng); }

FadingSampler::FadingSampler(const FadingLaw& law)
    : law_(law),
      scale_(law.kind == FadingLaw::Kind::Nakagami ? 1.0 / law.shape
                                                   : 1.0 / std::tgamma(1.0 + 1.0 / law.shape)) {}

double FadingSampler::operator()(RandomStream& rng) const {
  if (law_.kind == FadingLaw::Kind::Nakagami) {
    std::gamma_distribution<double> gamma(law_.shape, scale_);
    return gamma(rng);
  }
  std::weibull_distribution<double> weibull(law_.shape, scale_);
  return weibull(rng);
}

FadingLaw fading_law_for_distance(double d_m, const PathLossTable& table) {
  if (!(d_m > 0.0)) throw DomainError("distance must be positive");
  const auto& bin = table.bin_for(d_m);
  if (bin.nakagami_m) return {FadingLaw::Kind::Nakagami, *bin.nakagami_m};
  return {FadingLaw::Kind::Weibull, table.weibull_k};
}

double small_scale_gain(double d_m, const PathLossTable& table, RandomStream& rng) {
  return fading_law_for_distance(d_m, table).draw(rng);
}

double link_loss_db(double d_m, const TwoRayParams& params, const PathLossTable& table,
                    RandomStream& rng) {
  const double loss = large_scale_loss_db(d_m, params, table);
  return loss - 10.0 * std::log10(small_scale_gain(d_m, table, rng));
}

}  // namespace spssim
