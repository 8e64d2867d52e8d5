#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "spssim/rng.hpp"

namespace spssim {

/// Exponent used for the near-field "linear" bin: free-space propagation.
inline constexpr double kNearFieldAlpha = 2.0;

/// One distance bin of the measured channel fit. A bin covers
/// (previous d_max, d_max]; the last bin extends to infinity.
struct PathLossBin {
  double d_max_m = std::numeric_limits<double>::infinity();
  std::optional<double> alpha;  // nullopt: near-field linear bin
  std::optional<double> nakagami_m;  // nullopt: Weibull fading
};

struct PathLossTable {
  std::vector<PathLossBin> bins;
  double weibull_k = 1.4;

  /// The Fowlerville highway fit.
  static PathLossTable fowlerville();

  /// Throws ConfigError when bins are unordered, not closed at infinity,
  /// exponents decrease, or Nakagami bins do not form a near-range prefix.
  void validate() const;

  const PathLossBin& bin_for(double d_m) const;
  std::size_t bin_index(double d_m) const;

  bool operator==(const PathLossTable&) const = default;
};

struct TwoRayParams {
  double wavelength_m = kSpeedOfLight / 5.86e9;
  std::complex<double> gamma{-1.0, 0.0};
  double antenna_height_m = 1.5;

  static TwoRayParams from_carrier(double carrier_hz, double antenna_height_m,
                                   std::complex<double> gamma = {-1.0, 0.0});
};

double alpha_for_distance(double d_m, const PathLossTable& table);

/// Phase difference between the ground-reflected and direct rays for equal
/// antenna heights at horizontal separation d.
double two_ray_phase(double d_m, const TwoRayParams& params);

/// 10 alpha log10(4 pi d / lambda * |1 + Gamma e^{i phi}|^-1), in dB.
double large_scale_loss_db(double d_m, double alpha, const TwoRayParams& params);
double large_scale_loss_db(double d_m, const TwoRayParams& params, const PathLossTable& table);

/// Unit-mean fading law of one distance bin.
struct FadingLaw {
  enum class Kind { Nakagami, Weibull } kind = Kind::Nakagami;
  double shape = 1.0;

  double mean() const { return 1.0; }
  double variance() const;
  double draw(RandomStream& rng) const;
};

/// FadingLaw with its distribution parameters precomputed. Draws are
/// identical to FadingLaw::draw on the same stream.
class FadingSampler {
 public:
  FadingSampler() = default;
  explicit FadingSampler(const FadingLaw& law);
  double operator()(RandomStream& rng) const;
  const FadingLaw& law() const { return law_; }

 private:
  FadingLaw law_;
  double scale_ = 1.0;
};

FadingLaw fading_law_for_distance(double d_m, const PathLossTable& table);

/// Unit-mean small-scale power gain: Nakagami-m (Gamma(m, 1/m) in power)
/// inside the Nakagami bins, Weibull with shape k scaled to unit mean beyond.
double small_scale_gain(double d_m, const PathLossTable& table, RandomStream& rng);

/// Large-scale loss minus the fading gain in dB. One call is one draw.
double link_loss_db(double d_m, const TwoRayParams& params, const PathLossTable& table,
                    RandomStream& rng);

}  // namespace spssim
