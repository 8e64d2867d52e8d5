#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spssim/channel_model.hpp"
#include "spssim/errors.hpp"
#include "spssim/rng.hpp"

namespace {

using namespace spssim;

const TwoRayParams kParams = TwoRayParams::from_carrier(5.86e9, 1.5);

// Golden values from an independent 40-digit evaluation of
// 10 a log10(4 pi d / lambda / |1 - exp(i phi)|).
TEST(TwoRayLoss, MatchesHighPrecisionReference) {
  const PathLossTable t = PathLossTable::fowlerville();
  EXPECT_NEAR(large_scale_loss_db(100.0, kParams, t), 80.025889916552609, 1e-9);
  EXPECT_NEAR(large_scale_loss_db(300.0, kParams, t), 86.308396689251007, 1e-9);
  EXPECT_NEAR(large_scale_loss_db(5.0, kParams, t), 58.984477225897847, 1e-9);
  EXPECT_NEAR(large_scale_loss_db(1000.0, kParams, t), 107.41383723200542, 1e-9);
  EXPECT_NEAR(large_scale_loss_db(50.0, kParams, t), 69.904645934642914, 1e-9);
  EXPECT_NEAR(large_scale_loss_db(500.0, kParams, t), 95.280274321002555, 1e-9);
}

TEST(TwoRayLoss, ZeroReflectionIsLogDistance) {
  const TwoRayParams p = TwoRayParams::from_carrier(5.86e9, 1.5, {0.0, 0.0});
  EXPECT_NEAR(large_scale_loss_db(100.0, 1.77, p), 77.70807595488699, 1e-9);
  for (double d : {1.0, 9.0, 77.0, 250.0, 999.0}) {
    for (double a : {1.71, 2.0, 1.9}) {
      const double expected = 10.0 * a * std::log10(4.0 * std::numbers::pi * d / p.wavelength_m);
      EXPECT_DOUBLE_EQ(large_scale_loss_db(d, a, p), expected) << d << ' ' << a;
    }
  }
}

TEST(TwoRayLoss, NonPositiveDistanceThrows) {
  EXPECT_THROW(large_scale_loss_db(0.0, 2.0, kParams), DomainError);
  EXPECT_THROW(large_scale_loss_db(-1.0, 2.0, kParams), DomainError);
}

TEST(TwoRayLoss, ExactNullStaysFinite) {
  // phi = 2 pi where sqrt(d^2 + 9) - d = lambda.
  const double lam = kParams.wavelength_m;
  const double d = (9.0 - lam * lam) / (2.0 * lam);
  const double loss = large_scale_loss_db(d, 1.77, kParams);
  EXPECT_TRUE(std::isfinite(loss));
  EXPECT_GT(loss, 150.0);
}

TEST(AlphaBins, BoundariesBelongToTheLowerBin) {
  const PathLossTable t = PathLossTable::fowlerville();
  EXPECT_EQ(alpha_for_distance(1.0, t), 2.0);
  EXPECT_EQ(alpha_for_distance(8.0, t), 2.0);
  EXPECT_EQ(alpha_for_distance(8.0001, t), 1.71);
  EXPECT_EQ(alpha_for_distance(45.0, t), 1.71);
  EXPECT_EQ(alpha_for_distance(45.0001, t), 1.77);
  EXPECT_EQ(alpha_for_distance(111.0, t), 1.77);
  EXPECT_EQ(alpha_for_distance(111.5, t), 1.85);
  EXPECT_EQ(alpha_for_distance(400.0, t), 1.85);
  EXPECT_EQ(alpha_for_distance(400.5, t), 1.88);
  EXPECT_EQ(alpha_for_distance(639.0, t), 1.88);
  EXPECT_EQ(alpha_for_distance(639.5, t), 1.90);
  EXPECT_EQ(alpha_for_distance(5000.0, t), 1.90);
}

TEST(AlphaBins, FadingLawFollowsBins) {
  const PathLossTable t = PathLossTable::fowlerville();
  EXPECT_EQ(fading_law_for_distance(8.0, t).shape, 2.272);
  EXPECT_EQ(fading_law_for_distance(45.0, t).shape, 1.340);
  EXPECT_EQ(fading_law_for_distance(100.0, t).shape, 1.438);
  EXPECT_EQ(fading_law_for_distance(300.0, t).shape, 1.357);
  EXPECT_EQ(fading_law_for_distance(639.0, t).shape, 1.000);
  EXPECT_EQ(fading_law_for_distance(639.0, t).kind, FadingLaw::Kind::Nakagami);
  EXPECT_EQ(fading_law_for_distance(640.0, t).kind, FadingLaw::Kind::Weibull);
  EXPECT_EQ(fading_law_for_distance(640.0, t).shape, 1.4);
}

TEST(AlphaBins, ValidateRejectsBrokenTables) {
  PathLossTable t = PathLossTable::fowlerville();
  EXPECT_NO_THROW(t.validate());
  t.bins[2].d_max_m = 10.0;
  EXPECT_THROW(t.validate(), ConfigError);
  t = PathLossTable::fowlerville();
  t.bins.back().d_max_m = 2000.0;
  EXPECT_THROW(t.validate(), ConfigError);
  t = PathLossTable::fowlerville();
  t.bins[3].alpha = 1.5;
  EXPECT_THROW(t.validate(), ConfigError);
}

TEST(Fading, UnitMeanPerBin) {
  const PathLossTable t = PathLossTable::fowlerville();
  RandomStream rng(7);
  for (double d : {5.0, 30.0, 100.0, 300.0, 500.0, 800.0}) {
    const FadingLaw law = fading_law_for_distance(d, t);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += law.draw(rng);
    const double tol = 5.0 * std::sqrt(law.variance() / n);
    EXPECT_NEAR(sum / n, 1.0, tol) << d;
  }
}

TEST(Fading, SamplerMatchesLawDraws) {
  for (const FadingLaw law : {FadingLaw{FadingLaw::Kind::Nakagami, 1.438},
                              FadingLaw{FadingLaw::Kind::Weibull, 1.4}}) {
    RandomStream a(3);
    RandomStream b(3);
    const FadingSampler s(law);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(law.draw(a), s(b));
  }
}

TEST(Fading, WeibullVarianceMatchesClosedForm) {
  const FadingLaw law{FadingLaw::Kind::Weibull, 1.4};
  const double g1 = std::tgamma(1.0 + 1.0 / 1.4);
  const double g2 = std::tgamma(1.0 + 2.0 / 1.4);
  EXPECT_NEAR(law.variance(), g2 / (g1 * g1) - 1.0, 1e-12);
  EXPECT_NEAR((FadingLaw{FadingLaw::Kind::Nakagami, 2.0}).variance(), 0.5, 1e-15);
}

TEST(LinkLoss, OneDrawPerCall) {
  const PathLossTable t = PathLossTable::fowlerville();
  RandomStream a(11);
  RandomStream b(11);
  const double loss = link_loss_db(300.0, kParams, t, a);
  const double gain = small_scale_gain(300.0, t, b);
  EXPECT_NEAR(loss, large_scale_loss_db(300.0, kParams, t) - 10.0 * std::log10(gain), 1e-12);
}

}  // namespace
