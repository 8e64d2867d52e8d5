#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "spssim/errors.hpp"
#include "spssim/phy_layer.hpp"

namespace {

using namespace spssim;

TEST(Radio, NoiseFloor) {
  const RadioConfig r;
  EXPECT_NEAR(noise_floor_dbm(20, r), -99.43697499232712, 1e-9);
  EXPECT_NEAR(noise_floor_dbm(1, r), -174.0 + 10.0 * std::log10(180e3) + 9.0, 1e-12);
  EXPECT_THROW(noise_floor_dbm(0, r), DomainError);
}

TEST(Radio, ReceivedPowerAddsBothAntennaGains) {
  const RadioConfig r;
  EXPECT_DOUBLE_EQ(received_power_dbm(r, 100.0), 23.0 + 6.0 - 100.0);
}

TEST(Radio, ValidateRejectsBadValues) {
  RadioConfig r;
  EXPECT_NO_THROW(r.validate());
  r.tx_power_dbm = 40.0;
  EXPECT_THROW(r.validate(), ConfigError);
  r = RadioConfig{};
  r.rx_antennas = 0;
  EXPECT_THROW(r.validate(), ConfigError);
  r = RadioConfig{};
  r.noise_figure_db = std::nan("");
  EXPECT_THROW(r.validate(), ConfigError);
}

TEST(Radio, SciModelNames) {
  EXPECT_EQ(sci_model_from_string("threshold"), SciModel::Threshold);
  EXPECT_EQ(sci_model_from_string("always"), SciModel::Always);
  EXPECT_EQ(to_string(SciModel::Always), "always");
  EXPECT_THROW(sci_model_from_string("sometimes"), ConfigError);
}

TEST(Sinr, LinearSumOfInterferenceAndNoise) {
  EXPECT_NEAR(sinr_db(-90.0, {}, -100.0), 10.0, 1e-12);
  const std::vector<double> one{-100.0};
  EXPECT_NEAR(sinr_db(-90.0, one, -100.0), 10.0 - 10.0 * std::log10(2.0), 1e-12);
  const std::vector<double> two{-90.0, -90.0};
  EXPECT_NEAR(sinr_db(-90.0, two, -200.0), -10.0 * std::log10(2.0), 1e-9);
}

TEST(Bler, BuiltinCurveShape) {
  const BlerCurve& c = BlerCurve::builtin();
  EXPECT_FALSE(c.provenance().empty());
  EXPECT_EQ(c.bler(-50.0), 1.0);
  EXPECT_EQ(c.bler(50.0), 0.0);
  EXPECT_NEAR(c.bler(1.0), 0.5, 1e-6);
  double prev = 1.0;
  for (double s = -10.0; s <= 15.0; s += 0.05) {
    const double b = c.bler(s);
    EXPECT_LE(b, prev + 1e-15) << s;
    EXPECT_GE(b, 0.0);
    prev = b;
  }
}

TEST(Bler, LogLinearInterpolation) {
  const BlerCurve c = BlerCurve::from_points({{0.0, 1.0}, {2.0, 0.01}, {4.0, 0.0}});
  EXPECT_NEAR(c.bler(1.0), 0.1, 1e-12);
  EXPECT_NEAR(c.bler(3.0), 0.005, 1e-12);
  EXPECT_EQ(c.bler(-0.1), 1.0);
  EXPECT_EQ(c.bler(4.1), 0.0);
}

TEST(Bler, ParseRejectsMalformedCurves) {
  EXPECT_THROW(BlerCurve::parse("# p\n0 1\n"), ConfigError);
  EXPECT_THROW(BlerCurve::parse("# p\n0 1\n-1 0.5\n"), ConfigError);
  EXPECT_THROW(BlerCurve::parse("# p\n0 0.5\n1 0.6\n"), ConfigError);
  EXPECT_THROW(BlerCurve::parse("# p\n0 1.5\n1 0\n"), ConfigError);
  EXPECT_THROW(BlerCurve::parse("# p\n0 1 7\n1 0\n"), ConfigError);
  EXPECT_THROW(BlerCurve::parse("0 1\n1 0\n"), ConfigError);
  const BlerCurve ok = BlerCurve::parse("# source\n0 1\n1 0\n");
  EXPECT_EQ(ok.points().size(), 2u);
  EXPECT_EQ(ok.provenance(), "source");
}

TEST(Decode, ThresholdOnDraw) {
  const BlerCurve c = BlerCurve::from_points({{0.0, 1.0}, {2.0, 0.0}});
  EXPECT_EQ(decode_with_draw(1.0, c, 0.4), DecodeOutcome::Lost);
  EXPECT_EQ(decode_with_draw(1.0, c, 0.6), DecodeOutcome::Decoded);
  EXPECT_EQ(decode_with_draw(5.0, c, 0.0), DecodeOutcome::Decoded);
  EXPECT_EQ(decode_with_draw(-5.0, c, 0.999), DecodeOutcome::Lost);
}

TEST(Decode, EmpiricalRateMatchesCurve) {
  const BlerCurve& c = BlerCurve::builtin();
  RandomStream rng(5);
  const int n = 100000;
  int lost = 0;
  for (int i = 0; i < n; ++i) lost += decode(1.5, c, rng) == DecodeOutcome::Lost;
  const double p = c.bler(1.5);
  EXPECT_NEAR(static_cast<double>(lost) / n, p, 5.0 * std::sqrt(p * (1 - p) / n));
}

TEST(HalfDuplex, GateFollowsPlacements) {
  std::vector<Transmission> tx(2);
  tx[0].tx = 3;
  tx[1].tx = 5;
  tx[1].retransmission = true;
  EXPECT_EQ(half_duplex_gate(3, tx), GateState::Transmitting);
  EXPECT_EQ(half_duplex_gate(5, tx), GateState::Transmitting);
  EXPECT_EQ(half_duplex_gate(4, tx), GateState::MayReceive);
  EXPECT_EQ(half_duplex_gate(4, {}), GateState::MayReceive);
}

TEST(PowerShare, OverlapOverTotal) {
  EXPECT_DOUBLE_EQ(power_share({2, 18}, 20, {0, 10}), 8.0 / 20.0);
  EXPECT_DOUBLE_EQ(power_share({2, 18}, 20, {10, 10}), 10.0 / 20.0);
  EXPECT_DOUBLE_EQ(power_share({2, 18}, 20, {20, 10}), 0.0);
}

TEST(Rsrp, PerResourceElement) {
  EXPECT_NEAR(rsrp_dbm(-70.0, 18), -70.0 - 10.0 * std::log10(216.0), 1e-12);
}

}  // namespace
