#include <gtest/gtest.h>

#include "spssim/errors.hpp"
#include "spssim/resource_grid.hpp"

namespace {

using namespace spssim;

TEST(Numerology, TenMegahertzWithSizeTenGivesFiveSubchannels) {
  EXPECT_EQ(subchannel_count(50, 10), 5);
  EXPECT_EQ(GridConfig{}.n_subch(), 5);
}

TEST(Numerology, SubchannelCountFloors) {
  EXPECT_EQ(subchannel_count(50, 12), 4);
  EXPECT_EQ(subchannel_count(100, 10), 10);
  EXPECT_THROW(subchannel_count(50, 0), ConfigError);
}

TEST(Numerology, CsrsPerSubframe) {
  EXPECT_EQ(csrs_per_subframe(5, 2), 2);
  EXPECT_EQ(csrs_per_subframe(5, 5), 1);
  EXPECT_EQ(csrs_per_subframe(4, 1), 4);
  EXPECT_EQ(GridConfig{}.csrs_per_subframe(), 2);
}

TEST(Numerology, CsrStartsAreMultiplesOfLength) {
  GridConfig g;
  EXPECT_EQ(csr_starts(g), (std::vector<int>{0, 2}));
  g.l_subch = 1;
  g.n_pssch_rb = 8;
  EXPECT_EQ(csr_starts(g), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Tbs, SpotValuesFromTheStandardTable) {
  const TbsTable& t = TbsTable::standard();
  EXPECT_EQ(t.rows(), 27);
  EXPECT_EQ(t.max_prb(), 110);
  // I_TBS 0, N_PRB 1..10
  const int row0[] = {16, 32, 56, 88, 120, 152, 176, 208, 224, 256};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.lookup(0, n), row0[n - 1]) << n;
  // I_TBS 5, N_PRB 1..10
  const int row5[] = {72, 144, 224, 328, 424, 504, 600, 680, 776, 872};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.lookup(5, n), row5[n - 1]) << n;
  // I_TBS 8, N_PRB 1..10
  const int row8[] = {120, 256, 392, 536, 680, 808, 968, 1096, 1256, 1384};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.lookup(8, n), row8[n - 1]) << n;
  EXPECT_EQ(t.lookup(26, 1), 712);
  EXPECT_EQ(t.lookup(26, 110), 75376);
}

TEST(Tbs, LookupOutsideTableThrows) {
  const TbsTable& t = TbsTable::standard();
  EXPECT_THROW(t.lookup(27, 1), LookupError);
  EXPECT_THROW(t.lookup(0, 0), LookupError);
  EXPECT_THROW(t.lookup(0, 111), LookupError);
  EXPECT_THROW(tb_size(21, 10), LookupError);
}

TEST(Tbs, ParseRejectsRaggedRows) {
  EXPECT_THROW(TbsTable::parse("# format: tbs-table v1\n1 2 3\n4 5\n"), ConfigError);
}

TEST(Tbs, MonotoneInPrbForEveryIndex) {
  const TbsTable& t = TbsTable::standard();
  for (int i = 0; i < t.rows(); ++i) {
    for (int n = 2; n <= t.max_prb(); ++n) EXPECT_GE(t.lookup(i, n), t.lookup(i, n - 1));
  }
}

TEST(Mcs, ModulationAndTbsIndex) {
  EXPECT_EQ(mcs_entry(0).q, 2);
  EXPECT_EQ(mcs_entry(5).tbs_index, 5);
  EXPECT_EQ(mcs_entry(10).q, 2);
  EXPECT_EQ(mcs_entry(10).tbs_index, 10);
  EXPECT_EQ(mcs_entry(11).q, 4);
  EXPECT_EQ(mcs_entry(11).tbs_index, 10);
  EXPECT_EQ(mcs_entry(20).tbs_index, 19);
  EXPECT_THROW(mcs_entry(21), LookupError);
  EXPECT_THROW(mcs_entry(-1), LookupError);
}

TEST(Capacity, BeaconAtMcsFiveNeedsEighteenDataRbs) {
  // 190 B = 1520 bits; the data RBs plus the two SCI RBs fill two 10-RB sub-channels.
  EXPECT_EQ(min_rbs_for_payload(5, 1520), 18);
  EXPECT_EQ(min_rbs_for_payload(5, 1520) + kSciRbs, 20);
  EXPECT_GE(tb_size(5, 18), 1520);
  EXPECT_LT(tb_size(5, 17), 1520);
  EXPECT_EQ(transmission_rbs(GridConfig{}), 20);
}

TEST(Capacity, OversizedPayloadThrows) {
  EXPECT_THROW(min_rbs_for_payload(0, 100000), CapacityError);
}

TEST(CodeRate, MatchesDirectFormula) {
  EXPECT_DOUBLE_EQ(effective_code_rate(1544, 2, 18), 1544.0 / (2.0 * 9 * 12 * 18));
  EXPECT_THROW(effective_code_rate(0, 2, 1), DomainError);
}

TEST(RbLayout, AdjacentSciSitsInFrontOfData) {
  GridConfig g;
  EXPECT_EQ(sci_rbs(g, 0).first, 0);
  EXPECT_EQ(sci_rbs(g, 0).count, 2);
  EXPECT_EQ(tb_rbs(g, 0).first, 2);
  EXPECT_EQ(tb_rbs(g, 0).count, 18);
  EXPECT_EQ(tb_rbs(g, 2).first, 22);
  EXPECT_EQ(tb_rbs(g, 0).overlap(tb_rbs(g, 2)), 0);
}

TEST(RbLayout, NonAdjacentSciUsesSeparatePool) {
  GridConfig g;
  g.pscch_scheme = PscchScheme::NonAdjacent;
  g.n_pssch_rb = 20;
  EXPECT_EQ(tb_rbs(g, 0).first, 0);
  EXPECT_GE(sci_rbs(g, 0).first, g.bandwidth_rbs);
  EXPECT_EQ(sci_rbs(g, 0).overlap(tb_rbs(g, 0)), 0);
  EXPECT_EQ(sci_rbs(g, 0).overlap(sci_rbs(g, 2)), 0);
}

TEST(GridValidate, AdjacentLayoutMustFit) {
  GridConfig g;
  g.n_pssch_rb = 19;
  EXPECT_THROW(g.validate(false), ConfigError);
  g.n_pssch_rb = 18;
  EXPECT_NO_THROW(g.validate(false));
}

TEST(GridValidate, StrictRejectsUnsignalableSizes) {
  GridConfig g;
  g.subchannel_size = 7;
  g.l_subch = 3;
  g.n_pssch_rb = 18;
  EXPECT_NO_THROW(g.validate(false));
  EXPECT_THROW(g.validate(true), ConfigError);
}

TEST(CsrOrder, OverlapAndOrdering) {
  const Csr a{10, 0, 2};
  const Csr b{10, 1, 2};
  const Csr c{10, 2, 2};
  EXPECT_TRUE(a.overlaps(b));
  EXPECT_FALSE(a.overlaps(c));
  EXPECT_LT(a, c);
  EXPECT_LT(c, (Csr{11, 0, 2}));
}

}  // namespace
