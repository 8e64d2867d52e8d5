#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "spssim/errors.hpp"
#include "spssim/sweep.hpp"

namespace {

using namespace spssim;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Sweep, AliasesAndErrors) {
  EXPECT_EQ(canonical_sweep_key("p_resel"), "sps.p_resel");
  EXPECT_EQ(canonical_sweep_key("sps.p_resel"), "sps.p_resel");
  EXPECT_EQ(canonical_sweep_key("preset"), "scenario.preset");
  try {
    canonical_sweep_key("grid.mcs_index");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sps.p_resel"), std::string::npos);
  }
  EXPECT_THROW(parse_sweep_axis("p_resel"), ConfigError);
  EXPECT_THROW(parse_sweep_axis("p_resel=0,,1"), ConfigError);
  const SweepAxis a = parse_sweep_axis("p_resel=0,0.4,0.8");
  EXPECT_EQ(a.key, "sps.p_resel");
  EXPECT_EQ(a.values, (std::vector<std::string>{"0", "0.4", "0.8"}));
}

TEST(Sweep, ExpandsValuesTimesSeeds) {
  RunConfig base;
  base.run.seed = 10;
  const auto runs = expand_sweep(base, parse_sweep_axis("p_resel=0,0.4,0.8"), 5);
  ASSERT_EQ(runs.size(), 15u);
  EXPECT_EQ(runs[0].seed, 10u);
  EXPECT_EQ(runs[4].seed, 14u);
  EXPECT_EQ(runs[5].value, "0.4");
  EXPECT_EQ(runs[5].config.sps.p_resel, 0.4);
  EXPECT_EQ(runs[14].config.run.seed, 14u);
  std::set<std::string> names;
  for (const SweepRun& r : runs) names.insert(run_directory_name(r));
  EXPECT_EQ(names.size(), 15u);
  EXPECT_EQ(expand_sweep(base, std::nullopt, 3).size(), 3u);
  EXPECT_THROW(expand_sweep(base, parse_sweep_axis("t2=150"), 1), ConfigError);
  EXPECT_THROW(expand_sweep(base, std::nullopt, 0), ConfigError);
}

TEST(Sweep, RunMatchesStandaloneRun) {
  RunConfig base;
  base.scenario.sim_time_s = 1.0;
  const auto out = std::filesystem::temp_directory_path() / "spssim_sweep_test";
  std::filesystem::remove_all(out);
  const auto axis = parse_sweep_axis("preset=s1,s2");
  const auto results = run_sweep(base, axis, 2, out);
  ASSERT_EQ(results.size(), 4u);
  for (const char* f : {"per_curve_long.csv", "ipg_hist_long.csv", "summary_long.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
  }
  EXPECT_TRUE(slurp(out / "summary_long.csv").starts_with("axis,value,seed,metric,metric_value\n"));

  const auto runs = expand_sweep(base, axis, 2);
  const SweepRun& last = runs.back();
  const auto alone = std::filesystem::temp_directory_path() / "spssim_sweep_alone";
  std::filesystem::remove_all(alone);
  write_artifacts(run(last.config), alone);
  for (const char* f : {"per_curve.csv", "ipg_hist.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(out / run_directory_name(last) / f), slurp(alone / f)) << f;
  }
  std::filesystem::remove_all(out);
  std::filesystem::remove_all(alone);
}

}  // namespace
