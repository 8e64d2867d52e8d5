#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spssim/config.hpp"
#include "spssim/sim_engine.hpp"

namespace spssim {

/// Keys a sweep may vary, in "section.key" form.
const std::vector<std::string_view>& sweepable_keys();

/// Resolves a short alias (p_resel, th_sps, offset_mode, preset, ...) or a
/// full key. Throws ConfigError listing the sweepable keys otherwise.
std::string canonical_sweep_key(std::string_view key);

struct SweepAxis {
  std::string key;  // canonical
  std::vector<std::string> values;
};

/// Parses "KEY=V1,V2,...".
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepRun {
  std::string value;  // empty without an axis
  std::uint64_t seed = 0;
  RunConfig config;
};

/// One run per (value, seed); seeds are base.run.seed + 0..seeds-1. Every
/// resolved config is validated up front.
std::vector<SweepRun> expand_sweep(const RunConfig& base, const std::optional<SweepAxis>& axis,
                                   int seeds);

/// Directory name of one run below the sweep output directory.
std::string run_directory_name(const SweepRun& run);

/// Runs every expanded configuration, writes each run's artifacts to its
/// own directory and the combined long-format CSVs (per_curve_long.csv,
/// ipg_hist_long.csv, summary_long.csv) to `out_dir`. Rows follow the
/// axis value order, then seed.
std::vector<RunResult> run_sweep(const RunConfig& base, const std::optional<SweepAxis>& axis,
                                 int seeds, const std::filesystem::path& out_dir,
                                 const std::function<void(const SweepRun&)>& on_start = {});

}  // namespace spssim
