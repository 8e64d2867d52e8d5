// Command-line front end: single runs, seed batches and one-axis sweeps.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spssim/config.hpp"
#include "spssim/errors.hpp"
#include "spssim/scenario.hpp"
#include "spssim/sim_engine.hpp"
#include "spssim/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-V2X mode-4 sidelink SB-SPS simulator"};

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string preset;
  std::string out_dir = "out";
  std::string sweep;
  int seeds = 1;
  bool trace = false;
  bool strict = false;
  bool dump_config = false;
  std::optional<double> sim_time;

  app.add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed (first seed of a batch)");
  app.add_option("--preset", preset, "Congestion scenario s1..s4")
      ->check(CLI::IsMember({"s1", "s2", "s3", "s4"}));
  app.add_option("--out", out_dir, "Output directory (SPSSIM_OUT overrides)");
  app.add_option("--sweep", sweep, "Sweep one key: KEY=V1,V2,...");
  app.add_option("--seeds", seeds, "Number of consecutive seeds per configuration")
      ->check(CLI::PositiveNumber);
  app.add_flag("--trace", trace, "Write grant_trace.csv");
  app.add_option("--strict", strict, "Restrict the grid to RRC-signalable values")
      ->default_val(false);
  app.add_option("--sim-time", sim_time, "Override scenario.sim_time_s");
  app.add_flag("--dump-config", dump_config, "Print the resolved configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (const char* env = std::getenv("SPSSIM_OUT"); env != nullptr && *env != '\0') {
    out_dir = env;
  }

  try {
    spssim::ParsedConfig parsed = config_path.empty()
                                      ? spssim::parse_config("", strict)
                                      : spssim::load_config(config_path, strict);
    spssim::RunConfig& cfg = parsed.config;
    if (!preset.empty()) spssim::apply_preset(cfg.scenario, preset);
    if (seed) cfg.run.seed = *seed;
    if (trace) cfg.run.trace = true;
    if (sim_time) cfg.scenario.sim_time_s = *sim_time;
    const auto warnings = cfg.validate(strict);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

    if (dump_config) {
      std::cout << spssim::emit_config(cfg);
      return 0;
    }

    std::optional<spssim::SweepAxis> axis;
    if (!sweep.empty()) axis = spssim::parse_sweep_axis(sweep);

    if (!axis && seeds == 1) {
      const spssim::RunResult result = spssim::run(cfg);
      spssim::write_artifacts(result, out_dir);
      std::cout << spssim::summary_text(result);
      return 0;
    }
    spssim::run_sweep(cfg, axis, seeds, out_dir, [](const spssim::SweepRun& r) {
      std::cerr << "run " << spssim::run_directory_name(r) << '\n';
    });
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "summary_long.csv").string()
              << '\n';
    return 0;
  } catch (const spssim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
