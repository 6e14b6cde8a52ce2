#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "proteinoid/config.hpp"
#include "proteinoid/errors.hpp"
#include "proteinoid/pipeline.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace proteinoid;

  CLI::App app{"Proteinoid microsphere ensemble simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<fs::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out_dir;
  std::optional<unsigned> workers;
  app.add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "ensemble seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "thread budget")->check(CLI::PositiveNumber);

  std::string input = "11";
  std::optional<fs::path> replay;
  std::vector<fs::path> traces;

  auto* gen = app.add_subcommand("gen-ensemble", "write the disc list and conductive mask");
  auto* simulate = app.add_subcommand("simulate", "run one trial, write traces and frames");
  simulate->add_option("--input", input, "input pair xy")->capture_default_str();
  auto* mine = app.add_subcommand("mine-gates", "run trials 01, 10, 11 and count gates");
  auto* map = app.add_subcommand("map", "build the k-bit mapping and analyse it");
  map->add_option("--replay", replay, "analyse a saved mapping CSV instead of simulating")
      ->check(CLI::ExistingFile);
  auto* spikes = app.add_subcommand("analyze-spikes", "spike, ISI and burst summaries");
  spikes->add_option("--traces", traces, "trace CSV files; a fresh trial when omitted")
      ->check(CLI::ExistingFile);
  spikes->add_option("--input", input, "input pair for a fresh trial")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig config = config_path ? load_config(*config_path) : RunConfig{};
    if (seed) config.ensemble.rng_seed = *seed;
    if (out_dir) config.out_dir = *out_dir;
    if (workers) config.workers = *workers;

    if (gen->parsed()) {
      run_gen_ensemble(config, std::cout);
    } else if (simulate->parsed()) {
      run_simulate(config, parse_input_pair(input), std::cout);
    } else if (mine->parsed()) {
      run_mine_gates(config, std::cout);
    } else if (map->parsed()) {
      run_map(config, replay, std::cout);
    } else if (spikes->parsed()) {
      run_analyze_spikes(config, traces, parse_input_pair(input), std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
