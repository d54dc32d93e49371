// Command-line front end: shom <subcommand> [--config PATH] [--out DIR] ...

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "commands.hpp"
#include "shom/errors.hpp"
#include "shom/parallel.hpp"

int main(int argc, char** argv) {
  using namespace shom;
  CLI::App app{"Multiscale homogenization toolkit for shallow water over rough bathymetry"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, out_dir, mu_override;
  int threads = 0;
  long seed = -1;
  app.add_option("--config", config_path, "Configuration file (key = value lines)");
  app.add_option("--out", out_dir, "Output directory (overrides the config value)");
  app.add_option("--threads", threads, "Worker threads (overrides SHOM_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--mu-override", mu_override, "mu, or a comma list for consistency sweeps");
  app.add_option("--seed", seed, "Seed for randomized presets")->check(CLI::NonNegativeNumber);
  for (const auto& name : cli::subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfig;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    std::optional<std::string> mus;
    std::optional<std::uint64_t> sd;
    if (!mu_override.empty()) mus = mu_override;
    if (seed >= 0) sd = static_cast<std::uint64_t>(seed);
    apply_overrides(cfg, mus, sd);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kConfig;
  }
  if (threads > 0) set_thread_count(threads);
  if (!out_dir.empty()) cfg.output = out_dir;

  std::string message;
  const int code = cli::run_guarded(sub, cfg, cfg.output, &message);
  if (!message.empty()) std::cerr << sub << ": " << message << "\n";
  else if (code != cli::kOk) std::cerr << sub << ": finished with exit code " << code << "\n";
  return code;
}
