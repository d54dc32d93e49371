#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "shom/config.hpp"
#include "shom/parallel.hpp"

namespace fs = std::filesystem;
using namespace shom;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("shom_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string summary_value(const fs::path& dir, const std::string& key) {
  std::istringstream in(slurp(dir / "summary.txt"));
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return "";
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SHOM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kShortRun =
    "mu = 0.01\nmu_list = 0.01\nT = 0.05\ntau = 5\ntau_samples = 10\ncell_grid = 16, 32\nmc_samples = 500\n";

}  // namespace

TEST(Cli, EverySubcommandEchoesConfig) {
  const RunConfig cfg = parse_config(kShortRun);
  for (const auto& sub : cli::subcommands()) {
    if (sub == "consistency") continue;  // covered below with the full sweep
    const fs::path dir = scratch(sub);
    std::string msg;
    ASSERT_EQ(cli::run_guarded(sub, cfg, dir.string(), &msg), 0) << sub << ": " << msg;
    ASSERT_TRUE(fs::exists(dir / "effective_config.txt")) << sub;
    ASSERT_TRUE(fs::exists(dir / "summary.txt")) << sub;
    // The echo alone reproduces the run.
    const RunConfig again = parse_config(slurp(dir / "effective_config.txt"));
    EXPECT_EQ(render_config(again), render_config(cfg)) << sub;
    fs::remove_all(dir);
  }
}

TEST(Cli, CsvOutputsAreByteIdenticalAcrossRunsAndThreads) {
  const RunConfig cfg = parse_config(kShortRun);
  for (const std::string sub : {"simulate", "corrector", "stationary", "resonance-scan", "cell-verify"}) {
    const fs::path a = scratch(sub + "_a"), b = scratch(sub + "_b");
    set_thread_count(1);
    ASSERT_EQ(cli::run_guarded(sub, cfg, a.string()), 0);
    set_thread_count(3);
    ASSERT_EQ(cli::run_guarded(sub, cfg, b.string()), 0);
    set_thread_count(1);
    int csvs = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (e.path().extension() != ".csv" && e.path().extension() != ".bin") continue;
      const fs::path other = b / fs::relative(e.path(), a);
      ASSERT_TRUE(fs::exists(other)) << other;
      EXPECT_EQ(slurp(e.path()), slurp(other)) << sub << " " << e.path().filename();
      ++csvs;
    }
    EXPECT_GT(csvs, 0) << sub;
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST(Cli, SupercriticalScanHasNoFlags) {
  const RunConfig cfg = parse_config(std::string(kShortRun) + "surface = stream\n");
  const fs::path dir = scratch("stream");
  ASSERT_EQ(cli::run_guarded("resonance-scan", cfg, dir.string()), 0);
  std::istringstream csv(slurp(dir / "resonance_flags.csv"));
  std::string line;
  int rows = 0;
  std::getline(csv, line);  // header
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 0);
  EXPECT_EQ(summary_value(dir, "certified"), "true");
  fs::remove_all(dir);
}

TEST(Cli, CellVerifyDecaysAtSecondOrder) {
  const RunConfig cfg = parse_config("cell_grid = 16, 32, 64\n");
  const fs::path dir = scratch("cell");
  ASSERT_EQ(cli::run_guarded("cell-verify", cfg, dir.string()), 0);
  std::istringstream csv(slurp(dir / "cell_verify.csv"));
  std::string line;
  std::getline(csv, line);
  std::vector<double> err;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    err.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  }
  ASSERT_EQ(err.size(), 3u);
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_NEAR(err[i - 1] / err[i], 4.0, 0.5);
  fs::remove_all(dir);
}

TEST(Cli, ConsistencyDefaultMeetsThresholds) {
  const RunConfig cfg = parse_config("");
  const fs::path dir = scratch("consistency");
  ASSERT_EQ(cli::run_guarded("consistency", cfg, dir.string()), 0);
  EXPECT_GE(std::stod(summary_value(dir, "slope_e1")), 0.30);
  EXPECT_GE(std::stod(summary_value(dir, "slope_e2")), 0.60);
  fs::remove_all(dir);
}

TEST(Cli, FailureClassesMapToExitCodes) {
  // Subcritical jet crosses resonance: the stationary corrector is refused.
  const RunConfig jet = parse_config(std::string(kShortRun) + "surface = jet\njet_speed = 0.95\n");
  const fs::path dir = scratch("jet");
  std::string msg;
  EXPECT_EQ(cli::run_guarded("stationary", jet, dir.string(), &msg), cli::kResonance);
  EXPECT_NE(msg.find("resonance"), std::string::npos) << msg;
  EXPECT_TRUE(fs::exists(dir / "summary.txt"));

  // Strip depth 1 + zeta - sqrt(mu) b goes negative once sqrt(mu) b > 1.
  const RunConfig dry = parse_config("mu_list = 0.04, 0.02\nbottom_amplitude = 6\n");
  EXPECT_EQ(cli::run_guarded("consistency", dry, scratch("dry").string()), cli::kDepth);

  // Unreachable thresholds.
  const RunConfig strict =
      parse_config("mu_list = 0.04, 0.02\ne1_slope_min = 5\n");
  EXPECT_EQ(cli::run_guarded("consistency", strict, scratch("strict").string()), cli::kThresholds);
  for (const auto* n : {"jet", "dry", "strict"}) fs::remove_all(scratch(n));
}

TEST(Cli, BinaryFlagsAndConfigErrors) {
  const fs::path dir = scratch("binary");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "ok.cfg") << kShortRun;
    std::ofstream(dir / "bad.cfg") << "mu = 0.01\nmu_list = 0.01\nL = 16\n";
    std::ofstream(dir / "typo.cfg") << "muu = 0.01\n";
  }
  const std::string d = dir.string();
  EXPECT_EQ(run_binary("resonance-scan --config " + d + "/ok.cfg --out " + d + "/ok --threads 2 --seed 7"), 0);
  EXPECT_NE(slurp(dir / "ok" / "effective_config.txt").find("seed = 7"), std::string::npos);
  EXPECT_EQ(run_binary("cell-verify --config " + d + "/ok.cfg --out " + d + "/mu --mu-override 0.04"), 0);
  EXPECT_NE(slurp(dir / "mu" / "effective_config.txt").find("mu = 0.040000000000000001"),
            std::string::npos);
  EXPECT_EQ(run_binary("simulate --config " + d + "/bad.cfg --out " + d + "/bad"), cli::kConfig);
  EXPECT_EQ(run_binary("simulate --config " + d + "/typo.cfg --out " + d + "/typo"), cli::kConfig);
  EXPECT_EQ(run_binary("simulate --config " + d + "/missing.cfg --out " + d + "/m"), cli::kConfig);
  EXPECT_NE(run_binary("no-such-command"), 0);
  fs::remove_all(dir);
}
