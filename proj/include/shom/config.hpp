#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shom/bathymetry.hpp"
#include "shom/elliptic_oracle.hpp"
#include "shom/resonance.hpp"
#include "shom/residual.hpp"
#include "shom/shallow_water.hpp"

namespace shom {

// Run configuration. Text format: one `key = value` per line, `#` starts
// a comment, lists are comma separated. The bottom is a preset name
// (cos | two_mode | random_phase | flat) or a list of mode tuples
// `(k, re, im), ...` in d = 1 and `(k1, k2, re, im), ...` in d = 2.
struct RunConfig {
  int dim = 1;
  double mu = 0.01;
  std::vector<double> mu_list{0.04, 0.02, 0.01, 0.005};
  /// Box length; when unset each mu gets 2 pi gamma round(box_target / (2 pi gamma)).
  std::optional<double> box_length;
  double box_target = 16.0;
  /// Slow grid size; when unset, points_per_fast_period per fast period.
  std::optional<int> nx;
  int points_per_fast_period = 32;
  int cutoff = -1;

  std::string bottom = "cos";  // preset name or "modes"
  ModeMap bottom_modes;
  double bottom_amplitude = 1.0;
  double bottom_decay = 0.5;
  int bottom_kmax = 6;

  SurfacePreset surface{};
  double alpha0 = 1e-3;
  double viscosity = 0.0;
  double guard_delta = 1e-3;
  std::optional<double> guard_hbar;  // default alpha0 / 2

  double dt = 1e-3;  // <= 0 selects adaptive CFL steps
  double T = 0.1;
  double cfl = 0.5;
  int snapshot_every = 10;
  double dt_fd = 1e-3;

  int oracle_nz = 32;
  OracleSolver oracle_solver = OracleSolver::direct;

  double tau = 20.0;
  int tau_samples = 200;
  std::string corrector_init = "stationary";  // stationary | zero

  std::vector<int> cell_grid{16, 32, 64, 128};
  double cell_h0 = 1.0;
  double cell_grad = 1.0;

  std::size_t mc_samples = 10000;
  std::uint64_t seed = 1;
  std::string output = "out";

  double e1_slope_min = 0.30;
  double e2_slope_min = 0.60;
  double geff_slope_min = 0.30;

  double gamma() const;
  double hbar() const;
  /// Slow grid for a given mu (commensurate box, resolution policy).
  SlowGrid grid_for(double mu) const;
  SlowGrid grid() const { return grid_for(mu); }
  BottomProfile bottom_profile() const;
  NonresonanceGuard guard() const;
  SwOptions sw_options() const;
  OracleOptions oracle_options() const;
  RateStudyConfig rate_study_config() const;
};

/// Throws ConfigError naming the line and the violated rule.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Checks every cross-field constraint; throws ConfigError (line 0).
void validate(const RunConfig& c);

/// Command-line overrides. `mu_list` is "mu" or "mu1, mu2, ..." (sets mu
/// to the first entry); the result is re-validated.
void apply_overrides(RunConfig& c, const std::optional<std::string>& mu_list,
                     const std::optional<std::uint64_t>& seed);

/// Effective configuration in the input syntax; parse_config(render_config(c))
/// reproduces c.
std::string render_config(const RunConfig& c);

}  // namespace shom
