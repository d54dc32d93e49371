#pragma once

#include <string>
#include <vector>

#include "shom/bathymetry.hpp"
#include "shom/effective_dn.hpp"
#include "shom/elliptic_oracle.hpp"
#include "shom/resonance.hpp"
#include "shom/shallow_water.hpp"

namespace shom {

/// d_t zeta_a - (1/mu) G psi_a.
SlowField residual_e1(const AnsatzRealization& ans, const StripProblem& sp, const SlowField& dzeta_dt);
SlowField residual_e1_from_flux(const AnsatzRealization& ans, const SlowField& g_over_mu,
                                const SlowField& dzeta_dt);

/// d_t psi_a + zeta_a + |grad psi_a|^2 / 2
///   - mu ((1/mu) G psi_a + grad zeta_a . grad psi_a)^2 / (2 (1 + mu |grad zeta_a|^2)).
SlowField residual_e2(const AnsatzRealization& ans, const StripProblem& sp, const SlowField& dpsi_dt);
SlowField residual_e2_from_flux(const AnsatzRealization& ans, const SlowField& g_over_mu,
                                const SlowField& dpsi_dt);

struct ConsistencyRecord {
  double mu = 0.0;
  double gamma = 0.0;
  double e1_l2 = 0.0;
  double e2_h12 = 0.0;
  double hstar = 0.0;  // e1_l2 + gamma^{-3/8} e2_h12
  double geff_remainder = 0.0;  // |(1/mu) G psi_a - g_eff|_{L2}
  double box_length = 0.0;
  int nx = 0;
  int nz = 0;
  int fast_periods = 0;
};

struct RateStudyConfig {
  BottomProfile bottom = cosine_bottom(1);
  SurfacePreset surface{};
  /// Target box length; each mu gets 2 pi gamma round(L0 / (2 pi gamma)).
  double box_target = 16.0;
  int points_per_fast_period = 32;
  OracleOptions oracle{};
  double eval_time = 0.1;
  double dt_fd = 1e-3;
  /// Shallow-water steps per dt_fd.
  int substeps = 1;
  double guard_delta = 1e-3;
  double guard_hbar = 5e-4;
  SwOptions sw{};
};

/// One mu of the sweep. Throws ResonanceError if the stationary corrector
/// is not available at the evaluation snapshots.
ConsistencyRecord consistency_point(const RateStudyConfig& config, double mu);

struct RateStudy {
  std::vector<ConsistencyRecord> records;
  double slope_e1 = 0.0;
  double slope_e2 = 0.0;
  double slope_geff = 0.0;
  double slope_hstar = 0.0;
};

/// Least-squares log-log slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs every mu (in parallel up to thread_count()) and fits slopes
/// against mu.
RateStudy rate_study(const RateStudyConfig& config, const std::vector<double>& mu_list);

}  // namespace shom
