#include "shom/residual.hpp"

#include <cmath>
#include <iterator>

#include "shom/errors.hpp"
#include "shom/parallel.hpp"
#include "shom/spectral.hpp"

namespace shom {
namespace {

SlowField flux_over_mu(const AnsatzRealization& ans, const StripProblem& sp) {
  if (std::abs(sp.mu() - ans.mu) > 1e-15 * ans.mu)
    throw InvalidArgument("residual: strip problem and ansatz use different mu");
  return (1.0 / ans.mu) * dn_apply(sp, ans.psi_a);
}

}  // namespace

SlowField residual_e1_from_flux(const AnsatzRealization& ans, const SlowField& g_over_mu,
                                const SlowField& dzeta_dt) {
  require_same_grid(ans.zeta_a, dzeta_dt, "residual_e1");
  require_same_grid(ans.zeta_a, g_over_mu, "residual_e1");
  return dzeta_dt - g_over_mu;
}

SlowField residual_e1(const AnsatzRealization& ans, const StripProblem& sp, const SlowField& dzeta_dt) {
  return residual_e1_from_flux(ans, flux_over_mu(ans, sp), dzeta_dt);
}

SlowField residual_e2_from_flux(const AnsatzRealization& ans, const SlowField& g_over_mu,
                                const SlowField& dpsi_dt) {
  require_same_grid(ans.psi_a, dpsi_dt, "residual_e2");
  require_same_grid(ans.psi_a, g_over_mu, "residual_e2");
  const auto gz = gradient(ans.zeta_a);
  const auto gp = gradient(ans.psi_a);
  const SlowGrid& g = ans.psi_a.grid();
  std::vector<double> out(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    double gp2 = 0.0, gz2 = 0.0, gzp = 0.0;
    for (std::size_t a = 0; a < gz.size(); ++a) {
      gp2 += gp[a][p] * gp[a][p];
      gz2 += gz[a][p] * gz[a][p];
      gzp += gz[a][p] * gp[a][p];
    }
    const double n = g_over_mu[p] + gzp;
    out[p] = dpsi_dt[p] + ans.zeta_a[p] + 0.5 * gp2 - ans.mu * n * n / (2.0 * (1.0 + ans.mu * gz2));
  }
  return SlowField(g, std::move(out));
}

SlowField residual_e2(const AnsatzRealization& ans, const StripProblem& sp, const SlowField& dpsi_dt) {
  return residual_e2_from_flux(ans, flux_over_mu(ans, sp), dpsi_dt);
}

ConsistencyRecord consistency_point(const RateStudyConfig& cfg, double mu) {
  if (!(mu > 0.0)) throw InvalidArgument("consistency_point: mu must be positive");
  if (!(cfg.dt_fd > 0.0) || cfg.substeps < 1)
    throw InvalidArgument("consistency_point: dt_fd > 0 and substeps >= 1 required");
  if (!(cfg.eval_time > cfg.dt_fd)) throw InvalidArgument("consistency_point: eval_time must exceed dt_fd");
  const double gamma = std::sqrt(mu);
  const double L = commensurate_length(cfg.box_target, gamma);
  const SlowGrid probe(1, L, 8);
  const int periods = fast_periods(probe, gamma);
  const int nx = cfg.points_per_fast_period * periods;
  const SlowGrid grid(1, L, nx + (nx % 2));

  const SurfaceState s0 = make_surface(cfg.surface, grid);
  if (!s0.psi0) throw InvalidArgument("consistency_point: surface preset must carry a potential");

  // Snapshots at t - dt_fd, t, t + dt_fd, all exact multiples of the step.
  const double dt = cfg.dt_fd / cfg.substeps;
  const long n_mid = std::lround(cfg.eval_time / dt);
  if (std::abs(n_mid * dt - cfg.eval_time) > 1e-12 || n_mid % cfg.substeps != 0)
    throw InvalidArgument("consistency_point: eval_time must be a multiple of dt_fd");
  const Trajectory traj = simulate(s0, (n_mid + cfg.substeps) * dt, dt, cfg.sw, cfg.substeps);
  if (!traj.completed()) throw Error("consistency_point: shallow-water run stopped: " + traj.message);
  const std::size_t mid = static_cast<std::size_t>(n_mid / cfg.substeps);
  if (traj.states.size() < mid + 2) throw Error("consistency_point: missing trajectory snapshots");

  const NonresonanceGuard guard(cfg.guard_delta, cfg.guard_hbar);
  auto ansatz_at = [&](const SurfaceState& s) {
    return build_ansatz(s, stationary_field(s, cfg.bottom, guard), mu);
  };
  const SurfaceState& smid = traj.states[mid];
  const CorrectorState cmid = stationary_field(smid, cfg.bottom, guard);
  const AnsatzRealization a = build_ansatz(smid, cmid, mu);
  const AnsatzRate rate =
      ansatz_time_derivative(ansatz_at(traj.states[mid - 1]), ansatz_at(traj.states[mid + 1]),
                             2.0 * cfg.dt_fd);

  const StripProblem sp = build_sigma(a.zeta_a, cfg.bottom, mu, cfg.oracle);
  const SlowField g = (1.0 / mu) * dn_apply(sp, a.psi_a);
  const SlowField e1 = residual_e1_from_flux(a, g, rate.dzeta_dt);
  const SlowField e2 = residual_e2_from_flux(a, g, rate.dpsi_dt);

  ConsistencyRecord r;
  r.mu = mu;
  r.gamma = gamma;
  r.e1_l2 = l2_norm(e1);
  r.e2_h12 = sobolev_norm(e2, 0.5);
  r.hstar = r.e1_l2 + std::pow(gamma, -0.375) * r.e2_h12;
  r.geff_remainder = l2_norm(g - g_eff(smid, cmid, cfg.bottom, mu));
  r.box_length = L;
  r.nx = grid.n();
  r.nz = cfg.oracle.nz;
  r.fast_periods = periods;
  return r;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fitted_slope: need >= 2 pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("fitted_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw InvalidArgument("fitted_slope: x values must differ");
  return (n * sxy - sx * sy) / den;
}

RateStudy rate_study(const RateStudyConfig& cfg, const std::vector<double>& mu_list) {
  if (mu_list.size() < 2) throw InvalidArgument("rate_study: need at least two values of mu");
  RateStudy out;
  out.records.resize(mu_list.size());
  parallel_for(mu_list.size(), [&](std::size_t i) { out.records[i] = consistency_point(cfg, mu_list[i]); });
  std::vector<double> e1, e2, ge, hs;
  for (const auto& r : out.records) {
    e1.push_back(r.e1_l2);
    e2.push_back(r.e2_h12);
    ge.push_back(r.geff_remainder);
    hs.push_back(r.hstar);
  }
  out.slope_e1 = fitted_slope(mu_list, e1);
  out.slope_e2 = fitted_slope(mu_list, e2);
  out.slope_geff = fitted_slope(mu_list, ge);
  out.slope_hstar = fitted_slope(mu_list, hs);
  return out;
}

}  // namespace shom
