#pragma once

#include "shom/bathymetry.hpp"
#include "shom/corrector.hpp"
#include "shom/shallow_water.hpp"

namespace shom {

/// Number of fast periods 2 pi gamma in the slow box. Throws
/// CommensurabilityError (with the nearest commensurate gamma) unless
/// L / (2 pi gamma) is an integer to 1e-9.
int fast_periods(const SlowGrid& grid, double gamma);

/// 2 pi gamma round(L0 / (2 pi gamma)), at least one period.
double commensurate_length(double L0, double gamma);

/// (1/mu) G psi at leading order with the bottom at the fast scale:
///   -div(h0 V0) - grad_Y zeta1 . V0 + |D_Y| tanh(h0 |D_Y|) psi1
///   + V0 . grad_Y sech(h0 |D_Y|) b,
/// fast parts evaluated at Y = X / gamma, gamma = sqrt(mu).
SlowField g_eff(const SurfaceState& surface, const CorrectorState& corrector, const BottomProfile& b,
                double mu);

/// Fast part of g_eff at one slow point, as a torus spectrum.
TorusSpectrum g_eff_fast(double h0, const Vec2& V0, const CorrectorPair& c, const BottomProfile& b);

struct AnsatzRealization {
  double mu;
  double gamma;
  SlowField zeta_a;  // zeta0 + gamma zeta1(X, X/gamma)
  SlowField psi_a;   // psi0 + gamma^2 psi1(X, X/gamma)
  SlowField zeta1;   // realized correctors
  SlowField psi1;
};

/// Requires the surface potential, a commensurate box and at least eight
/// grid points per fast wavelength.
AnsatzRealization build_ansatz(const SurfaceState& surface, const CorrectorState& corrector,
                               double mu);

struct AnsatzRate {
  SlowField dzeta_dt;
  SlowField dpsi_dt;
};

/// (after - before) / span; centered when the snapshots straddle the
/// evaluation time.
AnsatzRate ansatz_time_derivative(const AnsatzRealization& before, const AnsatzRealization& after,
                                  double span);

}  // namespace shom
