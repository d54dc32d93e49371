#pragma once

#include <utility>

#include "shom/bathymetry.hpp"
#include "shom/multiscale_field.hpp"
#include "shom/resonance.hpp"
#include "shom/shallow_water.hpp"

namespace shom {

/// omega_k = (|k| tanh(h0 |k|))^{1/2}.
double mode_frequency(double h0, const Mode& k);

/// One Fourier mode in characteristic variables Z = u + i v, W = u - i v
/// with u = omega^{-1/2} zeta_hat, v = omega^{1/2} psi_hat.
struct ModeState {
  Mode k{0, 0};
  cplx Z{};
  cplx W{};
  double omega = 0.0;
  double advection = 0.0;  // k . V0
};

ModeState to_characteristic(const Mode& k, cplx zeta_hat, cplx psi_hat, double h0, const Vec2& V0);
/// (zeta_hat, psi_hat).
std::pair<cplx, cplx> from_characteristic(const ModeState& m);

/// Exact solution over tau of the mode system with a forcing f_hat held
/// constant:
///   Z(tau) = e^{-i tau (omega + k.V0)} Z(0) + Q(tau, omega + k.V0) omega^{-1/2} f_hat
///   W(tau) = e^{+i tau (omega - k.V0)} W(0) + Q(tau, k.V0 - omega) omega^{-1/2} f_hat
/// with Q(tau, theta) = (e^{-i tau theta} - 1)/(-i theta), replaced by its
/// series when |tau theta| < 1e-6.
ModeState propagate_mode(const ModeState& m, double tau, cplx f_hat);
cplx duhamel_factor(double tau, double theta);

/// f_hat_k = i (V0.k) sech(h0 |k|) b_k.
TorusSpectrum forcing(double h0, const Vec2& V0, const BottomProfile& b, int cutoff = -1);

/// Corrector at one slow point.
struct CorrectorPair {
  TorusSpectrum zeta1;
  TorusSpectrum psi1;
};

/// d/dtau of (zeta1, psi1) under the fast system:
///   zeta' = -i(k.V0) zeta + omega^2 psi + f,  psi' = -i(k.V0) psi - zeta.
CorrectorPair corrector_tendency(const CorrectorPair& c, double h0, const Vec2& V0,
                                 const BottomProfile& b);

/// Exact propagation of every mode of c over tau.
CorrectorPair propagate(const CorrectorPair& c, double h0, const Vec2& V0, const BottomProfile& b,
                        double tau);

/// Locally stationary corrector; throws ResonanceError listing every active
/// mode that fails the guard.
CorrectorPair stationary(double h0, const Vec2& V0, const BottomProfile& b,
                         const NonresonanceGuard& guard, int cutoff = -1);

/// ( sum_{k != 0} (1+|k|^2)^r (|zeta_k|^2 + |k| tanh(h0|k|) |psi_k|^2) )^{1/2}.
/// Rejects inputs with a nonzero mean.
double energy_norm(const TorusSpectrum& zeta1, const TorusSpectrum& psi1, double r, double h0);

/// (zeta1, psi1) over the slow grid, zero fast mean at every point.
struct CorrectorState {
  MultiscaleField zeta1;
  MultiscaleField psi1;

  CorrectorPair at(std::size_t point) const { return {zeta1.at(point), psi1.at(point)}; }
  void set(std::size_t point, const CorrectorPair& c);
};

CorrectorState zero_corrector(const SlowGrid& grid, int cutoff);

/// Frozen-coefficient evolution: (h0, V0) at each slow point are held
/// fixed over the span, which is covered by n_steps exact sub-steps.
CorrectorState evolve(const CorrectorState& c0, const SurfaceState& surface, const BottomProfile& b,
                      double tau_span, int n_steps = 1);

/// stationary() at every slow point. Any certify() flag (band violation or
/// sign change of a margin between neighbours) raises ResonanceError at the
/// lowest flagged index, carrying its index and position.
CorrectorState stationary_field(const SurfaceState& surface, const BottomProfile& b,
                                const NonresonanceGuard& guard);

}  // namespace shom
