#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shom/slow_field.hpp"

namespace shom {

/// Effective surface elevation and velocity. psi0 is optional; when present
/// it is evolved alongside by  d_t psi0 = -zeta0 - |V0|^2 / 2.
struct SurfaceState {
  SlowField zeta0;
  std::vector<SlowField> V0;
  std::optional<SlowField> psi0;

  SurfaceState(SlowField zeta, std::vector<SlowField> velocity,
               std::optional<SlowField> potential = std::nullopt);

  const SlowGrid& grid() const noexcept { return zeta0.grid(); }
  SlowField depth() const;
  Vec2 velocity_at(std::size_t point) const noexcept;
};

/// Initial data built from a potential: V0 = grad psi0, psi0 retained.
SurfaceState surface_from_potential(SlowField zeta0, const SlowField& psi0);

/// Named presets. gaussian_bump: zeta0 = amplitude e^{-|X|^2/w^2},
/// psi0 = potential_amplitude e^{-|X|^2/w^2}. rest: zeta0 = V0 = 0.
/// stream: zeta0 = 0, V0 = (stream_velocity, 0), psi0 = stream_velocity X_1
/// (psi0 omitted: it is not periodic). jet: zeta0 = 0,
/// V0 = (jet_speed e^{-|X|^2/w^2}, 0), psi0 omitted.
struct SurfacePreset {
  std::string name = "gaussian_bump";
  double amplitude = 0.1;
  double potential_amplitude = 0.3;
  double width = 1.5;
  double stream_velocity = 1.2;
  double jet_speed = 0.95;
};
SurfaceState make_surface(const SurfacePreset& preset, const SlowGrid& grid);

struct SwOptions {
  double cfl = 0.5;
  /// Minimum admissible depth 1 + zeta0.
  double alpha0 = 1e-3;
  /// Coefficient of the optional nu (-Laplacian)^2 damping.
  double viscosity = 0.0;
  /// Blow-up is declared when max |grad V0| exceeds blowup_factor / L.
  double blowup_factor = 1e3;
};

struct Tendency {
  SlowField dzeta;
  std::vector<SlowField> dV;
  std::optional<SlowField> dpsi;
};

/// (-div(h0 V0), -grad zeta0 - (V0.grad) V0[, -zeta0 - |V0|^2/2]) with
/// dealiased products. Throws DepthError if 1 + zeta0 < alpha0.
Tendency sw_rhs(const SurfaceState& state, const SwOptions& options = {}, double time = 0.0);

/// cfl * dx / max(|V0| + sqrt(h0)).
double max_stable_dt(const SurfaceState& state, double cfl);

/// One SSP-RK3 step; dt may be negative. Throws CflError or DepthError.
SurfaceState step(const SurfaceState& state, double dt, const SwOptions& options = {},
                  double time = 0.0);

struct SwDiagnostics {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double min_depth = 0.0;
  double max_grad_v = 0.0;
};
SwDiagnostics diagnose(const SurfaceState& state, double time);
double max_velocity_gradient(const SurfaceState& state);

enum class StopReason { completed, blowup, depth, cfl };
const char* to_string(StopReason r) noexcept;

struct Trajectory {
  std::vector<double> times;
  std::vector<SurfaceState> states;
  std::vector<SwDiagnostics> diagnostics;
  StopReason reason = StopReason::completed;
  std::string message;

  double last_valid_time() const { return times.empty() ? 0.0 : times.back(); }
  bool completed() const noexcept { return reason == StopReason::completed; }
};

/// Integrates to T. dt > 0 is used as given (the final step is shortened to
/// land on T); dt <= 0 selects the CFL step each time. Every
/// `snapshot_every`-th state and the last valid state are recorded. Depth,
/// CFL and blow-up failures truncate the trajectory and set `reason`.
Trajectory simulate(const SurfaceState& state0, double T, double dt,
                    const SwOptions& options = {}, int snapshot_every = 1);

}  // namespace shom
