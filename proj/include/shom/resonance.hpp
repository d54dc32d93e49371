#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shom/bathymetry.hpp"
#include "shom/errors.hpp"
#include "shom/shallow_water.hpp"

namespace shom {

/// Nonresonance hypothesis: |omega_k^2 - (k.V0)^2| > 1/B_k with
/// B_k = e^{hbar |k|} / delta.
class NonresonanceGuard {
 public:
  NonresonanceGuard(double delta, double hbar);
  /// delta = 1e-3, hbar = alpha0 / 2.
  static NonresonanceGuard defaults(double alpha0);

  double delta() const noexcept { return delta_; }
  double hbar() const noexcept { return hbar_; }
  double bound(const Mode& k) const noexcept;
  /// 1 / B_k = delta e^{-hbar |k|}.
  double threshold(const Mode& k) const noexcept;
  /// Rejects hbar >= alpha0.
  void check_against(double alpha0) const;

 private:
  double delta_;
  double hbar_;
};

/// omega_k^2 - (k.V0)^2 = |k| tanh(h0 |k|) - (k.V0)^2. Rejects k = 0.
double margin(double h0, const Vec2& V0, const Mode& k);

/// Active bottom modes that violate the guard at one (h0, V0).
std::vector<ResonantMode> violations(double h0, const Vec2& V0, const BottomProfile& b,
                                     const NonresonanceGuard& guard);

struct ResonanceFlag {
  std::size_t index = 0;  // nearest slow grid point
  Vec2 x{0.0, 0.0};       // grid point, or interpolated root for crossings
  Mode k{0, 0};
  double margin = 0.0;
  double threshold = 0.0;
  /// True when the flag marks a sign change of the margin between two
  /// neighbouring grid points rather than a grid value inside the band.
  bool crossing = false;
};

struct ResonanceReport {
  std::vector<ResonanceFlag> flags;
  SlowField froude;
  /// Pointwise Froude window over the active |k| range.
  SlowField window_min;
  SlowField window_max;

  bool certified() const noexcept { return flags.empty(); }
};

/// Flags, for every slow point and active mode, |margin| <= 1/B_k, and
/// every sign change of the margin between grid neighbours (reported at the
/// nearer point with margin 0 and the interpolated root as position).
ResonanceReport certify(const SurfaceState& surface, const BottomProfile& b,
                        const NonresonanceGuard& guard);

/// Fr^2 = |V0|^2 / h0.
SlowField froude(const SurfaceState& surface);

/// (Fr^2_min, Fr^2_max) = (tanh(h0 k_max)/(h0 k_max), tanh(h0 k_min)/(h0 k_min)).
std::pair<double, double> froude_window(double h0, double k_min, double k_max);

/// Speed |V0| along k at which mode k is exactly resonant.
double resonant_speed(double h0, const Mode& k);

struct MonteCarloRange {
  double zeta_min = -0.5;
  double zeta_max = 0.5;
  double speed_max = 1.5;
};

/// Fraction of random constant states (zeta0, V0) at which some active
/// bottom mode violates the guard.
double resonant_fraction(const BottomProfile& b, const NonresonanceGuard& guard,
                         std::size_t samples, std::uint64_t seed, const MonteCarloRange& range = {});

}  // namespace shom
