#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shom/slow_field.hpp"
#include "shom/torus_spectrum.hpp"

namespace shom {

/// Modes below this magnitude count as absent from the bottom.
inline constexpr double kActiveModeFloor = 1e-14;

struct ModeLess {
  bool operator()(const Mode& a, const Mode& b) const noexcept {
    return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
  }
};
using ModeMap = std::map<Mode, cplx, ModeLess>;

/// Mean-free, real bottom variation b(Y) on the fast torus.
class BottomProfile {
 public:
  /// Flat bottom.
  BottomProfile(int dim, int cutoff);

  /// Validates a Hermitian, mean-free coefficient map. A negative cutoff
  /// selects default_cutoff(coeffs).
  static BottomProfile from_modes(const ModeMap& coeffs, int dim, int cutoff = -1);

  const TorusSpectrum& spectrum() const noexcept { return spectrum_; }
  int dim() const noexcept { return spectrum_.dim(); }
  int cutoff() const noexcept { return spectrum_.cutoff(); }
  /// Torus L2 norm, (2pi)^{d/2} (sum |b_k|^2)^{1/2}.
  double amplitude_norm() const noexcept { return amplitude_norm_; }
  /// Modes with |b_k| > kActiveModeFloor, both members of each +-k pair.
  const std::vector<Mode>& active_modes() const noexcept { return active_; }
  bool is_flat() const noexcept { return active_.empty(); }
  /// Largest |k|_inf among the active modes (0 when flat).
  int max_active_mode() const noexcept;

  BottomProfile scaled(double c) const;

 private:
  explicit BottomProfile(TorusSpectrum s);

  TorusSpectrum spectrum_;
  double amplitude_norm_ = 0.0;
  std::vector<Mode> active_;
};

/// max(number of nonzero entries + 8, largest |k|_inf).
int default_cutoff(const ModeMap& coeffs);

/// b(X/gamma) on the slow grid.
SlowField realize_bottom(const BottomProfile& b, double gamma, const SlowGrid& grid);
/// d/dX_axis of b(X/gamma), i.e. (1/gamma) (d_axis b)(X/gamma).
SlowField realize_bottom_derivative(const BottomProfile& b, double gamma, const SlowGrid& grid,
                                    int axis);

/// a cos(Y_1).
BottomProfile cosine_bottom(int dim, double amplitude = 1.0, int cutoff = -1);
/// a (cos(Y_1) + cos(2 Y_1) / 2) in d = 1; a (cos(Y_1) + cos(Y_2) / 2) in d = 2.
BottomProfile two_mode_bottom(int dim, double amplitude = 1.0, int cutoff = -1);
/// |b_k| = amplitude e^{-decay |k|} for 1 <= |k|_inf <= kmax, phases drawn
/// from a seeded generator and mirrored so that b is real.
BottomProfile random_phase_bottom(int dim, double amplitude, double decay, int kmax,
                                  std::uint64_t seed, int cutoff = -1);
BottomProfile flat_bottom(int dim, int cutoff = 8);

/// Named preset: cos | two_mode | random_phase | flat.
BottomProfile bottom_preset(const std::string& name, int dim, double amplitude, double decay,
                            int kmax, std::uint64_t seed, int cutoff = -1);

}  // namespace shom
