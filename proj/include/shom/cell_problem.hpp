#pragma once

#include <optional>
#include <vector>

#include "shom/bathymetry.hpp"
#include "shom/slow_field.hpp"
#include "shom/torus_spectrum.hpp"

namespace shom {

/// Data that determines the fast cell solution in closed form.
struct CellData {
  double h0 = 1.0;
  TorusSpectrum psi1;
  TorusSpectrum bottom;
  Vec2 grad_psi0{0.0, 0.0};
};

/// Per-mode vertical profiles phi_k(z) on z in [-1, 0], sampled on a
/// uniform grid of nz + 1 nodes. Closed-form solutions also keep their
/// defining data so they can be evaluated at any z.
class VerticalProfileField {
 public:
  VerticalProfileField(std::vector<TorusSpectrum> levels, std::optional<CellData> closed_form);

  int dim() const noexcept { return levels_.front().dim(); }
  int cutoff() const noexcept { return levels_.front().cutoff(); }
  int nz() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  double dz() const noexcept { return 1.0 / nz(); }
  double z(int j) const noexcept { return -1.0 + j * dz(); }
  const TorusSpectrum& level(int j) const { return levels_.at(static_cast<std::size_t>(j)); }
  bool has_closed_form() const noexcept { return closed_form_.has_value(); }
  const std::optional<CellData>& closed_form() const noexcept { return closed_form_; }

  /// Profile at any z: exact when closed form is known, else linear
  /// interpolation between levels.
  TorusSpectrum at(double z) const;
  /// d/dz: exact when closed form is known, else second-order differences.
  TorusSpectrum dz_at(double z) const;

  /// Values on the uniform torus grid with ny points per axis at every
  /// level, laid out level-major: index = point + ny^d * j.
  std::vector<double> physical_samples(int ny) const;

 private:
  std::vector<TorusSpectrum> levels_;
  std::optional<CellData> closed_form_;
};

/// Closed-form cell solution. For each k != 0,
///   phi_k(z) = C_k(z) psi1_k + S_k(z) (i k.grad_psi0 / |k|) b_k
/// with C = cosh(h0 (z+1)|k|)/cosh(h0|k|), S = sinh(h0 z|k|)/cosh(h0|k|),
/// both evaluated in a form that never overflows. Rejects psi1 with
/// nonzero mean.
VerticalProfileField solve_cell(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                                const Vec2& grad_psi0, int nz = 64);

/// Interior operator defect max |(-h0^2|k|^2 + D_zz) phi_k| plus the bottom
/// condition defect (and the top trace defect when psi1 is known), all by
/// second-order differences of the vertical samples.
double cell_residual(const VerticalProfileField& phi, double h0, const BottomProfile& b,
                     const Vec2& grad_psi0);

/// (1/h0) d_z phi at z = 0:  |D|tanh(h0|D|) psi1 + grad_psi0 . grad_Y sech(h0|D|) b.
TorusSpectrum dn_trace_fast(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                            const Vec2& grad_psi0);

/// Slow first interior corrector -h0(X)^2 (z^2/2 + z) Laplacian psi0(X).
class SlowColumnProfile {
 public:
  SlowColumnProfile(SlowField coefficient, int nz);
  const SlowGrid& grid() const noexcept { return coefficient_.grid(); }
  int nz() const noexcept { return nz_; }
  double z(int j) const noexcept { return -1.0 + j / static_cast<double>(nz_); }
  /// -h0^2 Laplacian psi0 at the slow points.
  const SlowField& coefficient() const noexcept { return coefficient_; }
  double value(std::size_t point, double z) const noexcept;
  double dz(std::size_t point, double z) const noexcept;
  SlowField at(double z) const;

 private:
  SlowField coefficient_;
  int nz_;
};

SlowColumnProfile phi0_first_corrector(const SlowField& h0, const SlowField& psi0, int nz = 64);

/// Result of the finite-difference cell solve.
struct CellOracleSolution {
  int ny = 0;
  int nz = 0;
  /// Grid values, index = point + ny^d * j for j = 0..nz (top row is psi1).
  std::vector<double> samples;
  VerticalProfileField profile;
  long iterations = 0;
  double residual = 0.0;
};

/// Second-order finite differences for (h0^2 Lap_Y + d_zz) phi = 0 on the
/// torus times [-1, 0], phi = psi1 on top and (1/h0) d_z phi = grad_psi0 .
/// grad_Y b at the bottom (ghost-node closure). d = 1 uses a sparse LDLT
/// factorisation, d = 2 conjugate gradients.
CellOracleSolution oracle_cell_solve(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                                     const Vec2& grad_psi0, int ny, int nz);

/// Relative discrete L2 distance between the oracle samples and the closed
/// form sampled on the same nodes.
double cell_oracle_error(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                         const Vec2& grad_psi0, int ny, int nz);

}  // namespace shom
