#pragma once

#include <complex>
#include <vector>

#include "shom/fft.hpp"
#include "shom/grid.hpp"

namespace shom {

/// Truncated Fourier coefficients on the fast torus (R/2piZ)^d, retaining
/// every k with |k|_inf <= K. Storage is dense, index (k1+K) + (2K+1)(k2+K).
/// The field is  f(Y) = sum_k c_k exp(i k.Y), so its torus L2 norm is
/// (2pi)^{d/2} (sum |c_k|^2)^{1/2}.
class TorusSpectrum {
 public:
  TorusSpectrum() = default;
  TorusSpectrum(int dim, int cutoff, bool real = true);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  bool is_real() const noexcept { return real_; }
  void set_real(bool real) noexcept { real_ = real; }
  int side() const noexcept { return 2 * cutoff_ + 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  bool contains(const Mode& k) const noexcept;
  std::size_t index(const Mode& k) const;
  Mode mode(std::size_t idx) const noexcept;

  /// Coefficient at k, zero outside the cutoff.
  cplx operator()(const Mode& k) const noexcept;
  cplx& at(const Mode& k);
  void set(const Mode& k, cplx value) { at(k) = value; }
  cplx& operator[](std::size_t idx) noexcept { return coeffs_[idx]; }
  cplx operator[](std::size_t idx) const noexcept { return coeffs_[idx]; }
  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

  cplx zero_mode() const noexcept { return (*this)(Mode{0, 0}); }
  bool is_hermitian(double tol = 1e-14) const;
  /// Largest |c_k| over the retained modes.
  double max_abs() const noexcept;

  /// Sum_k c_k exp(i k.Y); real part for real-flagged spectra.
  cplx evaluate(const Vec2& y) const;
  double evaluate_real(const Vec2& y) const { return evaluate(y).real(); }

  double coefficient_norm() const noexcept;
  double l2_norm() const noexcept;

  /// Same spectrum with a larger or smaller cutoff (truncating or padding).
  TorusSpectrum with_cutoff(int cutoff) const;

  TorusSpectrum& operator+=(const TorusSpectrum& o);
  TorusSpectrum& operator-=(const TorusSpectrum& o);
  TorusSpectrum& operator*=(cplx a);

 private:
  void require_compatible(const TorusSpectrum& o) const;

  int dim_ = 1;
  int cutoff_ = 0;
  bool real_ = true;
  std::vector<cplx> coeffs_;
};

TorusSpectrum operator+(TorusSpectrum a, const TorusSpectrum& b);
TorusSpectrum operator-(TorusSpectrum a, const TorusSpectrum& b);
TorusSpectrum operator*(cplx s, TorusSpectrum a);

/// |k| as a double.
double mode_norm(const Mode& k) noexcept;
double dot(const Mode& k, const Vec2& v) noexcept;

}  // namespace shom
