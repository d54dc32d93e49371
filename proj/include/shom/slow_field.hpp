#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "shom/fft.hpp"
#include "shom/grid.hpp"

namespace shom {

/// Real field on a SlowGrid. The spectrum is computed on first request and
/// cached; any mutable access drops the cache.
///
/// Spectral convention: c_m = (1/N) sum_j f_j exp(-i xi_m (x_j + L/2)), so
/// the trigonometric interpolant is sum_m c_m exp(i xi_m (x + L/2)) and
/// Plancherel reads  int f^2 dX = L^d sum_m |c_m|^2.
class SlowField {
 public:
  explicit SlowField(const SlowGrid& grid, double value = 0.0);
  SlowField(const SlowGrid& grid, std::vector<double> values);

  static SlowField from_function(const SlowGrid& grid,
                                 const std::function<double(const Vec2&)>& f);
  /// Inverse transform; the imaginary part of the result is discarded.
  static SlowField from_spectrum(const SlowGrid& grid, std::vector<cplx> spectrum);

  const SlowGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& mutable_values();
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& at(std::size_t i);

  const std::vector<cplx>& spectrum() const;

  SlowField& operator+=(const SlowField& o);
  SlowField& operator-=(const SlowField& o);
  SlowField& operator*=(double a);

 private:
  struct SpectrumCache {
    std::once_flag once;
    std::vector<cplx> coeffs;
  };

  SlowGrid grid_;
  std::vector<double> values_;
  mutable std::shared_ptr<SpectrumCache> cache_;
};

SlowField operator+(SlowField a, const SlowField& b);
SlowField operator-(SlowField a, const SlowField& b);
SlowField operator*(double s, SlowField a);
SlowField operator*(SlowField a, double s);

/// Pointwise product without dealiasing; use for fields that are already
/// resolved on the grid or for non-spectral quantities.
SlowField pointwise(const SlowField& a, const SlowField& b);
SlowField map(const SlowField& a, const std::function<double(double)>& f);

/// The grid of `a` and `b` must agree; throws InvalidArgument otherwise.
void require_same_grid(const SlowField& a, const SlowField& b, const char* where);

}  // namespace shom
