#pragma once

#include <vector>

#include "shom/slow_field.hpp"
#include "shom/torus_spectrum.hpp"

namespace shom {

/// f(X, Y): one TorusSpectrum per slow grid point, all sharing (dim, K).
class MultiscaleField {
 public:
  MultiscaleField(const SlowGrid& grid, int cutoff, bool real = true);

  const SlowGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  int cutoff() const noexcept { return cutoff_; }
  bool is_real() const noexcept { return real_; }
  std::size_t points() const noexcept { return grid_.size(); }

  TorusSpectrum at(std::size_t point) const;
  void set(std::size_t point, const TorusSpectrum& spectrum);
  cplx coeff(std::size_t point, const Mode& k) const;

  bool has_zero_fast_mean(double tol = 0.0) const;
  double max_coefficient() const noexcept;

 private:
  SlowGrid grid_;
  int cutoff_;
  bool real_;
  std::size_t stride_;
  std::vector<cplx> data_;
};

}  // namespace shom
