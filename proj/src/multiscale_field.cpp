#include "shom/multiscale_field.hpp"

#include <algorithm>
#include <cmath>

#include "shom/errors.hpp"

namespace shom {

MultiscaleField::MultiscaleField(const SlowGrid& grid, int cutoff, bool real)
    : grid_(grid), cutoff_(cutoff), real_(real) {
  if (cutoff < 0) throw InvalidArgument("MultiscaleField: cutoff must be >= 0");
  stride_ = TorusSpectrum(grid.dim(), cutoff).size();
  data_.assign(stride_ * grid.size(), cplx{});
}

TorusSpectrum MultiscaleField::at(std::size_t point) const {
  TorusSpectrum s(dim(), cutoff_, real_);
  const std::size_t base = point * stride_;
  for (std::size_t i = 0; i < stride_; ++i) s[i] = data_[base + i];
  return s;
}

void MultiscaleField::set(std::size_t point, const TorusSpectrum& spectrum) {
  if (spectrum.dim() != dim() || spectrum.cutoff() != cutoff_)
    throw InvalidArgument("MultiscaleField: spectrum has mismatched dim or cutoff");
  if (point >= points()) throw InvalidArgument("MultiscaleField: point out of range");
  const std::size_t base = point * stride_;
  for (std::size_t i = 0; i < stride_; ++i) data_[base + i] = spectrum[i];
}

cplx MultiscaleField::coeff(std::size_t point, const Mode& k) const {
  TorusSpectrum probe(dim(), cutoff_);
  if (!probe.contains(k)) return {};
  return data_[point * stride_ + probe.index(k)];
}

bool MultiscaleField::has_zero_fast_mean(double tol) const {
  TorusSpectrum probe(dim(), cutoff_);
  const std::size_t zero = probe.index(Mode{0, 0});
  for (std::size_t p = 0; p < points(); ++p)
    if (std::abs(data_[p * stride_ + zero]) > tol) return false;
  return true;
}

double MultiscaleField::max_coefficient() const noexcept {
  double m = 0.0;
  for (const auto& c : data_) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace shom
