#include "shom/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shom/errors.hpp"

namespace shom {

SlowGrid::SlowGrid(int dim, double length, int n_points)
    : dim_(dim), length_(length), n_(n_points) {
  if (dim != 1 && dim != 2) throw InvalidArgument("SlowGrid: dim must be 1 or 2");
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidArgument("SlowGrid: box length must be positive");
  if (n_points < 8 || n_points % 2 != 0)
    throw InvalidArgument("SlowGrid: n_points must be even and >= 8, got " +
                          std::to_string(n_points));
}

std::array<int, 2> SlowGrid::indices(std::size_t idx) const noexcept {
  if (dim_ == 1) return {static_cast<int>(idx), 0};
  return {static_cast<int>(idx % n_), static_cast<int>(idx / n_)};
}

Vec2 SlowGrid::point(std::size_t idx) const noexcept {
  auto [i, j] = indices(idx);
  return {coord(i), dim_ == 1 ? 0.0 : coord(j)};
}

double SlowGrid::wavenumber(int m) const noexcept {
  return 2.0 * std::numbers::pi * signed_index(m) / length_;
}

Vec2 SlowGrid::wavevector(std::size_t idx) const noexcept {
  auto [i, j] = indices(idx);
  return {wavenumber(i), dim_ == 1 ? 0.0 : wavenumber(j)};
}

bool SlowGrid::touches_nyquist(std::size_t idx) const noexcept {
  auto [i, j] = indices(idx);
  return is_nyquist(i) || (dim_ == 2 && is_nyquist(j));
}

}  // namespace shom
