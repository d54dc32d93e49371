#pragma once

#include <array>
#include <cstddef>

namespace shom {

using Vec2 = std::array<double, 2>;
using Mode = std::array<int, 2>;

/// Uniform periodic grid on the slow box [-L/2, L/2)^d. Both axes share
/// length and point count in d = 2.
class SlowGrid {
 public:
  SlowGrid(int dim, double length, int n_points);

  int dim() const noexcept { return dim_; }
  double length() const noexcept { return length_; }
  int n() const noexcept { return n_; }
  double dx() const noexcept { return length_ / n_; }
  double cell_volume() const noexcept { return dim_ == 1 ? dx() : dx() * dx(); }
  std::size_t size() const noexcept {
    return dim_ == 1 ? static_cast<std::size_t>(n_)
                     : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }

  double coord(int i) const noexcept { return -0.5 * length_ + i * dx(); }
  /// Grid point of flat index idx; second component 0 in d = 1.
  Vec2 point(std::size_t idx) const noexcept;
  /// Per-axis indices of flat index idx.
  std::array<int, 2> indices(std::size_t idx) const noexcept;

  /// Signed frequency index in [-n/2, n/2) of DFT index m.
  int signed_index(int m) const noexcept { return m < n_ / 2 ? m : m - n_; }
  bool is_nyquist(int m) const noexcept { return m == n_ / 2; }
  double wavenumber(int m) const noexcept;
  /// Wavevector xi of flat spectral index idx.
  Vec2 wavevector(std::size_t idx) const noexcept;
  bool touches_nyquist(std::size_t idx) const noexcept;

  friend bool operator==(const SlowGrid& a, const SlowGrid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int dim_;
  double length_;
  int n_;
};

}  // namespace shom
