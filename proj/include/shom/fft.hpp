#pragma once

#include <complex>
#include <vector>

namespace shom {

using cplx = std::complex<double>;

/// Unnormalised in-place complex DFT over a 1D or 2D array. The layout
/// is x-fastest: element (ix, iy) lives at ix + nx * iy. `shape` lists the
/// per-axis sizes in x, y order. Plans are cached per shape and direction.
void fft_forward(std::vector<cplx>& data, const std::vector<int>& shape);
void fft_inverse(std::vector<cplx>& data, const std::vector<int>& shape);

}  // namespace shom
