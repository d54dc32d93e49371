#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's spectral machinery.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Least-squares slope of y against x.
inline double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Periodic centered difference.
inline std::vector<double> centered_difference(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2 * dx);
  return d;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Bisection root of a continuous function with a sign change on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-14) {
  double fa = f(a);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Classical RK4 for a linear system y' = A y + c with complex 2-vectors.
struct Linear2 {
  std::array<std::array<cplx, 2>, 2> a;
  std::array<cplx, 2> c;
  std::array<cplx, 2> operator()(const std::array<cplx, 2>& y) const {
    return {a[0][0] * y[0] + a[0][1] * y[1] + c[0], a[1][0] * y[0] + a[1][1] * y[1] + c[1]};
  }
};

inline std::array<cplx, 2> rk4(const Linear2& f, std::array<cplx, 2> y, double t, int steps) {
  const double h = t / steps;
  auto axpy = [](const std::array<cplx, 2>& y, double s, const std::array<cplx, 2>& k) {
    return std::array<cplx, 2>{y[0] + s * k[0], y[1] + s * k[1]};
  };
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(y);
    const auto k2 = f(axpy(y, h / 2, k1));
    const auto k3 = f(axpy(y, h / 2, k2));
    const auto k4 = f(axpy(y, h, k3));
    for (int j = 0; j < 2; ++j) y[j] += h / 6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return y;
}

/// Direct O(N^2) DFT with 1/N normalisation, for cross-checking the FFT.
inline std::vector<cplx> naive_dft(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<cplx> c(n);
  for (std::size_t m = 0; m < n; ++m) {
    cplx s{};
    for (std::size_t j = 0; j < n; ++j)
      s += f[j] * std::polar(1.0, -2.0 * M_PI * double(m * j % n) / double(n));
    c[m] = s / double(n);
  }
  return c;
}

}  // namespace oracle
