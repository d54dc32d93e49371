#pragma once

#include <functional>
#include <vector>

#include "shom/grid.hpp"
#include "shom/multiscale_field.hpp"
#include "shom/slow_field.hpp"
#include "shom/torus_spectrum.hpp"

namespace shom {

using SlowSymbol = std::function<cplx(const Vec2& xi)>;
using TorusSymbol = std::function<cplx(const Mode& k)>;

/// c_m -> symbol(xi_m) c_m. At a Nyquist index only Re(symbol) is applied,
/// which keeps the output real (odd-order derivatives drop that mode).
/// Throws SpectralError naming the mode if the symbol is not finite.
SlowField apply_multiplier(const SlowField& f, const SlowSymbol& symbol);
TorusSpectrum apply_multiplier(const TorusSpectrum& f, const TorusSymbol& symbol);

SlowField derivative(const SlowField& f, int axis);
std::vector<SlowField> gradient(const SlowField& f);
SlowField divergence(const std::vector<SlowField>& v);
SlowField laplacian(const SlowField& f);

/// Pointwise product with 3/2 zero padding; the result carries no aliased
/// quadratic interactions.
SlowField dealiased_product(const SlowField& a, const SlowField& b);

/// Trigonometric interpolant resampled on n_points per axis (same box).
SlowField resample(const SlowField& f, int n_points);
/// g(X) = f(X + shift) evaluated through the trigonometric interpolant.
SlowField shifted(const SlowField& f, const Vec2& shift);

/// ( L^d sum_xi (1+|xi|^2)^s |c_xi|^2 )^{1/2}; s = 0 is the L2 norm.
double sobolev_norm(const SlowField& f, double s);
/// Rectangle-rule norm (sum f^2 dx^d)^{1/2}.
double l2_norm(const SlowField& f);
double integral(const SlowField& f);
double max_abs(const SlowField& f);

/// |k| tanh(h0 |k|) multiplier.
TorusSpectrum op_dn_tanh(double h0, const TorusSpectrum& psi);
/// sech(h0 |k|) multiplier.
TorusSpectrum op_sech(double h0, const TorusSpectrum& b);
/// Components i k_j / |k|; requires a zero mean (throws SpectralError).
std::vector<TorusSpectrum> riesz_gradient(const TorusSpectrum& f);
std::vector<TorusSpectrum> torus_gradient(const TorusSpectrum& f);
TorusSpectrum torus_divergence(const std::vector<TorusSpectrum>& v);
/// Samples on the uniform torus grid with n points per axis.
std::vector<double> torus_samples(const TorusSpectrum& f, int n);
/// Projection of uniform torus samples onto |k|_inf <= cutoff.
TorusSpectrum torus_from_samples(const std::vector<double>& samples, int dim, int n,
                                 int cutoff);

/// f(X, X/gamma) on the slow grid of f.
SlowField realize(const MultiscaleField& f, double gamma);
/// g(X/gamma) on `grid`.
SlowField realize(const TorusSpectrum& g, double gamma, const SlowGrid& grid);

/// | int g(X/gamma) f(X) dX - mean(g) int f dX |, by the rectangle rule on
/// the grid of f (spectrally accurate for smooth, box-contained f).
double oscillatory_average_gap(const TorusSpectrum& g, const SlowField& f, double gamma);

}  // namespace shom
