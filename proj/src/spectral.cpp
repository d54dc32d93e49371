#include "shom/spectral.hpp"

#include <cmath>
#include <sstream>

#include "shom/errors.hpp"
#include "shom/parallel.hpp"

namespace shom {
namespace {

std::vector<int> shape_of(const SlowGrid& g) {
  return g.dim() == 1 ? std::vector<int>{g.n()} : std::vector<int>{g.n(), g.n()};
}

struct AxisTarget {
  int index;
  double weight;
};

// Where DFT index m of an n-point axis lands on an n_to-point axis.
std::vector<AxisTarget> axis_targets(int m, int n, int n_to, bool keep_nyquist) {
  const int s = m < n / 2 ? m : m - n;
  if (n_to > n) {
    if (m == n / 2) return {{n / 2, 0.5}, {n_to - n / 2, 0.5}};
    return {{s >= 0 ? s : n_to + s, 1.0}};
  }
  if (n_to == n) {
    if (m == n / 2 && !keep_nyquist) return {};
    return {{m, 1.0}};
  }
  if (std::abs(s) < n_to / 2) return {{s >= 0 ? s : n_to + s, 1.0}};
  if (std::abs(s) == n_to / 2 && keep_nyquist) return {{n_to / 2, 1.0}};
  return {};
}

// Moves a spectrum between grids of the same box that differ in resolution.
std::vector<cplx> transfer(const std::vector<cplx>& c, const SlowGrid& from, const SlowGrid& to,
                           bool keep_nyquist) {
  std::vector<cplx> out(to.size());
  const int n = from.n();
  const int m = to.n();
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    if (c[idx] == cplx{}) continue;
    auto [i, j] = from.indices(idx);
    auto tx = axis_targets(i, n, m, keep_nyquist);
    if (from.dim() == 1) {
      for (auto t : tx) out[static_cast<std::size_t>(t.index)] += t.weight * c[idx];
      continue;
    }
    auto ty = axis_targets(j, n, m, keep_nyquist);
    for (auto a : tx)
      for (auto b : ty)
        out[static_cast<std::size_t>(a.index) +
            static_cast<std::size_t>(m) * static_cast<std::size_t>(b.index)] +=
            a.weight * b.weight * c[idx];
  }
  return out;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

void require_positive_depth(double h0, const char* where) {
  if (!(h0 > 0.0) || !std::isfinite(h0))
    throw InvalidArgument(std::string(where) + ": h0 must be positive");
}

}  // namespace

SlowField apply_multiplier(const SlowField& f, const SlowSymbol& symbol) {
  const SlowGrid& g = f.grid();
  std::vector<cplx> c = f.spectrum();
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    cplx s = symbol(g.wavevector(idx));
    if (!finite(s)) {
      auto [i, j] = g.indices(idx);
      std::ostringstream msg;
      msg << "apply_multiplier: symbol not finite at mode (" << g.signed_index(i) << ","
          << (g.dim() == 2 ? g.signed_index(j) : 0) << ")";
      throw SpectralError(msg.str());
    }
    if (g.touches_nyquist(idx)) s = s.real();
    c[idx] *= s;
  }
  return SlowField::from_spectrum(g, std::move(c));
}

TorusSpectrum apply_multiplier(const TorusSpectrum& f, const TorusSymbol& symbol) {
  TorusSpectrum out = f;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Mode k = f.mode(i);
    const cplx s = symbol(k);
    if (!finite(s))
      throw SpectralError("apply_multiplier: symbol not finite at k = (" +
                          std::to_string(k[0]) + "," + std::to_string(k[1]) + ")");
    out[i] *= s;
  }
  return out;
}

SlowField derivative(const SlowField& f, int axis) {
  if (axis < 0 || axis >= f.grid().dim()) throw InvalidArgument("derivative: bad axis");
  return apply_multiplier(f, [axis](const Vec2& xi) { return cplx(0.0, xi[axis]); });
}

std::vector<SlowField> gradient(const SlowField& f) {
  std::vector<SlowField> g;
  for (int a = 0; a < f.grid().dim(); ++a) g.push_back(derivative(f, a));
  return g;
}

SlowField divergence(const std::vector<SlowField>& v) {
  if (v.empty()) throw InvalidArgument("divergence: empty vector field");
  if (static_cast<int>(v.size()) != v[0].grid().dim())
    throw InvalidArgument("divergence: component count must equal dim");
  SlowField out = derivative(v[0], 0);
  for (std::size_t a = 1; a < v.size(); ++a) out += derivative(v[a], static_cast<int>(a));
  return out;
}

SlowField laplacian(const SlowField& f) {
  return apply_multiplier(f, [](const Vec2& xi) { return cplx(-(xi[0] * xi[0] + xi[1] * xi[1])); });
}

SlowField dealiased_product(const SlowField& a, const SlowField& b) {
  require_same_grid(a, b, "dealiased_product");
  const SlowGrid& g = a.grid();
  int m = (3 * g.n() + 1) / 2;
  if (m % 2) ++m;
  const SlowGrid padded(g.dim(), g.length(), m);
  auto ua = transfer(a.spectrum(), g, padded, true);
  auto ub = transfer(b.spectrum(), g, padded, true);
  const auto shape = shape_of(padded);
  fft_inverse(ua, shape);
  fft_inverse(ub, shape);
  for (std::size_t i = 0; i < ua.size(); ++i) ua[i] = ua[i].real() * ub[i].real();
  fft_forward(ua, shape);
  const double scale = 1.0 / static_cast<double>(ua.size());
  for (auto& z : ua) z *= scale;
  return SlowField::from_spectrum(g, transfer(ua, padded, g, false));
}

SlowField resample(const SlowField& f, int n_points) {
  const SlowGrid to(f.grid().dim(), f.grid().length(), n_points);
  if (to.n() == f.grid().n()) return f;
  return SlowField::from_spectrum(to, transfer(f.spectrum(), f.grid(), to, true));
}

SlowField shifted(const SlowField& f, const Vec2& shift) {
  const SlowGrid& g = f.grid();
  std::vector<cplx> c = f.spectrum();
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    auto ij = g.indices(idx);
    cplx factor = 1.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double phase = g.wavenumber(ij[a]) * shift[a];
      factor *= g.is_nyquist(ij[a]) ? cplx(std::cos(phase)) : std::polar(1.0, phase);
    }
    c[idx] *= factor;
  }
  return SlowField::from_spectrum(g, std::move(c));
}

double sobolev_norm(const SlowField& f, double s) {
  if (s < -1.0) throw InvalidArgument("sobolev_norm: s must be >= -1");
  const SlowGrid& g = f.grid();
  const auto& c = f.spectrum();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const Vec2 xi = g.wavevector(idx);
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + xi[0] * xi[0] + xi[1] * xi[1], s);
    sum += w * std::norm(c[idx]);
  }
  return std::sqrt(std::pow(g.length(), g.dim()) * sum);
}

double l2_norm(const SlowField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s * f.grid().cell_volume());
}

double integral(const SlowField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double max_abs(const SlowField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

TorusSpectrum op_dn_tanh(double h0, const TorusSpectrum& psi) {
  require_positive_depth(h0, "op_dn_tanh");
  return apply_multiplier(psi, [h0](const Mode& k) {
    const double a = mode_norm(k);
    return cplx(a * std::tanh(h0 * a));
  });
}

TorusSpectrum op_sech(double h0, const TorusSpectrum& b) {
  require_positive_depth(h0, "op_sech");
  return apply_multiplier(b, [h0](const Mode& k) { return cplx(sech(h0 * mode_norm(k))); });
}

std::vector<TorusSpectrum> riesz_gradient(const TorusSpectrum& f) {
  if (std::abs(f.zero_mode()) > 1e-14 * std::max(1.0, f.max_abs()))
    throw SpectralError("riesz_gradient: input must have zero mean");
  std::vector<TorusSpectrum> out;
  for (int j = 0; j < f.dim(); ++j)
    out.push_back(apply_multiplier(f, [j](const Mode& k) {
      const double a = mode_norm(k);
      return a == 0.0 ? cplx{} : cplx(0.0, k[j] / a);
    }));
  return out;
}

std::vector<TorusSpectrum> torus_gradient(const TorusSpectrum& f) {
  std::vector<TorusSpectrum> out;
  for (int j = 0; j < f.dim(); ++j)
    out.push_back(apply_multiplier(f, [j](const Mode& k) { return cplx(0.0, k[j]); }));
  return out;
}

TorusSpectrum torus_divergence(const std::vector<TorusSpectrum>& v) {
  if (v.empty() || static_cast<int>(v.size()) != v[0].dim())
    throw InvalidArgument("torus_divergence: component count must equal dim");
  TorusSpectrum out = torus_gradient(v[0])[0];
  if (v.size() == 2) out += torus_gradient(v[1])[1];
  return out;
}

std::vector<double> torus_samples(const TorusSpectrum& f, int n) {
  if (n < 2) throw InvalidArgument("torus_samples: n must be >= 2");
  const int d = f.dim();
  const std::size_t total = d == 1 ? n : static_cast<std::size_t>(n) * n;
  std::vector<cplx> buf(total);
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Mode k = f.mode(i);
    const std::size_t at = d == 1 ? wrap(k[0])
                                  : wrap(k[0]) + static_cast<std::size_t>(n) * wrap(k[1]);
    buf[at] += f[i];
  }
  fft_inverse(buf, d == 1 ? std::vector<int>{n} : std::vector<int>{n, n});
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = buf[i].real();
  return out;
}

TorusSpectrum torus_from_samples(const std::vector<double>& samples, int dim, int n,
                                 int cutoff) {
  if (2 * cutoff >= n) throw InvalidArgument("torus_from_samples: cutoff must be < n/2");
  const std::size_t total = dim == 1 ? n : static_cast<std::size_t>(n) * n;
  if (samples.size() != total) throw InvalidArgument("torus_from_samples: size mismatch");
  std::vector<cplx> buf(samples.begin(), samples.end());
  fft_forward(buf, dim == 1 ? std::vector<int>{n} : std::vector<int>{n, n});
  TorusSpectrum out(dim, cutoff, true);
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Mode k = out.mode(i);
    const std::size_t at = dim == 1 ? wrap(k[0])
                                    : wrap(k[0]) + static_cast<std::size_t>(n) * wrap(k[1]);
    out[i] = buf[at] * scale;
  }
  return out;
}

SlowField realize(const MultiscaleField& f, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("realize: gamma must be positive");
  const SlowGrid& g = f.grid();
  std::vector<double> v(g.size());
  parallel_for(g.size(), [&](std::size_t p) {
    const Vec2 x = g.point(p);
    v[p] = f.at(p).evaluate({x[0] / gamma, x[1] / gamma}).real();
  });
  return SlowField(g, std::move(v));
}

SlowField realize(const TorusSpectrum& s, double gamma, const SlowGrid& grid) {
  if (!(gamma > 0.0)) throw InvalidArgument("realize: gamma must be positive");
  std::vector<double> v(grid.size());
  parallel_for(grid.size(), [&](std::size_t p) {
    const Vec2 x = grid.point(p);
    v[p] = s.evaluate({x[0] / gamma, x[1] / gamma}).real();
  });
  return SlowField(grid, std::move(v));
}

double oscillatory_average_gap(const TorusSpectrum& g, const SlowField& f, double gamma) {
  const SlowField gr = realize(g, gamma, f.grid());
  const double mean = g.zero_mode().real();
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    a += gr[i] * f[i];
    b += f[i];
  }
  const double dv = f.grid().cell_volume();
  return std::abs(a * dv - mean * b * dv);
}

}  // namespace shom
