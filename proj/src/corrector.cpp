#include "shom/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shom/errors.hpp"
#include "shom/parallel.hpp"
#include "shom/spectral.hpp"

namespace shom {
namespace {

constexpr double kSeriesSwitch = 1e-6;

int resolve_cutoff(const BottomProfile& b, int cutoff) { return cutoff < 0 ? b.cutoff() : cutoff; }

void require_zero_mean(const TorusSpectrum& s, const char* where) {
  if (std::abs(s.zero_mode()) > 1e-14 * std::max(1.0, s.max_abs()))
    throw InvalidArgument(std::string(where) + ": input must have zero fast mean");
}

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

}  // namespace

double mode_frequency(double h0, const Mode& k) {
  const double nk = mode_norm(k);
  return std::sqrt(nk * std::tanh(h0 * nk));
}

ModeState to_characteristic(const Mode& k, cplx zeta_hat, cplx psi_hat, double h0, const Vec2& V0) {
  const double w = mode_frequency(h0, k);
  if (!(w > 0.0)) throw InvalidArgument("to_characteristic: omega_k must be positive (k != 0)");
  const cplx u = zeta_hat / std::sqrt(w);
  const cplx v = psi_hat * std::sqrt(w);
  const cplx i(0.0, 1.0);
  return {k, u + i * v, u - i * v, w, dot(k, V0)};
}

std::pair<cplx, cplx> from_characteristic(const ModeState& m) {
  const cplx u = 0.5 * (m.Z + m.W);
  const cplx v = (m.Z - m.W) / cplx(0.0, 2.0);
  return {u * std::sqrt(m.omega), v / std::sqrt(m.omega)};
}

cplx duhamel_factor(double tau, double theta) {
  const double x = tau * theta;
  if (std::abs(x) < kSeriesSwitch) return tau * cplx(1.0 - x * x / 6.0, -0.5 * x);
  // e^{-ix} - 1 = -2i sin(x/2) e^{-ix/2}, free of cancellation.
  return (2.0 * std::sin(0.5 * x) / theta) * std::polar(1.0, -0.5 * x);
}

ModeState propagate_mode(const ModeState& m, double tau, cplx f_hat) {
  if (!(m.omega > 0.0)) throw InvalidArgument("propagate_mode: omega_k must be positive");
  const double theta_z = m.omega + m.advection;
  const double theta_w = m.omega - m.advection;
  const cplx g = f_hat / std::sqrt(m.omega);
  ModeState out = m;
  out.Z = std::polar(1.0, -tau * theta_z) * m.Z + duhamel_factor(tau, theta_z) * g;
  out.W = std::polar(1.0, tau * theta_w) * m.W + duhamel_factor(tau, -theta_w) * g;
  return out;
}

TorusSpectrum forcing(double h0, const Vec2& V0, const BottomProfile& b, int cutoff) {
  if (!(h0 > 0.0)) throw InvalidArgument("forcing: h0 must be positive");
  TorusSpectrum f(b.dim(), resolve_cutoff(b, cutoff), true);
  for (const auto& k : b.active_modes())
    if (f.contains(k)) f.at(k) = cplx(0.0, dot(k, V0) * sech(h0 * mode_norm(k))) * b.spectrum()(k);
  return f;
}

CorrectorPair corrector_tendency(const CorrectorPair& c, double h0, const Vec2& V0,
                                 const BottomProfile& b) {
  const TorusSpectrum f = forcing(h0, V0, b, c.zeta1.cutoff());
  CorrectorPair out{TorusSpectrum(c.zeta1.dim(), c.zeta1.cutoff(), true),
                    TorusSpectrum(c.psi1.dim(), c.psi1.cutoff(), true)};
  for (std::size_t i = 0; i < out.zeta1.size(); ++i) {
    const Mode k = out.zeta1.mode(i);
    const cplx ikv(0.0, dot(k, V0));
    const double w2 = mode_norm(k) * std::tanh(h0 * mode_norm(k));
    out.zeta1[i] = -ikv * c.zeta1[i] + w2 * c.psi1[i] + f[i];
    out.psi1[i] = -ikv * c.psi1[i] - c.zeta1[i];
  }
  return out;
}

CorrectorPair propagate(const CorrectorPair& c, double h0, const Vec2& V0, const BottomProfile& b,
                        double tau) {
  const TorusSpectrum f = forcing(h0, V0, b, c.zeta1.cutoff());
  CorrectorPair out = c;
  for (std::size_t i = 0; i < c.zeta1.size(); ++i) {
    const Mode k = c.zeta1.mode(i);
    if (k[0] == 0 && k[1] == 0) continue;
    const ModeState m = propagate_mode(to_characteristic(k, c.zeta1[i], c.psi1[i], h0, V0), tau, f[i]);
    const auto [z, p] = from_characteristic(m);
    out.zeta1[i] = z;
    out.psi1[i] = p;
  }
  return out;
}

CorrectorPair stationary(double h0, const Vec2& V0, const BottomProfile& b,
                         const NonresonanceGuard& guard, int cutoff) {
  const auto bad = violations(h0, V0, b, guard);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "Bragg resonance: " << bad.size() << " mode(s) fail the nonresonance guard, first k = ("
        << bad[0].k[0] << "," << bad[0].k[1] << ") margin " << bad[0].margin << " threshold "
        << bad[0].threshold;
    throw ResonanceError(msg.str(), bad);
  }
  const int K = resolve_cutoff(b, cutoff);
  CorrectorPair out{TorusSpectrum(b.dim(), K, true), TorusSpectrum(b.dim(), K, true)};
  for (const auto& k : b.active_modes()) {
    if (!out.zeta1.contains(k)) continue;
    const double kv = dot(k, V0);
    const double nk = mode_norm(k);
    const double s = sech(h0 * nk);
    const double denom = nk * std::tanh(h0 * nk) - kv * kv;
    const cplx bk = b.spectrum()(k);
    out.zeta1.at(k) = -kv * kv * s / denom * bk;
    out.psi1.at(k) = cplx(0.0, -kv * s / denom) * bk;
  }
  return out;
}

double energy_norm(const TorusSpectrum& zeta1, const TorusSpectrum& psi1, double r, double h0) {
  require_zero_mean(zeta1, "energy_norm");
  require_zero_mean(psi1, "energy_norm");
  if (zeta1.dim() != psi1.dim() || zeta1.cutoff() != psi1.cutoff())
    throw InvalidArgument("energy_norm: incompatible spectra");
  double sum = 0.0;
  for (std::size_t i = 0; i < zeta1.size(); ++i) {
    const Mode k = zeta1.mode(i);
    const double nk = mode_norm(k);
    if (nk == 0.0) continue;
    const double w = r == 0.0 ? 1.0 : std::pow(1.0 + nk * nk, r);
    sum += w * (std::norm(zeta1[i]) + nk * std::tanh(h0 * nk) * std::norm(psi1[i]));
  }
  return std::sqrt(sum);
}

void CorrectorState::set(std::size_t point, const CorrectorPair& c) {
  zeta1.set(point, c.zeta1);
  psi1.set(point, c.psi1);
}

CorrectorState zero_corrector(const SlowGrid& grid, int cutoff) {
  return {MultiscaleField(grid, cutoff), MultiscaleField(grid, cutoff)};
}

CorrectorState evolve(const CorrectorState& c0, const SurfaceState& surface, const BottomProfile& b,
                      double tau_span, int n_steps) {
  if (!(c0.zeta1.grid() == surface.grid()))
    throw InvalidArgument("evolve: corrector and surface grids differ");
  if (n_steps < 1) throw InvalidArgument("evolve: n_steps must be >= 1");
  CorrectorState out = c0;
  const double h = tau_span / n_steps;
  parallel_for(surface.grid().size(), [&](std::size_t p) {
    const double h0 = 1.0 + surface.zeta0[p];
    const Vec2 v = surface.velocity_at(p);
    CorrectorPair c = c0.at(p);
    for (int s = 0; s < n_steps; ++s) c = propagate(c, h0, v, b, h);
    out.set(p, c);
  });
  return out;
}

CorrectorState stationary_field(const SurfaceState& surface, const BottomProfile& b,
                                const NonresonanceGuard& guard) {
  const SlowGrid& g = surface.grid();
  if (g.dim() != b.dim()) throw InvalidArgument("stationary_field: dimension mismatch");
  // Band violations at grid points and sign changes of the margin between
  // neighbours both rule out a locally stationary field.
  const ResonanceReport rep = certify(surface, b, guard);
  if (!rep.certified()) {
    const auto first = std::min_element(rep.flags.begin(), rep.flags.end(),
                                        [](const auto& x, const auto& y) { return x.index < y.index; });
    const std::size_t p = first->index;
    std::vector<ResonantMode> modes;
    for (const auto& f : rep.flags)
      if (f.index == p) modes.push_back({f.k, f.margin, f.threshold});
    std::ostringstream msg;
    msg << "Bragg resonance at slow point " << p << " (x = " << g.point(p)[0] << "): k = ("
        << first->k[0] << "," << first->k[1] << ") "
        << (first->crossing ? "margin changes sign next to this point" : "margin inside the guard band")
        << ", threshold " << first->threshold;
    throw ResonanceError(msg.str(), modes, p, g.point(p)[0]);
  }
  CorrectorState out = zero_corrector(g, b.cutoff());
  parallel_for(g.size(), [&](std::size_t p) {
    out.set(p, stationary(1.0 + surface.zeta0[p], surface.velocity_at(p), b, guard));
  });
  return out;
}

}  // namespace shom
