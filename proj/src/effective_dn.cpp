#include "shom/effective_dn.hpp"

#include <cmath>
#include <sstream>

#include "shom/errors.hpp"
#include "shom/parallel.hpp"
#include "shom/spectral.hpp"

namespace shom {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr int kMinPointsPerFastWavelength = 8;

double gamma_of(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be positive and finite");
  return std::sqrt(mu);
}

}  // namespace

int fast_periods(const SlowGrid& grid, double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("fast_periods: gamma must be positive");
  const double ratio = grid.length() / (kTwoPi * gamma);
  const double m = std::max(1.0, std::round(ratio));
  if (std::abs(ratio - m) > 1e-9 * std::max(1.0, ratio)) {
    const double suggested = grid.length() / (kTwoPi * m);
    std::ostringstream msg;
    msg.precision(17);
    msg << "commensurability: box length " << grid.length() << " is not a multiple of 2*pi*gamma = "
        << kTwoPi * gamma << " (ratio " << ratio << "); nearest commensurate gamma is " << suggested;
    throw CommensurabilityError(msg.str(), suggested);
  }
  return static_cast<int>(m);
}

double commensurate_length(double L0, double gamma) {
  if (!(L0 > 0.0) || !(gamma > 0.0))
    throw InvalidArgument("commensurate_length: L0 and gamma must be positive");
  return kTwoPi * gamma * std::max(1.0, std::round(L0 / (kTwoPi * gamma)));
}

TorusSpectrum g_eff_fast(double h0, const Vec2& V0, const CorrectorPair& c, const BottomProfile& b) {
  const int K = std::max({c.zeta1.cutoff(), c.psi1.cutoff(), b.cutoff()});
  const TorusSpectrum z = c.zeta1.with_cutoff(K);
  const TorusSpectrum sb = op_sech(h0, b.spectrum()).with_cutoff(K);
  TorusSpectrum out = op_dn_tanh(h0, c.psi1.with_cutoff(K));
  const auto gz = torus_gradient(z);
  const auto gb = torus_gradient(sb);
  for (int j = 0; j < z.dim(); ++j) {
    out += (-V0[j]) * gz[j];
    out += V0[j] * gb[j];
  }
  out.set_real(true);
  return out;
}

SlowField g_eff(const SurfaceState& surface, const CorrectorState& corrector, const BottomProfile& b,
                double mu) {
  const double gamma = gamma_of(mu);
  const SlowGrid& g = surface.grid();
  if (!(corrector.zeta1.grid() == g) || !(corrector.psi1.grid() == g))
    throw InvalidArgument("g_eff: corrector and surface grids differ");
  if (b.dim() != g.dim()) throw InvalidArgument("g_eff: bottom dimension differs from the grid");

  const SlowField h = surface.depth();
  std::vector<SlowField> flux;
  for (int j = 0; j < g.dim(); ++j) flux.push_back(dealiased_product(h, surface.V0[j]));
  SlowField out = -1.0 * divergence(flux);

  std::vector<double> fast(g.size());
  parallel_for(g.size(), [&](std::size_t p) {
    const Vec2 x = g.point(p);
    fast[p] = g_eff_fast(h[p], surface.velocity_at(p), corrector.at(p), b)
                  .evaluate({x[0] / gamma, x[1] / gamma})
                  .real();
  });
  return out + SlowField(g, std::move(fast));
}

AnsatzRealization build_ansatz(const SurfaceState& surface, const CorrectorState& corrector,
                               double mu) {
  const double gamma = gamma_of(mu);
  const SlowGrid& g = surface.grid();
  if (!surface.psi0) throw InvalidArgument("build_ansatz: the surface state carries no potential");
  if (!(corrector.zeta1.grid() == g)) throw InvalidArgument("build_ansatz: grid mismatch");
  const int periods = fast_periods(g, gamma);
  if (g.n() < kMinPointsPerFastWavelength * periods) {
    std::ostringstream msg;
    msg << "build_ansatz: " << g.n() << " points resolve " << periods
        << " fast periods; need at least " << kMinPointsPerFastWavelength << " points per period";
    throw InvalidArgument(msg.str());
  }
  SlowField z1 = realize(corrector.zeta1, gamma);
  SlowField p1 = realize(corrector.psi1, gamma);
  SlowField za = surface.zeta0 + gamma * z1;
  SlowField pa = *surface.psi0 + mu * p1;
  return {mu, gamma, std::move(za), std::move(pa), std::move(z1), std::move(p1)};
}

AnsatzRate ansatz_time_derivative(const AnsatzRealization& before, const AnsatzRealization& after,
                                  double span) {
  if (!(span != 0.0) || !std::isfinite(span))
    throw InvalidArgument("ansatz_time_derivative: span must be nonzero");
  if (before.mu != after.mu) throw InvalidArgument("ansatz_time_derivative: mu differs");
  return {(1.0 / span) * (after.zeta_a - before.zeta_a), (1.0 / span) * (after.psi_a - before.psi_a)};
}

}  // namespace shom
