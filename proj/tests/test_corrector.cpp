#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shom/corrector.hpp"
#include "shom/spectral.hpp"
#include "support/oracles.hpp"

using namespace shom;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// RK4 on the (zeta_hat, psi_hat) system of one mode, independent of the
// characteristic-variable formulation.
std::array<oracle::cplx, 2> rk4_mode(const Mode& k, double h0, const Vec2& V0, oracle::cplx z,
                                     oracle::cplx p, oracle::cplx f, double tau, int steps) {
  const double nk = std::hypot(k[0], k[1]);
  const double w2 = nk * std::tanh(h0 * nk);
  const oracle::cplx ikv(0.0, k[0] * V0[0] + k[1] * V0[1]);
  oracle::Linear2 sys{{{{-ikv, w2}, {-1.0, -ikv}}}, {f, 0.0}};
  return oracle::rk4(sys, {z, p}, tau, steps);
}

struct RandomMode {
  Mode k;
  double h0;
  Vec2 V0;
  cplx z, p, f;
};

std::vector<RandomMode> random_nonresonant_modes(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ki(-4, 4);
  std::vector<RandomMode> out;
  while (int(out.size()) < count) {
    RandomMode m{{ki(rng), ki(rng)}, 1.0 + 0.5 * u(rng), {u(rng), u(rng)},
                 {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
    if (m.k[0] == 0 && m.k[1] == 0) continue;
    const double w = mode_frequency(m.h0, m.k);
    const double kv = dot(m.k, m.V0);
    if (std::abs(w + kv) < 0.1 || std::abs(w - kv) < 0.1) continue;
    out.push_back(m);
  }
  return out;
}

CorrectorPair pair_of(const TorusSpectrum& z, const TorusSpectrum& p) { return {z, p}; }

double pair_distance(const CorrectorPair& a, const CorrectorPair& b, double h0) {
  return energy_norm(a.zeta1 - b.zeta1, a.psi1 - b.psi1, 0.0, h0);
}

}  // namespace

TEST(Forcing, Examples) {
  const auto b = cosine_bottom(1);
  EXPECT_EQ(forcing(1.0, {0.0, 0.0}, b).max_abs(), 0.0);
  EXPECT_EQ(forcing(1.0, {0.7, 0.0}, flat_bottom(1)).max_abs(), 0.0);
  const double u = 0.7;
  const auto f = forcing(1.0, {u, 0.0}, b);
  EXPECT_EQ(f.zero_mode(), cplx(0.0));
  for (double y : {0.0, 0.4, 1.3, 2.9, 5.0})
    EXPECT_NEAR(f.evaluate_real({y, 0.0}), -u * sech(1.0) * std::sin(y), 1e-15);
  EXPECT_THROW(forcing(0.0, {u, 0.0}, b), InvalidArgument);
}

TEST(ModeState, RoundTrip) {
  for (const auto& m : random_nonresonant_modes(50, 1)) {
    const auto s = to_characteristic(m.k, m.z, m.p, m.h0, m.V0);
    EXPECT_GT(s.omega, 0.0);
    EXPECT_DOUBLE_EQ(s.advection, dot(m.k, m.V0));
    const auto [z, p] = from_characteristic(s);
    EXPECT_LE(std::abs(z - m.z), 1e-14);
    EXPECT_LE(std::abs(p - m.p), 1e-14);
  }
  EXPECT_THROW(to_characteristic({0, 0}, 1.0, 1.0, 1.0, {0.0, 0.0}), InvalidArgument);
}

TEST(Propagate, HomogeneousIsUnitary) {
  for (const auto& m : random_nonresonant_modes(100, 2)) {
    const auto s0 = to_characteristic(m.k, m.z, m.p, m.h0, m.V0);
    const auto s = propagate_mode(s0, 1000.0, 0.0);
    EXPECT_LE(std::abs(std::abs(s.Z) - std::abs(s0.Z)), 1e-13);
    EXPECT_LE(std::abs(std::abs(s.W) - std::abs(s0.W)), 1e-13);
  }
}

TEST(Propagate, MatchesRk4OnNonresonantModes) {
  double worst = 0.0;
  for (const auto& m : random_nonresonant_modes(30, 3))
    for (double tau : {0.5, 17.0, 50.0}) {
      const auto s = propagate_mode(to_characteristic(m.k, m.z, m.p, m.h0, m.V0), tau, m.f);
      const auto [z, p] = from_characteristic(s);
      const auto ref = rk4_mode(m.k, m.h0, m.V0, m.z, m.p, m.f, tau, int(tau * 4000) + 100);
      worst = std::max({worst, std::abs(z - ref[0]), std::abs(p - ref[1])});
    }
  EXPECT_LE(worst, 1e-8);
}

TEST(Propagate, NearResonantSeriesBranchIsContinuous) {
  // theta straddling the 1e-6 switch for tau = 1.
  for (double theta : {2e-6, 1.0000001e-6, 0.9999999e-6, 5e-7}) {
    const cplx q = duhamel_factor(1.0, theta);
    const double half = std::sin(0.5 * theta);
    const cplx exact = cplx(std::sin(theta), -2.0 * half * half) / theta;
    EXPECT_LE(std::abs(q - exact), 1e-15) << theta;
  }
  EXPECT_EQ(duhamel_factor(3.0, 0.0), cplx(3.0, 0.0));
}

TEST(Propagate, SecularGrowthAtExactResonance) {
  const Mode k{1, 0};
  const double h0 = 1.0;
  const double w = mode_frequency(h0, k);
  const Vec2 V0{-w, 0.0};  // omega + k.V0 = 0
  const cplx c(0.3, -0.4);
  auto s0 = to_characteristic(k, 0.0, 0.0, h0, V0);
  std::vector<double> t, a;
  for (int i = 0; i <= 100; ++i) {
    const double tau = i;
    const auto s = propagate_mode(s0, tau, c);
    t.push_back(tau);
    a.push_back(std::abs(s.Z));
    EXPECT_NEAR(std::abs(s.Z), std::abs(c) * tau / std::sqrt(w), 1e-12 * (1.0 + tau));
  }
  EXPECT_NEAR(oracle::linear_slope(t, a) / (std::abs(c) / std::sqrt(w)), 1.0, 1e-2);
}

TEST(Stationary, Examples) {
  const auto b = cosine_bottom(1);
  const auto guard = NonresonanceGuard::defaults(1e-3);
  const auto zero = stationary(1.0, {0.0, 0.0}, b, guard);
  EXPECT_EQ(zero.zeta1.max_abs(), 0.0);
  EXPECT_EQ(zero.psi1.max_abs(), 0.0);

  const auto s = stationary(1.0, {0.5, 0.0}, b, guard);
  const double expect = -0.25 * sech(1.0) / (std::tanh(1.0) - 0.25) * 0.5;
  EXPECT_NEAR(s.zeta1({1, 0}).real(), expect, 1e-15);
  EXPECT_NEAR(s.zeta1({-1, 0}).real(), expect, 1e-15);
  EXPECT_NEAR(std::abs(s.zeta1({1, 0}).imag()), 0.0, 1e-16);

  const double vr = resonant_speed(1.0, {1, 0});
  try {
    stationary(1.0, {vr + 1e-5, 0.0}, b, guard);
    FAIL() << "expected ResonanceError";
  } catch (const ResonanceError& e) {
    ASSERT_EQ(e.modes().size(), 2u);
    for (const auto& m : e.modes()) EXPECT_LE(std::abs(m.margin), m.threshold);
  }
}

TEST(Stationary, SystemResidualVanishes) {
  const auto guard = NonresonanceGuard::defaults(1e-3);
  for (const auto& b : {cosine_bottom(1), two_mode_bottom(1),
                        random_phase_bottom(1, 1.0, 0.5, 6, 4)}) {
    for (double v : {0.1, 0.4, 0.75, 1.3}) {
      const auto s = stationary(1.1, {v, 0.0}, b, guard);
      const auto r = corrector_tendency(s, 1.1, {v, 0.0}, b);
      EXPECT_LE(energy_norm(r.zeta1, r.psi1, 1.0, 1.1), 1e-10) << v;
    }
  }
  const auto b2 = two_mode_bottom(2);
  const auto s = stationary(0.9, {0.3, -0.2}, b2, guard);
  const auto r = corrector_tendency(s, 0.9, {0.3, -0.2}, b2);
  EXPECT_LE(energy_norm(r.zeta1, r.psi1, 1.0, 0.9), 1e-10);
}

TEST(Stationary, FixedPointOfPropagation) {
  const auto guard = NonresonanceGuard::defaults(1e-3);
  const auto b = two_mode_bottom(1);
  const auto s = stationary(1.0, {0.5, 0.0}, b, guard);
  for (double tau : {0.1, 7.0, 100.0})
    EXPECT_LE(pair_distance(propagate(s, 1.0, {0.5, 0.0}, b, tau), s, 1.0), 1e-10);
}

TEST(Energy, Examples) {
  TorusSpectrum z(1, 4, true), p(1, 4, true);
  EXPECT_EQ(energy_norm(z, p, 0.0, 1.0), 0.0);
  z.set({1, 0}, 0.5);
  z.set({-1, 0}, 0.5);  // cos Y
  EXPECT_NEAR(energy_norm(z, p, 0.0, 1.0), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(energy_norm(z, p, 1.0, 1.0), std::sqrt(0.5 * 2.0), 1e-15);
  p.set({2, 0}, 1.0);
  p.set({-2, 0}, 1.0);
  EXPECT_NEAR(energy_norm(z, p, 0.0, 1.0), std::sqrt(0.5 + 2.0 * 2.0 * std::tanh(2.0)), 1e-14);
  z.set({0, 0}, 0.1);
  EXPECT_THROW(energy_norm(z, p, 0.0, 1.0), InvalidArgument);
}

TEST(Energy, HomogeneousEvolutionConserves) {
  const auto b = flat_bottom(1, 6);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  TorusSpectrum z(1, 6, true), p(1, 6, true);
  for (int k = 1; k <= 6; ++k) {
    const cplx a(n(rng), n(rng)), c(n(rng), n(rng));
    z.set({k, 0}, a);
    z.set({-k, 0}, std::conj(a));
    p.set({k, 0}, c);
    p.set({-k, 0}, std::conj(c));
  }
  for (double r : {0.0, 1.0, 2.5}) {
    const double e0 = energy_norm(z, p, r, 0.8);
    const auto c = propagate({z, p}, 0.8, {0.37, 0.0}, b, 333.0);
    EXPECT_NEAR(energy_norm(c.zeta1, c.psi1, r, 0.8), e0, 1e-12 * e0);
    EXPECT_LE(std::abs(c.zeta1.zero_mode()), 0.0);
    EXPECT_TRUE(c.zeta1.is_hermitian(1e-13));
  }
}

TEST(Energy, DuhamelBoundOnForcedData) {
  // sqrt version of the energy estimate: E(tau) <= E(0) + tau ||(f,0)||.
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = random_phase_bottom(1, 1.0, 0.3, 8, 100 + trial);
    TorusSpectrum z(1, b.cutoff(), true), p(1, b.cutoff(), true);
    for (int k = 1; k <= 8; ++k) {
      const cplx a(n(rng), n(rng)), c(n(rng), n(rng));
      z.set({k, 0}, a);
      z.set({-k, 0}, std::conj(a));
      p.set({k, 0}, c);
      p.set({-k, 0}, std::conj(c));
    }
    const double h0 = 1.0, v = 0.4;
    const auto f = forcing(h0, {v, 0.0}, b);
    TorusSpectrum zero(1, b.cutoff(), true);
    const double ef = energy_norm(f, zero, 1.0, h0);
    const double e0 = energy_norm(z, p, 1.0, h0);
    for (int i = 1; i <= 50; ++i) {
      const double tau = 0.2 * i;
      const auto c = propagate({z, p}, h0, {v, 0.0}, b, tau);
      EXPECT_LE(energy_norm(c.zeta1, c.psi1, 1.0, h0), e0 + tau * ef + 1e-12);
      const auto c0 = propagate({zero, zero}, h0, {v, 0.0}, b, tau);
      const double ez = energy_norm(c0.zeta1, c0.psi1, 1.0, h0);
      EXPECT_LE(ez, tau * ef + 1e-12);
    }
  }
}

TEST(Evolve, ZeroStaysZeroWithoutFlow) {
  const SlowGrid grid(1, 8.0, 32);
  SurfacePreset p;
  p.name = "rest";
  const auto s = make_surface(p, grid);
  const auto c = evolve(zero_corrector(grid, 10), s, cosine_bottom(1), 40.0, 4);
  EXPECT_EQ(c.zeta1.max_coefficient(), 0.0);
  EXPECT_EQ(c.psi1.max_coefficient(), 0.0);
}

TEST(Evolve, StationaryFieldIsFixedPoint) {
  const SlowGrid grid(1, 16.0, 64);
  SurfacePreset p;
  p.name = "jet";
  p.jet_speed = 0.5;
  const auto s = make_surface(p, grid);
  const auto b = two_mode_bottom(1);
  const auto c0 = stationary_field(s, b, NonresonanceGuard::defaults(1e-3));
  const auto c = evolve(c0, s, b, 100.0, 3);
  EXPECT_TRUE(c.zeta1.has_zero_fast_mean());
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LE(pair_distance(c.at(i), c0.at(i), 1.0 + s.zeta0[i]), 1e-10);
}

TEST(Evolve, SubStepsComposeExactly) {
  const SlowGrid grid(1, 16.0, 32);
  const auto s = make_surface(SurfacePreset{}, grid);
  const auto b = cosine_bottom(1);
  const auto c0 = zero_corrector(grid, b.cutoff());
  const auto one = evolve(c0, s, b, 12.0, 1);
  const auto many = evolve(c0, s, b, 12.0, 24);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LE(pair_distance(one.at(i), many.at(i), 1.0 + s.zeta0[i]), 1e-12);
  EXPECT_THROW(evolve(c0, s, b, 1.0, 0), InvalidArgument);
}

TEST(StationaryField, Examples) {
  const SlowGrid grid(1, 16.0, 128);
  const auto guard = NonresonanceGuard::defaults(1e-3);
  const auto b = cosine_bottom(1);
  SurfacePreset rest;
  rest.name = "rest";
  EXPECT_EQ(stationary_field(make_surface(rest, grid), b, guard).zeta1.max_coefficient(), 0.0);

  SurfacePreset stream;
  stream.name = "stream";
  for (double v : {1.0, 1.2, 3.0}) {
    stream.stream_velocity = v;
    EXPECT_NO_THROW(stationary_field(make_surface(stream, grid), b, guard));
  }

  SurfacePreset jet;
  jet.name = "jet";
  jet.jet_speed = 0.7;
  const auto s = make_surface(jet, grid);
  const auto c = stationary_field(s, b, guard);
  std::size_t arg_amp = 0, arg_den = 0;
  double best_amp = -1, best_den = 1e9;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double amp = std::abs(c.zeta1.coeff(i, {1, 0}));
    const double den = std::abs(margin(1.0 + s.zeta0[i], s.velocity_at(i), {1, 0}));
    if (amp > best_amp) best_amp = amp, arg_amp = i;
    if (den < best_den) best_den = den, arg_den = i;
  }
  EXPECT_EQ(arg_amp, arg_den);

  jet.jet_speed = 0.95;
  try {
    stationary_field(make_surface(jet, grid), b, NonresonanceGuard(0.2, 5e-4));
    FAIL() << "expected ResonanceError";
  } catch (const ResonanceError& e) {
    ASSERT_TRUE(e.slow_index().has_value());
    ASSERT_TRUE(e.x().has_value());
    EXPECT_DOUBLE_EQ(*e.x(), grid.coord(int(*e.slow_index())));
    EXPECT_LT(*e.x(), 0.0);  // first offending point scanning from -L/2
  }
}
