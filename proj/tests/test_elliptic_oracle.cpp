#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shom/effective_dn.hpp"
#include "shom/elliptic_oracle.hpp"
#include "shom/errors.hpp"
#include "shom/field_io.hpp"
#include "shom/spectral.hpp"
#include "support/oracles.hpp"

using namespace shom;

namespace {

SlowGrid strip_grid(double mu, int periods, int per_period) {
  return SlowGrid(1, 2.0 * M_PI * std::sqrt(mu) * periods, periods * per_period);
}

SlowField gaussian(const SlowGrid& g, double a, double w) {
  return SlowField::from_function(g, [&](const Vec2& x) { return a * std::exp(-x[0] * x[0] / (w * w)); });
}

SlowField random_smooth(const SlowGrid& g, std::uint64_t seed, int modes = 6) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<double> a(modes), c(modes);
  for (int m = 0; m < modes; ++m) a[m] = n(rng), c[m] = n(rng);
  return SlowField::from_function(g, [&](const Vec2& x) {
    double v = 0.0;
    for (int m = 0; m < modes; ++m) {
      const double k = 2.0 * M_PI * (m + 1) / g.length();
      v += (a[m] * std::cos(k * x[0]) + c[m] * std::sin(k * x[0])) / (1.0 + m);
    }
    return v;
  });
}

double inner(const SlowField& a, const SlowField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().dx();
}

}  // namespace

TEST(BuildSigma, FlatDataGivesIdentityCoefficients) {
  const SlowGrid g = strip_grid(0.01, 4, 16);
  const auto sp = build_sigma(SlowField(g), flat_bottom(1), 0.01, {8});
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j <= 8; ++j) EXPECT_EQ(sp.sigma(i, j), 0.0);
  for (int q = 0; q < 4; ++q) {
    const auto& c = sp.coefficient(3, 2, q);
    EXPECT_EQ(c.h, 1.0);
    EXPECT_EQ(c.p11, 1.0);
    EXPECT_EQ(c.p12, 0.0);
    EXPECT_EQ(c.p22, 1.0);
  }
  EXPECT_EQ(sp.min_depth(), 1.0);
  EXPECT_NEAR(sp.min_eigenvalue(), 1.0, 1e-15);
}

TEST(BuildSigma, CosineBottomDepth) {
  const double mu = 0.01;
  const SlowGrid g = strip_grid(mu, 4, 32);
  const auto sp = build_sigma(SlowField(g), cosine_bottom(1), mu, {8});
  // Bottom node: sigma(-1) = beta b(X/gamma); depth at the node is 1 - 0.1 cos(X/0.1).
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.coord(i);
    EXPECT_NEAR(sp.sigma(i, 0), 0.1 * std::cos(x / 0.1), 1e-15);
    EXPECT_NEAR(1.0 + 0.0 - sp.sigma(i, 0), 1.0 - 0.1 * std::cos(x / 0.1), 1e-15);
  }
  EXPECT_NEAR(sp.min_depth(), 0.9, 1e-3);
  for (int i = 0; i < g.n(); ++i)
    for (int q = 0; q < 2; ++q) {
      const double x = g.coord(i) + (q == 0 ? 0.5 - 0.5 / std::sqrt(3.0) : 0.5 + 0.5 / std::sqrt(3.0)) * g.dx();
      EXPECT_NEAR(sp.coefficient(i, 0, q).h, 1.0 - 0.1 * std::cos(x / 0.1), 1e-14);
    }
}

TEST(BuildSigma, CoefficientsPositiveDefiniteOnRandomAdmissibleData) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double mu = 0.02;
    const SlowGrid g = strip_grid(mu, 3, 16);
    SlowField zeta = 0.2 * random_smooth(g, seed);
    const auto b = random_phase_bottom(1, 1.0, 0.5, 4, seed);
    const auto sp = build_sigma(zeta, b, mu, {8});
    EXPECT_GT(sp.min_eigenvalue(), 0.0);
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < 8; ++j)
        for (int q = 0; q < 4; ++q) {
          const auto& c = sp.coefficient(i, j, q);
          EXPECT_NEAR(c.p11 * c.p22 - c.p12 * c.p12, 1.0, 1e-12);
          EXPECT_GT(c.p11, 0.0);
        }
  }
}

TEST(BuildSigma, RejectsDepthViolation) {
  const double mu = 0.04;
  const SlowGrid g = strip_grid(mu, 4, 16);
  SlowField zeta = gaussian(g, -1.2, 0.3);
  try {
    build_sigma(zeta, flat_bottom(1), mu, {8});
    FAIL() << "expected DepthError";
  } catch (const DepthError& e) {
    EXPECT_LT(e.depth(), 1e-3);
    EXPECT_LT(std::abs(e.x()), 0.5);
  }
  EXPECT_THROW(build_sigma(SlowField(SlowGrid(2, 4.0, 8)), flat_bottom(2), mu), InvalidArgument);
}

TEST(SolvePotential, ConstantsAreExact) {
  const double mu = 0.02;
  const SlowGrid g = strip_grid(mu, 3, 16);
  const auto sp = build_sigma(0.1 * random_smooth(g, 7), cosine_bottom(1), mu, {16});
  const auto s = solve_potential(sp, SlowField(g, 2.5));
  for (double v : s.phi) EXPECT_NEAR(v, 2.5, 1e-12);
  EXPECT_LE(max_abs(dn_apply(sp, SlowField(g, 2.5))), 1e-9);
}

TEST(SolvePotential, DirectAndCgAgree) {
  const double mu = 0.02;
  const SlowGrid g = strip_grid(mu, 3, 16);
  const SlowField zeta = 0.1 * random_smooth(g, 8);
  const SlowField psi = random_smooth(g, 9);
  OracleOptions direct{16};
  OracleOptions cg{16, OracleSolver::conjugate_gradient};
  const auto a = dn_apply(build_sigma(zeta, cosine_bottom(1), mu, direct), psi);
  const auto spc = build_sigma(zeta, cosine_bottom(1), mu, cg);
  const auto sol = solve_potential(spc, psi);
  EXPECT_GT(sol.iterations, 0);
  EXPECT_LE(sol.residual, 1e-10);
  EXPECT_LE(max_abs(a - dn_flux(spc, sol)), 1e-8 * max_abs(a));
}

TEST(DnOracle, GreenIdentity) {
  const double mu = 0.01;
  const SlowGrid g = strip_grid(mu, 6, 16);
  const auto sp = build_sigma(0.15 * random_smooth(g, 10), cosine_bottom(1), mu, {16});
  for (std::uint64_t seed : {11, 12, 13}) {
    const SlowField psi = random_smooth(g, seed);
    const auto s = solve_potential(sp, psi);
    const double lhs = inner(psi, dn_flux(sp, s));
    const double rhs = dirichlet_energy(sp, s);
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(rhs)) << seed;
  }
}

TEST(DnOracle, SymmetricPositiveWithConstantKernel) {
  const double mu = 0.02;
  const SlowGrid g = strip_grid(mu, 4, 16);
  const auto sp = build_sigma(0.2 * random_smooth(g, 20), random_phase_bottom(1, 1.0, 0.5, 3, 2), mu, {16});
  for (std::uint64_t seed = 21; seed < 26; ++seed) {
    const SlowField a = random_smooth(g, seed), b = random_smooth(g, seed + 100);
    const double ab = inner(a, dn_apply(sp, b));
    const double ba = inner(b, dn_apply(sp, a));
    EXPECT_NEAR(ab, ba, 1e-8 * (std::abs(ab) + 1.0));
    EXPECT_GE(inner(a, dn_apply(sp, a)), 0.0);
    // Adding a constant leaves G unchanged.
    EXPECT_LE(max_abs(dn_apply(sp, a + SlowField(g, 3.0)) - dn_apply(sp, a)), 1e-8);
  }
}

TEST(DnOracle, FlatStripSymbol) {
  // Per mode: (1/mu) G = xi tanh(sqrt(mu) xi) / sqrt(mu).
  for (double mu : {0.04, 0.01}) {
    const SlowGrid g(1, 8.0, 256);
    const auto sp = build_sigma(SlowField(g), flat_bottom(1), mu, {64});
    for (int m : {1, 3, 6}) {
      const double xi = 2.0 * M_PI * m / g.length();
      const SlowField psi = SlowField::from_function(g, [&](const Vec2& x) { return std::cos(xi * x[0]); });
      const SlowField gm = (1.0 / mu) * dn_apply(sp, psi);
      const double sym = xi * std::tanh(std::sqrt(mu) * xi) / std::sqrt(mu);
      // Q1 accuracy: relative error O((xi dx)^2 + (sqrt(mu) xi dz)^2).
      const double hx = xi * g.dx(), hz = std::sqrt(mu) * xi / 64.0;
      const double tol = 0.25 * (hx * hx + hz * hz) * sym;
      for (int i = 0; i < g.n(); i += 17) EXPECT_NEAR(gm[i], sym * psi[i], tol) << mu << " " << m;
    }
  }
}

TEST(DnOracle, FlatStripSymbolConvergesAtSecondOrder) {
  const double mu = 0.04;
  const double xi = 2.0 * M_PI * 4 / 8.0;
  const double sym = xi * std::tanh(std::sqrt(mu) * xi) / std::sqrt(mu);
  std::vector<double> h, e;
  for (int r : {1, 2, 4}) {
    const SlowGrid g(1, 8.0, 32 * r);
    const auto sp = build_sigma(SlowField(g), flat_bottom(1), mu, {8 * r});
    const SlowField psi = SlowField::from_function(g, [&](const Vec2& x) { return std::cos(xi * x[0]); });
    const SlowField gm = (1.0 / mu) * dn_apply(sp, psi);
    e.push_back(std::abs(gm[0] - sym));
    h.push_back(1.0 / r);
  }
  EXPECT_NEAR(oracle::loglog_slope(h, e), 2.0, 0.2);
}

TEST(DnOracle, GridSelfConvergenceOnRoughBottom) {
  const double mu = 0.04;
  const int periods = 6;
  auto flux = [&](int per_period, int nz) {
    const SlowGrid g = strip_grid(mu, periods, per_period);
    const SlowField zeta = gaussian(g, 0.1, 1.0);
    const SlowField psi = gaussian(g, 0.3, 1.0);
    return (1.0 / mu) * dn_apply(build_sigma(zeta, cosine_bottom(1), mu, {nz}), psi);
  };
  const SlowField g1 = flux(16, 8), g2 = flux(32, 16), g4 = flux(64, 32);
  double d12 = 0.0, d24 = 0.0;
  for (int i = 0; i < g1.grid().n(); ++i) {
    d12 += std::pow(g1[i] - g2[2 * i], 2);
    d24 += std::pow(g2[2 * i] - g4[4 * i], 2);
  }
  const double order = std::log2(std::sqrt(d12 / d24));
  EXPECT_GE(order, 1.8);
  EXPECT_LE(order, 2.2);
}

TEST(DnOracle, ShallowLimitMatchesLeadingOrder) {
  // Flat bottom, zero surface: (1/mu) G psi -> -psi'' as mu -> 0, with an
  // O(mu) correction.
  std::vector<double> mus, err;
  for (double mu : {0.04, 0.02, 0.01}) {
    const SlowGrid g(1, 16.0, 256);
    const SlowField psi = gaussian(g, 0.3, 1.5);
    const SlowField gm = (1.0 / mu) * dn_apply(build_sigma(SlowField(g), flat_bottom(1), mu, {32}), psi);
    mus.push_back(mu);
    err.push_back(l2_norm(gm + laplacian(psi)));
  }
  EXPECT_NEAR(oracle::loglog_slope(mus, err), 1.0, 0.1);
}

TEST(DnOracle, PotentialDump) {
  const SlowGrid g(1, 4.0, 16);
  const auto sp = build_sigma(SlowField(g), flat_bottom(1), 0.04, {4});
  const auto s = solve_potential(sp, random_smooth(g, 3));
  const std::string path = ::testing::TempDir() + "/phi.bin";
  write_potential_dump(path, s);
  const auto d = read_dump(path);
  ASSERT_EQ(d.shape.size(), 2u);
  EXPECT_EQ(d.shape[0], 16u);
  EXPECT_EQ(d.shape[1], 5u);
  EXPECT_EQ(d.data, s.phi);
}
