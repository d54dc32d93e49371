#include <gtest/gtest.h>

#include <cmath>

#include "shom/errors.hpp"
#include "shom/residual.hpp"
#include "shom/spectral.hpp"
#include "support/oracles.hpp"

using namespace shom;

namespace {

const std::vector<double> kSweep{0.04, 0.02, 0.01, 0.005};

}  // namespace

TEST(Residual, RestStateVanishes) {
  const double mu = 0.01;
  const SlowGrid g(1, commensurate_length(8.0, 0.1), 16 * 13);
  SurfacePreset rest;
  rest.name = "rest";
  const auto s = make_surface(rest, g);
  const auto b = cosine_bottom(1);
  const auto c = stationary_field(s, b, NonresonanceGuard::defaults(1e-3));
  const auto a = build_ansatz(s, c, mu);
  const auto sp = build_sigma(a.zeta_a, b, mu);
  EXPECT_LE(max_abs(residual_e1(a, sp, SlowField(g))), 1e-12);
  EXPECT_LE(max_abs(residual_e2(a, sp, SlowField(g))), 1e-12);
}

TEST(Residual, E1IgnoresConstantInPotential) {
  const double mu = 0.02;
  const double gamma = std::sqrt(mu);
  const SlowGrid g(1, commensurate_length(8.0, gamma), 16 * fast_periods(SlowGrid(1, commensurate_length(8.0, gamma), 8), gamma));
  const auto s = make_surface(SurfacePreset{}, g);
  const auto b = cosine_bottom(1);
  const auto c = stationary_field(s, b, NonresonanceGuard::defaults(1e-3));
  auto a = build_ansatz(s, c, mu);
  const auto sp = build_sigma(a.zeta_a, b, mu, {16});
  const SlowField dz = SlowField::from_function(g, [](const Vec2& x) { return std::sin(x[0]); });
  const SlowField e = residual_e1(a, sp, dz);
  a.psi_a += SlowField(g, 5.0);
  EXPECT_LE(max_abs(residual_e1(a, sp, dz) - e), 1e-9);
}

TEST(Residual, E2FormulaByHand) {
  const SlowGrid g(1, 2.0 * M_PI, 64);
  auto f = [&](double a, int k) {
    return SlowField::from_function(g, [=](const Vec2& x) { return a * std::cos(k * x[0]); });
  };
  AnsatzRealization ans{0.04, 0.2, f(0.1, 1), f(0.3, 2), SlowField(g), SlowField(g)};
  const SlowField gm = f(0.7, 3), dp = f(0.2, 1);
  const SlowField e2 = residual_e2_from_flux(ans, gm, dp);
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.coord(i);
    const double zx = -0.1 * std::sin(x), px = -0.6 * std::sin(2 * x);
    const double n = 0.7 * std::cos(3 * x) + zx * px;
    const double expect = 0.2 * std::cos(x) + 0.1 * std::cos(x) + 0.5 * px * px -
                          0.04 * n * n / (2.0 * (1.0 + 0.04 * zx * zx));
    EXPECT_NEAR(e2[i], expect, 1e-13);
  }
  const SlowField e1 = residual_e1_from_flux(ans, gm, dp);
  EXPECT_LE(max_abs(e1 - (dp - gm)), 0.0);
}

TEST(RateStudy, FlatControlIsFirstOrder) {
  RateStudyConfig cfg;
  cfg.bottom = flat_bottom(1);
  const auto r = rate_study(cfg, kSweep);
  EXPECT_NEAR(r.slope_e1, 1.0, 0.15);
  EXPECT_NEAR(r.slope_e2, 1.0, 0.15);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    EXPECT_LT(r.records[i].e1_l2, r.records[i - 1].e1_l2);
    EXPECT_LT(r.records[i].e2_h12, r.records[i - 1].e2_h12);
  }
}

TEST(RateStudy, RoughBottomRates) {
  RateStudyConfig cfg;
  const auto r = rate_study(cfg, kSweep);
  EXPECT_GE(r.slope_e1, 0.30);
  EXPECT_GE(r.slope_e2, 0.60);
  EXPECT_GE(r.slope_geff, 0.30);
  for (std::size_t i = 1; i < r.records.size(); ++i)
    EXPECT_LT(r.records[i].geff_remainder, r.records[i - 1].geff_remainder);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.nx, 32 * rec.fast_periods);
    EXPECT_NEAR(rec.box_length, 2.0 * M_PI * rec.gamma * rec.fast_periods, 1e-12);
    EXPECT_NEAR(rec.hstar, rec.e1_l2 + std::pow(rec.gamma, -0.375) * rec.e2_h12, 1e-15);
  }
}

TEST(RateStudy, TimeDerivativeStepIsSubdominant) {
  RateStudyConfig cfg;
  const auto a = consistency_point(cfg, 0.04);
  cfg.dt_fd = 5e-4;
  const auto b = consistency_point(cfg, 0.04);
  EXPECT_LT(std::abs(a.e1_l2 - b.e1_l2) / a.e1_l2, 0.05);
  EXPECT_LT(std::abs(a.e2_h12 - b.e2_h12) / a.e2_h12, 0.05);
}

TEST(RateStudy, OracleResolutionIsSubdominant) {
  RateStudyConfig cfg;
  const auto a = consistency_point(cfg, 0.005);
  cfg.points_per_fast_period = 64;
  cfg.oracle.nz = 64;
  const auto b = consistency_point(cfg, 0.005);
  EXPECT_LT(std::abs(a.e1_l2 - b.e1_l2) / b.e1_l2, 0.10);
}

TEST(RateStudy, ResonanceErrorPropagates) {
  RateStudyConfig cfg;
  cfg.guard_delta = 1.0;  // band wider than every margin of the cos mode
  EXPECT_THROW(consistency_point(cfg, 0.04), ResonanceError);
}

TEST(RateStudy, Rejections) {
  RateStudyConfig cfg;
  EXPECT_THROW(consistency_point(cfg, 0.0), InvalidArgument);
  cfg.eval_time = 0.1005;
  EXPECT_THROW(consistency_point(cfg, 0.04), InvalidArgument);
  cfg = RateStudyConfig{};
  cfg.surface.name = "stream";
  EXPECT_THROW(consistency_point(cfg, 0.04), InvalidArgument);
  EXPECT_THROW(rate_study(RateStudyConfig{}, {0.01}), InvalidArgument);
}

TEST(FittedSlope, MatchesOracleFit) {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 5.9, 12.5, 23};
  EXPECT_NEAR(fitted_slope(x, y), oracle::loglog_slope(x, y), 1e-14);
  EXPECT_THROW(fitted_slope({1, 2}, {1, -1}), InvalidArgument);
  EXPECT_THROW(fitted_slope({1, 1}, {1, 2}), InvalidArgument);
}
