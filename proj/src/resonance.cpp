#include "shom/resonance.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "shom/errors.hpp"

namespace shom {

NonresonanceGuard::NonresonanceGuard(double delta, double hbar) : delta_(delta), hbar_(hbar) {
  if (!(delta > 0.0)) throw InvalidArgument("NonresonanceGuard: delta must be positive");
  if (!(hbar > 0.0)) throw InvalidArgument("NonresonanceGuard: hbar must be positive");
}

NonresonanceGuard NonresonanceGuard::defaults(double alpha0) {
  return NonresonanceGuard(1e-3, 0.5 * alpha0);
}

double NonresonanceGuard::bound(const Mode& k) const noexcept {
  return std::exp(hbar_ * mode_norm(k)) / delta_;
}

double NonresonanceGuard::threshold(const Mode& k) const noexcept {
  return delta_ * std::exp(-hbar_ * mode_norm(k));
}

void NonresonanceGuard::check_against(double alpha0) const {
  if (!(hbar_ < alpha0)) throw InvalidArgument("NonresonanceGuard: hbar must lie in (0, alpha0)");
}

double margin(double h0, const Vec2& V0, const Mode& k) {
  const double nk = mode_norm(k);
  if (nk == 0.0) throw InvalidArgument("margin: k = 0 has no resonance condition");
  if (!(h0 > 0.0)) throw InvalidArgument("margin: h0 must be positive");
  const double kv = dot(k, V0);
  return nk * std::tanh(h0 * nk) - kv * kv;
}

std::vector<ResonantMode> violations(double h0, const Vec2& V0, const BottomProfile& b,
                                     const NonresonanceGuard& guard) {
  std::vector<ResonantMode> out;
  for (const auto& k : b.active_modes()) {
    const double m = margin(h0, V0, k);
    const double t = guard.threshold(k);
    if (std::abs(m) <= t) out.push_back({k, m, t});
  }
  return out;
}

SlowField froude(const SurfaceState& s) {
  std::vector<double> v(s.zeta0.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 u = s.velocity_at(i);
    v[i] = (u[0] * u[0] + u[1] * u[1]) / (1.0 + s.zeta0[i]);
  }
  return SlowField(s.grid(), std::move(v));
}

std::pair<double, double> froude_window(double h0, double k_min, double k_max) {
  if (!(h0 > 0.0) || !(k_min > 0.0) || k_max < k_min)
    throw InvalidArgument("froude_window: need h0 > 0 and 0 < k_min <= k_max");
  auto ratio = [h0](double k) { return std::tanh(h0 * k) / (h0 * k); };
  return {ratio(k_max), ratio(k_min)};
}

double resonant_speed(double h0, const Mode& k) {
  const double nk = mode_norm(k);
  if (nk == 0.0) throw InvalidArgument("resonant_speed: k = 0");
  return std::sqrt(std::tanh(h0 * nk) / nk);
}

ResonanceReport certify(const SurfaceState& s, const BottomProfile& b,
                        const NonresonanceGuard& guard) {
  const SlowGrid& g = s.grid();
  ResonanceReport rep{{}, froude(s), SlowField(g), SlowField(g)};

  double k_min = INFINITY, k_max = 0.0;
  for (const auto& k : b.active_modes()) {
    k_min = std::min(k_min, mode_norm(k));
    k_max = std::max(k_max, mode_norm(k));
  }
  if (!b.is_flat()) {
    auto& lo = rep.window_min.mutable_values();
    auto& hi = rep.window_max.mutable_values();
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto w = froude_window(1.0 + s.zeta0[p], k_min, k_max);
      lo[p] = w.first;
      hi[p] = w.second;
    }
  }

  // Neighbour offsets along each axis with periodic wrap.
  auto neighbour = [&](std::size_t p, int axis) {
    auto ij = g.indices(p);
    ij[axis] = (ij[axis] + 1) % g.n();
    return static_cast<std::size_t>(ij[0]) +
           (g.dim() == 2 ? static_cast<std::size_t>(g.n()) * static_cast<std::size_t>(ij[1]) : 0);
  };

  for (const auto& k : b.active_modes()) {
    const double t = guard.threshold(k);
    std::vector<double> m(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) m[p] = margin(1.0 + s.zeta0[p], s.velocity_at(p), k);
    std::set<std::size_t> flagged;
    for (std::size_t p = 0; p < g.size(); ++p)
      if (std::abs(m[p]) <= t) {
        rep.flags.push_back({p, g.point(p), k, m[p], t, false});
        flagged.insert(p);
      }
    for (std::size_t p = 0; p < g.size(); ++p)
      for (int axis = 0; axis < g.dim(); ++axis) {
        const std::size_t q = neighbour(p, axis);
        if (!((m[p] > 0.0 && m[q] < 0.0) || (m[p] < 0.0 && m[q] > 0.0))) continue;
        const double w = m[p] / (m[p] - m[q]);
        const std::size_t near = w <= 0.5 ? p : q;
        if (flagged.count(near) || flagged.count(p) || flagged.count(q)) continue;
        Vec2 x = g.point(p);
        x[axis] += w * g.dx();
        rep.flags.push_back({near, x, k, 0.0, t, true});
        flagged.insert(near);
      }
  }
  return rep;
}

double resonant_fraction(const BottomProfile& b, const NonresonanceGuard& guard,
                         std::size_t samples, std::uint64_t seed, const MonteCarloRange& range) {
  if (samples == 0) return 0.0;
  if (!(1.0 + range.zeta_min > 0.0)) throw InvalidArgument("resonant_fraction: zeta range leaves no depth");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> zeta(range.zeta_min, range.zeta_max);
  std::uniform_real_distribution<double> speed(0.0, range.speed_max);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double h0 = 1.0 + zeta(rng);
    const double u = speed(rng);
    Vec2 v{u, 0.0};
    if (b.dim() == 2) {
      const double a = angle(rng);
      v = {u * std::cos(a), u * std::sin(a)};
    }
    if (!violations(h0, v, b, guard).empty()) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace shom
