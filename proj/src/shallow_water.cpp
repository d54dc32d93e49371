#include "shom/shallow_water.hpp"

#include <algorithm>
#include <cmath>

#include "shom/errors.hpp"
#include "shom/spectral.hpp"

namespace shom {
namespace {

void check_depth(const SurfaceState& s, double alpha0, double time) {
  const auto& z = s.zeta0.values();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double h = 1.0 + z[i];
    if (!(h >= alpha0))
      throw DepthError("depth " + std::to_string(h) + " below alpha0 = " + std::to_string(alpha0) +
                           " at x = " + std::to_string(s.grid().point(i)[0]) +
                           ", t = " + std::to_string(time),
                       s.grid().point(i)[0], time, h);
  }
}

SlowField hyperviscosity(const SlowField& f, double nu) {
  return apply_multiplier(f, [nu](const Vec2& xi) {
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1];
    return cplx(-nu * k2 * k2);
  });
}

// a + s * t, componentwise over the state.
SurfaceState axpy(const SurfaceState& a, double s, const Tendency& t) {
  SurfaceState out = a;
  out.zeta0 += s * t.dzeta;
  for (std::size_t j = 0; j < out.V0.size(); ++j) out.V0[j] += s * t.dV[j];
  if (out.psi0 && t.dpsi) *out.psi0 += s * *t.dpsi;
  return out;
}

// ca * a + cb * b.
SurfaceState combine(double ca, const SurfaceState& a, double cb, const SurfaceState& b) {
  SurfaceState out = a;
  out.zeta0 = ca * a.zeta0 + cb * b.zeta0;
  for (std::size_t j = 0; j < out.V0.size(); ++j) out.V0[j] = ca * a.V0[j] + cb * b.V0[j];
  if (out.psi0) *out.psi0 = ca * *a.psi0 + cb * *b.psi0;
  return out;
}

}  // namespace

SurfaceState::SurfaceState(SlowField zeta, std::vector<SlowField> velocity,
                           std::optional<SlowField> potential)
    : zeta0(std::move(zeta)), V0(std::move(velocity)), psi0(std::move(potential)) {
  if (static_cast<int>(V0.size()) != zeta0.grid().dim())
    throw InvalidArgument("SurfaceState: velocity needs one component per dimension");
  for (const auto& v : V0) require_same_grid(zeta0, v, "SurfaceState");
  if (psi0) require_same_grid(zeta0, *psi0, "SurfaceState");
}

SlowField SurfaceState::depth() const { return map(zeta0, [](double z) { return 1.0 + z; }); }

Vec2 SurfaceState::velocity_at(std::size_t point) const noexcept {
  return {V0[0][point], V0.size() > 1 ? V0[1][point] : 0.0};
}

SurfaceState surface_from_potential(SlowField zeta0, const SlowField& psi0) {
  return SurfaceState(std::move(zeta0), gradient(psi0), psi0);
}

SurfaceState make_surface(const SurfacePreset& p, const SlowGrid& grid) {
  if (p.name == "gaussian_bump") {
    if (!(p.width > 0.0)) throw InvalidArgument("gaussian_bump: width must be positive");
    auto bump = [&](double a) {
      return SlowField::from_function(grid, [&](const Vec2& x) {
        return a * std::exp(-(x[0] * x[0] + x[1] * x[1]) / (p.width * p.width));
      });
    };
    return surface_from_potential(bump(p.amplitude), bump(p.potential_amplitude));
  }
  if (p.name == "rest") return surface_from_potential(SlowField(grid), SlowField(grid));
  if (p.name == "stream") {
    std::vector<SlowField> v{SlowField(grid, p.stream_velocity)};
    if (grid.dim() == 2) v.emplace_back(grid);
    return SurfaceState(SlowField(grid), std::move(v));
  }
  if (p.name == "jet") {
    if (!(p.width > 0.0)) throw InvalidArgument("jet: width must be positive");
    std::vector<SlowField> v{SlowField::from_function(grid, [&](const Vec2& x) {
      return p.jet_speed * std::exp(-(x[0] * x[0] + x[1] * x[1]) / (p.width * p.width));
    })};
    if (grid.dim() == 2) v.emplace_back(grid);
    return SurfaceState(SlowField(grid), std::move(v));
  }
  throw InvalidArgument("unknown surface preset '" + p.name + "'");
}

Tendency sw_rhs(const SurfaceState& s, const SwOptions& options, double time) {
  check_depth(s, options.alpha0, time);
  const int d = s.grid().dim();
  const SlowField h = s.depth();
  std::vector<SlowField> flux;
  for (int j = 0; j < d; ++j) flux.push_back(dealiased_product(h, s.V0[j]));
  Tendency t{-1.0 * divergence(flux), {}, std::nullopt};

  std::vector<std::vector<SlowField>> grad_v;
  for (int i = 0; i < d; ++i) grad_v.push_back(gradient(s.V0[i]));
  const auto grad_z = gradient(s.zeta0);
  for (int i = 0; i < d; ++i) {
    SlowField dv = -1.0 * grad_z[i];
    for (int j = 0; j < d; ++j) dv -= dealiased_product(s.V0[j], grad_v[i][j]);
    t.dV.push_back(std::move(dv));
  }
  if (options.viscosity > 0.0) {
    t.dzeta += hyperviscosity(s.zeta0, options.viscosity);
    for (int i = 0; i < d; ++i) t.dV[i] += hyperviscosity(s.V0[i], options.viscosity);
  }
  if (s.psi0) {
    SlowField dpsi = -1.0 * s.zeta0;
    for (int j = 0; j < d; ++j) dpsi -= 0.5 * dealiased_product(s.V0[j], s.V0[j]);
    t.dpsi = std::move(dpsi);
  }
  return t;
}

double max_stable_dt(const SurfaceState& s, double cfl) {
  double speed = 0.0;
  for (std::size_t i = 0; i < s.zeta0.size(); ++i) {
    const Vec2 v = s.velocity_at(i);
    const double h = std::max(0.0, 1.0 + s.zeta0[i]);
    speed = std::max(speed, std::hypot(v[0], v[1]) + std::sqrt(h));
  }
  return speed > 0.0 ? cfl * s.grid().dx() / speed : INFINITY;
}

SurfaceState step(const SurfaceState& s, double dt, const SwOptions& options, double time) {
  const double dt_max = max_stable_dt(s, options.cfl);
  if (std::abs(dt) > dt_max * (1.0 + 1e-12))
    throw CflError("time step " + std::to_string(std::abs(dt)) + " exceeds CFL bound " +
                       std::to_string(dt_max),
                   std::abs(dt), dt_max);
  const SurfaceState s1 = axpy(s, dt, sw_rhs(s, options, time));
  const SurfaceState s2 =
      combine(0.75, s, 0.25, axpy(s1, dt, sw_rhs(s1, options, time + dt)));
  SurfaceState out =
      combine(1.0 / 3.0, s, 2.0 / 3.0, axpy(s2, dt, sw_rhs(s2, options, time + 0.5 * dt)));
  check_depth(out, options.alpha0, time + dt);
  return out;
}

double max_velocity_gradient(const SurfaceState& s) {
  double m = 0.0;
  for (const auto& v : s.V0)
    for (const auto& g : gradient(v)) m = std::max(m, max_abs(g));
  return m;
}

SwDiagnostics diagnose(const SurfaceState& s, double time) {
  SwDiagnostics d;
  d.time = time;
  d.mass = integral(s.zeta0);
  double e = 0.0;
  double min_h = INFINITY;
  for (std::size_t i = 0; i < s.zeta0.size(); ++i) {
    const double h = 1.0 + s.zeta0[i];
    const Vec2 v = s.velocity_at(i);
    e += 0.5 * (h * (v[0] * v[0] + v[1] * v[1]) + s.zeta0[i] * s.zeta0[i]);
    min_h = std::min(min_h, h);
  }
  d.energy = e * s.grid().cell_volume();
  d.min_depth = min_h;
  d.max_grad_v = max_velocity_gradient(s);
  return d;
}

const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::blowup: return "blowup";
    case StopReason::depth: return "depth";
    case StopReason::cfl: return "cfl";
  }
  return "unknown";
}

Trajectory simulate(const SurfaceState& state0, double T, double dt, const SwOptions& options,
                    int snapshot_every) {
  if (!(T >= 0.0)) throw InvalidArgument("simulate: T must be >= 0");
  if (snapshot_every < 1) snapshot_every = 1;
  const double grad_limit = options.blowup_factor / state0.grid().length();
  Trajectory tr;
  auto record = [&](const SurfaceState& s, double t, const SwDiagnostics& d) {
    tr.times.push_back(t);
    tr.states.push_back(s);
    tr.diagnostics.push_back(d);
  };
  check_depth(state0, options.alpha0, 0.0);
  record(state0, 0.0, diagnose(state0, 0.0));

  // A fixed step that divides T (to rounding) is used verbatim, so that
  // snapshot times are exact multiples of dt.
  long fixed_steps = 0;
  if (dt > 0.0) {
    const double ratio = T / dt;
    if (std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio))
      fixed_steps = std::lround(ratio);
  }

  SurfaceState s = state0;
  double t = 0.0;
  long n = 0;
  bool pending = false;  // last state not yet recorded
  SwDiagnostics last_diag = tr.diagnostics.back();
  while (fixed_steps > 0 ? n < fixed_steps : t < T * (1.0 - 1e-14)) {
    double h = dt > 0.0 ? dt : max_stable_dt(s, options.cfl);
    if (fixed_steps == 0 && t + h > T) h = T - t;
    SurfaceState next = s;
    try {
      next = step(s, h, options, t);
    } catch (const DepthError& e) {
      tr.reason = StopReason::depth;
      tr.message = e.what();
      break;
    } catch (const CflError& e) {
      tr.reason = StopReason::cfl;
      tr.message = e.what();
      break;
    }
    const double t_next = fixed_steps > 0 ? (n + 1) * dt : t + h;
    const SwDiagnostics d = diagnose(next, t_next);
    if (!(d.max_grad_v <= grad_limit)) {
      tr.reason = StopReason::blowup;
      tr.message = "max |grad V0| = " + std::to_string(d.max_grad_v) + " exceeds " +
                   std::to_string(grad_limit) + " at t = " + std::to_string(t_next);
      break;
    }
    s = std::move(next);
    t = t_next;
    ++n;
    last_diag = d;
    pending = true;
    if (n % snapshot_every == 0) {
      record(s, t, d);
      pending = false;
    }
  }
  if (pending) record(s, t, last_diag);
  return tr;
}

}  // namespace shom
