#include "shom/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "shom/effective_dn.hpp"
#include "shom/errors.hpp"
#include "shom/field_io.hpp"

namespace shom {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'", line);
  return x;
}

long to_long(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError(key + ": expected an integer, got '" + v + "'", line);
  return x;
}

ModeMap parse_modes(const std::string& v, int dim, int line) {
  ModeMap out;
  std::size_t pos = 0;
  const std::size_t width = dim == 1 ? 3 : 4;
  while (true) {
    const auto open = v.find('(', pos);
    if (open == std::string::npos) break;
    const auto close = v.find(')', open);
    if (close == std::string::npos) throw ConfigError("bottom: unbalanced parenthesis", line);
    const auto parts = split(v.substr(open + 1, close - open - 1), ',');
    if (parts.size() != width) {
      std::ostringstream msg;
      msg << "bottom: each mode needs " << width << " entries in d = " << dim;
      throw ConfigError(msg.str(), line);
    }
    Mode k{static_cast<int>(to_long(parts[0], line, "bottom")),
           dim == 2 ? static_cast<int>(to_long(parts[1], line, "bottom")) : 0};
    const double re = to_double(parts[width - 2], line, "bottom");
    const double im = to_double(parts[width - 1], line, "bottom");
    if (out.count(k)) throw ConfigError("bottom: duplicate mode", line);
    out[k] = cplx(re, im);
    pos = close + 1;
    const auto rest = trim(v.substr(pos));
    if (!rest.empty() && rest[0] == ',') pos = v.find(',', pos) + 1;
  }
  if (out.empty()) throw ConfigError("bottom: empty mode list", line);
  return out;
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

double RunConfig::gamma() const { return std::sqrt(mu); }

double RunConfig::hbar() const { return guard_hbar ? *guard_hbar : 0.5 * alpha0; }

SlowGrid RunConfig::grid_for(double m) const {
  const double g = std::sqrt(m);
  const double L = box_length ? *box_length : commensurate_length(box_target, g);
  const int periods = fast_periods(SlowGrid(dim, L, 8), g);
  int n = nx ? *nx : points_per_fast_period * periods;
  if (n % 2) ++n;
  if (n < 8 * periods) {
    std::ostringstream msg;
    msg << "nx = " << n << " resolves " << periods << " fast periods at mu = " << m
        << "; need at least 8 points per period";
    throw ConfigError(msg.str(), 0);
  }
  return SlowGrid(dim, L, n);
}

BottomProfile RunConfig::bottom_profile() const {
  if (bottom == "modes") return BottomProfile::from_modes(bottom_modes, dim, cutoff);
  return bottom_preset(bottom, dim, bottom_amplitude, bottom_decay, bottom_kmax, seed, cutoff);
}

NonresonanceGuard RunConfig::guard() const {
  NonresonanceGuard g(guard_delta, hbar());
  g.check_against(alpha0);
  return g;
}

SwOptions RunConfig::sw_options() const {
  SwOptions o;
  o.cfl = cfl;
  o.alpha0 = alpha0;
  o.viscosity = viscosity;
  return o;
}

OracleOptions RunConfig::oracle_options() const {
  OracleOptions o;
  o.nz = oracle_nz;
  o.solver = oracle_solver;
  o.alpha = alpha0;
  return o;
}

RateStudyConfig RunConfig::rate_study_config() const {
  RateStudyConfig r;
  r.bottom = bottom_profile();
  r.surface = surface;
  r.box_target = box_target;
  r.points_per_fast_period = points_per_fast_period;
  r.oracle = oracle_options();
  r.eval_time = T;
  r.dt_fd = dt_fd;
  r.guard_delta = guard_delta;
  r.guard_hbar = hbar();
  r.sw = sw_options();
  return r;
}

namespace {

// Constraint violation tied to the key that carries it.
struct RuleFailure {
  std::string key;
  std::string what;
};

void check_rules(const RunConfig& c) {
  auto fail = [](const std::string& key, const std::string& what) { throw RuleFailure{key, what}; };
  if (c.dim != 1 && c.dim != 2) fail("dim", "dim must be 1 or 2");
  if (!(c.mu > 0.0)) fail("mu", "mu must be positive");
  for (double m : c.mu_list)
    if (!(m > 0.0)) fail("mu_list", "mu_list entries must be positive");
  if (c.box_length && !(*c.box_length > 0.0)) fail("L", "L must be positive");
  if (!(c.box_target > 0.0)) fail("box_target", "box_target must be positive");
  if (c.nx && (*c.nx < 8 || *c.nx % 2)) fail("nx", "nx must be even and >= 8");
  if (c.points_per_fast_period < 8) fail("points_per_fast_period", "points_per_fast_period must be >= 8");
  if (!(c.alpha0 > 0.0 && c.alpha0 < 1.0)) fail("alpha0", "alpha0 must lie in (0, 1)");
  if (!(c.guard_delta > 0.0)) fail("guard_delta", "guard_delta must be positive");
  if (!(c.hbar() > 0.0) || !(c.hbar() < c.alpha0)) fail("guard_hbar", "guard_hbar must lie in (0, alpha0)");
  if (!(c.T >= 0.0)) fail("T", "T must be >= 0");
  if (!(c.cfl > 0.0)) fail("cfl", "cfl must be positive");
  if (!(c.dt_fd > 0.0)) fail("dt_fd", "dt_fd must be positive");
  if (c.snapshot_every < 1) fail("snapshot_every", "snapshot_every must be >= 1");
  if (c.oracle_nz < 2) fail("oracle_nz", "oracle_nz must be >= 2");
  if (!(c.tau >= 0.0)) fail("tau", "tau must be >= 0");
  if (c.tau_samples < 1) fail("tau_samples", "tau_samples must be >= 1");
  if (c.corrector_init != "stationary" && c.corrector_init != "zero")
    fail("corrector_init", "corrector_init must be 'stationary' or 'zero'");
  for (int n : c.cell_grid)
    if (n < 16 || n % 2) fail("cell_grid", "cell_grid entries must be even and >= 16");
  if (!(c.cell_h0 > 0.0)) fail("cell_h0", "cell_h0 must be positive");
  if (c.viscosity < 0.0) fail("viscosity", "viscosity must be >= 0");
  if (c.bottom == "modes" && c.bottom_modes.empty()) fail("bottom", "bottom: empty mode list");

  // Commensurability of a user box with every mu in use.
  std::vector<double> mus = c.mu_list;
  mus.push_back(c.mu);
  for (double m : mus) {
    try {
      c.grid_for(m);
    } catch (const CommensurabilityError& e) {
      fail(c.box_length ? "L" : "box_target", e.what());
    } catch (const ConfigError& e) {
      fail(c.nx ? "nx" : "points_per_fast_period", e.what());
    }
  }
  try {
    c.bottom_profile();
  } catch (const InvalidArgument& e) {
    fail("bottom", e.what());
  }
  try {
    c.guard();
  } catch (const InvalidArgument& e) {
    fail("guard_hbar", e.what());
  }
}

}  // namespace

void validate(const RunConfig& c) {
  try {
    check_rules(c);
  } catch (const RuleFailure& f) {
    throw ConfigError(f.what, 0);
  }
}

RunConfig parse_config(const std::string& text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> kv;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line);
    if (value.empty()) throw ConfigError(key + ": missing value", line);
    if (kv.count(key)) throw ConfigError(key + ": duplicate key", line);
    kv[key] = {value, line};
  }

  RunConfig c;
  using Setter = std::function<void(const std::string&, int, const std::string&)>;
  auto dbl = [](double& t) -> Setter {
    return [&t](const std::string& v, int l, const std::string& k) { t = to_double(v, l, k); };
  };
  auto int_ = [](int& t) -> Setter {
    return [&t](const std::string& v, int l, const std::string& k) { t = static_cast<int>(to_long(v, l, k)); };
  };
  auto str = [](std::string& t) -> Setter {
    return [&t](const std::string& v, int, const std::string&) { t = v; };
  };
  const std::map<std::string, Setter> setters{
      {"dim", int_(c.dim)},
      {"mu", dbl(c.mu)},
      {"mu_list",
       [&](const std::string& v, int l, const std::string& k) {
         c.mu_list.clear();
         for (const auto& p : split(v, ',')) c.mu_list.push_back(to_double(p, l, k));
       }},
      {"L", [&](const std::string& v, int l, const std::string& k) { c.box_length = to_double(v, l, k); }},
      {"box_target", dbl(c.box_target)},
      {"nx", [&](const std::string& v, int l, const std::string& k) { c.nx = static_cast<int>(to_long(v, l, k)); }},
      {"points_per_fast_period", int_(c.points_per_fast_period)},
      {"cutoff", int_(c.cutoff)},
      {"bottom", [](const std::string&, int, const std::string&) {}},  // interpreted after dim
      {"bottom_amplitude", dbl(c.bottom_amplitude)},
      {"bottom_decay", dbl(c.bottom_decay)},
      {"bottom_kmax", int_(c.bottom_kmax)},
      {"surface", str(c.surface.name)},
      {"surface_amplitude", dbl(c.surface.amplitude)},
      {"surface_potential_amplitude", dbl(c.surface.potential_amplitude)},
      {"surface_width", dbl(c.surface.width)},
      {"stream_velocity", dbl(c.surface.stream_velocity)},
      {"jet_speed", dbl(c.surface.jet_speed)},
      {"alpha0", dbl(c.alpha0)},
      {"viscosity", dbl(c.viscosity)},
      {"guard_delta", dbl(c.guard_delta)},
      {"guard_hbar", [&](const std::string& v, int l, const std::string& k) { c.guard_hbar = to_double(v, l, k); }},
      {"dt", dbl(c.dt)},
      {"T", dbl(c.T)},
      {"cfl", dbl(c.cfl)},
      {"snapshot_every", int_(c.snapshot_every)},
      {"dt_fd", dbl(c.dt_fd)},
      {"oracle_nz", int_(c.oracle_nz)},
      {"oracle_solver",
       [&](const std::string& v, int l, const std::string&) {
         if (v == "direct") c.oracle_solver = OracleSolver::direct;
         else if (v == "cg") c.oracle_solver = OracleSolver::conjugate_gradient;
         else throw ConfigError("oracle_solver must be 'direct' or 'cg'", l);
       }},
      {"tau", dbl(c.tau)},
      {"tau_samples", int_(c.tau_samples)},
      {"corrector_init", str(c.corrector_init)},
      {"cell_grid",
       [&](const std::string& v, int l, const std::string& k) {
         c.cell_grid.clear();
         for (const auto& p : split(v, ',')) c.cell_grid.push_back(static_cast<int>(to_long(p, l, k)));
       }},
      {"cell_h0", dbl(c.cell_h0)},
      {"cell_grad", dbl(c.cell_grad)},
      {"mc_samples",
       [&](const std::string& v, int l, const std::string& k) {
         const long n = to_long(v, l, k);
         if (n < 0) throw ConfigError("mc_samples must be >= 0", l);
         c.mc_samples = static_cast<std::size_t>(n);
       }},
      {"seed",
       [&](const std::string& v, int l, const std::string& k) {
         const long n = to_long(v, l, k);
         if (n < 0) throw ConfigError("seed must be >= 0", l);
         c.seed = static_cast<std::uint64_t>(n);
       }},
      {"output", str(c.output)},
      {"e1_slope_min", dbl(c.e1_slope_min)},
      {"e2_slope_min", dbl(c.e2_slope_min)},
      {"geff_slope_min", dbl(c.geff_slope_min)},
  };

  for (const auto& [key, e] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown key '" + key + "'", e.line);
    it->second(e.value, e.line, key);
  }
  if (auto it = kv.find("bottom"); it != kv.end()) {
    const std::string& v = it->second.value;
    if (v.find('(') != std::string::npos) {
      c.bottom = "modes";
      c.bottom_modes = parse_modes(v, c.dim == 2 ? 2 : 1, it->second.line);
    } else {
      c.bottom = v;
    }
  }

  try {
    check_rules(c);
  } catch (const RuleFailure& f) {
    const auto it = kv.find(f.key);
    throw ConfigError(f.what, it == kv.end() ? 0 : it->second.line);
  }
  return c;
}

void apply_overrides(RunConfig& c, const std::optional<std::string>& mu_list,
                     const std::optional<std::uint64_t>& seed) {
  if (mu_list) {
    std::vector<double> mus;
    for (const auto& p : split(*mu_list, ',')) mus.push_back(to_double(p, 0, "--mu-override"));
    if (mus.empty()) throw ConfigError("--mu-override: empty list", 0);
    c.mu = mus.front();
    c.mu_list = mus;
  }
  if (seed) c.seed = *seed;
  validate(c);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& c) {
  std::ostringstream o;
  auto list = [](const auto& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s << ", ";
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(v[0])>>) s << format_double(v[i]);
      else s << v[i];
    }
    return s.str();
  };
  o << "# effective configuration\n";
  o << "dim = " << c.dim << "\n";
  o << "mu = " << fmt(c.mu) << "\n";
  o << "mu_list = " << list(c.mu_list) << "\n";
  if (c.box_length) o << "L = " << fmt(*c.box_length) << "\n";
  o << "box_target = " << fmt(c.box_target) << "\n";
  if (c.nx) o << "nx = " << *c.nx << "\n";
  o << "points_per_fast_period = " << c.points_per_fast_period << "\n";
  o << "cutoff = " << c.cutoff << "\n";
  if (c.bottom == "modes") {
    o << "bottom = ";
    bool first = true;
    for (const auto& [k, v] : c.bottom_modes) {
      if (!first) o << ", ";
      first = false;
      o << "(" << k[0] << ", ";
      if (c.dim == 2) o << k[1] << ", ";
      o << fmt(v.real()) << ", " << fmt(v.imag()) << ")";
    }
    o << "\n";
  } else {
    o << "bottom = " << c.bottom << "\n";
  }
  o << "bottom_amplitude = " << fmt(c.bottom_amplitude) << "\n";
  o << "bottom_decay = " << fmt(c.bottom_decay) << "\n";
  o << "bottom_kmax = " << c.bottom_kmax << "\n";
  o << "surface = " << c.surface.name << "\n";
  o << "surface_amplitude = " << fmt(c.surface.amplitude) << "\n";
  o << "surface_potential_amplitude = " << fmt(c.surface.potential_amplitude) << "\n";
  o << "surface_width = " << fmt(c.surface.width) << "\n";
  o << "stream_velocity = " << fmt(c.surface.stream_velocity) << "\n";
  o << "jet_speed = " << fmt(c.surface.jet_speed) << "\n";
  o << "alpha0 = " << fmt(c.alpha0) << "\n";
  o << "viscosity = " << fmt(c.viscosity) << "\n";
  o << "guard_delta = " << fmt(c.guard_delta) << "\n";
  o << "guard_hbar = " << fmt(c.hbar()) << "\n";
  o << "dt = " << fmt(c.dt) << "\n";
  o << "T = " << fmt(c.T) << "\n";
  o << "cfl = " << fmt(c.cfl) << "\n";
  o << "snapshot_every = " << c.snapshot_every << "\n";
  o << "dt_fd = " << fmt(c.dt_fd) << "\n";
  o << "oracle_nz = " << c.oracle_nz << "\n";
  o << "oracle_solver = " << (c.oracle_solver == OracleSolver::direct ? "direct" : "cg") << "\n";
  o << "tau = " << fmt(c.tau) << "\n";
  o << "tau_samples = " << c.tau_samples << "\n";
  o << "corrector_init = " << c.corrector_init << "\n";
  o << "cell_grid = " << list(c.cell_grid) << "\n";
  o << "cell_h0 = " << fmt(c.cell_h0) << "\n";
  o << "cell_grad = " << fmt(c.cell_grad) << "\n";
  o << "mc_samples = " << c.mc_samples << "\n";
  o << "seed = " << c.seed << "\n";
  o << "output = " << c.output << "\n";
  o << "e1_slope_min = " << fmt(c.e1_slope_min) << "\n";
  o << "e2_slope_min = " << fmt(c.e2_slope_min) << "\n";
  o << "geff_slope_min = " << fmt(c.geff_slope_min) << "\n";
  return o.str();
}

}  // namespace shom
