#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "shom/cell_problem.hpp"
#include "shom/corrector.hpp"
#include "shom/effective_dn.hpp"
#include "shom/errors.hpp"
#include "shom/field_io.hpp"
#include "shom/resonance.hpp"
#include "shom/residual.hpp"
#include "shom/spectral.hpp"

namespace shom::cli {
namespace fs = std::filesystem;

namespace {

// Ordered key=value summary.
class Summary {
 public:
  void set(const std::string& k, const std::string& v) {
    if (!index_.count(k)) order_.push_back(k);
    index_[k] = v;
  }
  void set(const std::string& k, double v) { set(k, format_double(v)); }
  void set(const std::string& k, long v) { set(k, std::to_string(v)); }
  void set(const std::string& k, int v) { set(k, std::to_string(v)); }
  void set(const std::string& k, std::size_t v) { set(k, std::to_string(v)); }
  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    for (const auto& k : order_) out << k << "=" << index_.at(k) << "\n";
    if (!out) throw Error("cannot write " + path.string());
  }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> index_;
};

int cmd_simulate(const RunConfig& c, const fs::path& out, Summary& sum) {
  const SlowGrid g = c.grid();
  const SurfaceState s0 = make_surface(c.surface, g);
  const Trajectory tr = simulate(s0, c.T, c.dt, c.sw_options(), c.snapshot_every);

  std::vector<std::vector<double>> rows;
  for (const auto& d : tr.diagnostics) rows.push_back({d.time, d.mass, d.energy, d.min_depth, d.max_grad_v});
  write_csv((out / "diagnostics.csv").string(), {"t", "mass", "energy", "min_depth", "max_gradV"}, rows);

  fs::create_directories(out / "snapshots");
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "%04zu", i);
    const auto& s = tr.states[i];
    write_dump((out / "snapshots" / (std::string("zeta_") + tag + ".bin")).string(), s.zeta0);
    for (std::size_t a = 0; a < s.V0.size(); ++a)
      write_dump((out / "snapshots" / ("V" + std::to_string(a) + "_" + tag + ".bin")).string(), s.V0[a]);
  }
  std::vector<std::vector<double>> times;
  for (double t : tr.times) times.push_back({t});
  write_csv((out / "snapshots" / "times.csv").string(), {"t"}, times);

  sum.set("nx", g.n());
  sum.set("box_length", g.length());
  sum.set("stop_reason", to_string(tr.reason));
  sum.set("last_valid_time", tr.last_valid_time());
  sum.set("snapshots", tr.states.size());
  sum.set("mass_drift", std::abs(tr.diagnostics.back().mass - tr.diagnostics.front().mass));
  sum.set("energy_drift", std::abs(tr.diagnostics.back().energy - tr.diagnostics.front().energy));
  if (!tr.completed()) sum.set("stop_message", tr.message);
  if (tr.reason == StopReason::depth) return kDepth;
  // A blow-up stop is the lifespan measurement itself, not a failure.
  if (tr.reason == StopReason::cfl) return kGeneric;
  return kOk;
}

CorrectorState initial_corrector(const RunConfig& c, const SurfaceState& s, const BottomProfile& b) {
  if (c.corrector_init == "zero") return zero_corrector(s.grid(), b.cutoff());
  return stationary_field(s, b, c.guard());
}

int cmd_corrector(const RunConfig& c, const fs::path& out, Summary& sum) {
  const SlowGrid g = c.grid();
  const SurfaceState s = make_surface(c.surface, g);
  const BottomProfile b = c.bottom_profile();
  const CorrectorState c0 = initial_corrector(c, s, b);

  // Mode amplitudes are reported at the slow point of largest |V0|.
  std::size_t probe = 0;
  double vmax = -1.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const Vec2 v = s.velocity_at(p);
    const double m = std::hypot(v[0], v[1]);
    if (m > vmax) vmax = m, probe = p;
  }
  const double h_probe = 1.0 + s.zeta0[probe];
  const Vec2 v_probe = s.velocity_at(probe);

  std::vector<std::vector<double>> modes, energy;
  CorrectorState cur = c0;
  const double dtau = c.tau / c.tau_samples;
  for (int i = 0; i <= c.tau_samples; ++i) {
    const double tau = i * dtau;
    if (i > 0) cur = evolve(cur, s, b, dtau, 1);
    const CorrectorPair pp = cur.at(probe);
    for (const auto& k : b.active_modes()) {
      if (!pp.zeta1.contains(k)) continue;
      const auto m = to_characteristic(k, pp.zeta1(k), pp.psi1(k), h_probe, v_probe);
      modes.push_back({tau, double(k[0]), double(k[1]), std::abs(m.Z), std::abs(m.W)});
    }
    double emax = 0.0, esum = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto q = cur.at(p);
      const double e = energy_norm(q.zeta1, q.psi1, 0.0, 1.0 + s.zeta0[p]);
      emax = std::max(emax, e);
      esum += e;
    }
    energy.push_back({tau, emax, esum / g.size(), energy_norm(pp.zeta1, pp.psi1, 0.0, h_probe)});
  }
  write_csv((out / "corrector_modes.csv").string(), {"tau", "k1", "k2", "absZ", "absW"}, modes);
  write_csv((out / "corrector_energy.csv").string(), {"tau", "energy_max", "energy_mean", "energy_probe"},
            energy);

  const SlowField z1 = realize(cur.zeta1, c.gamma());
  const SlowField p1 = realize(cur.psi1, c.gamma());
  write_fields_csv((out / "corrector_final.csv").string(), {"zeta1", "psi1"}, {&z1, &p1});

  sum.set("probe_index", probe);
  sum.set("probe_x", g.point(probe)[0]);
  sum.set("tau", c.tau);
  sum.set("initial", c.corrector_init);
  sum.set("energy_initial_probe", energy.front()[3]);
  sum.set("energy_final_probe", energy.back()[3]);
  return kOk;
}

int cmd_stationary(const RunConfig& c, const fs::path& out, Summary& sum) {
  const double mu = c.mu;
  const SlowGrid g = c.grid();
  const SurfaceState s = make_surface(c.surface, g);
  const BottomProfile b = c.bottom_profile();
  const CorrectorState cs = stationary_field(s, b, c.guard());
  const SlowField z1 = realize(cs.zeta1, c.gamma());
  const SlowField p1 = realize(cs.psi1, c.gamma());
  const SlowField ge = g_eff(s, cs, b, mu);
  std::vector<std::string> names{"zeta0", "zeta1", "psi1", "g_eff"};
  std::vector<const SlowField*> fields{&s.zeta0, &z1, &p1, &ge};
  std::optional<AnsatzRealization> a;
  if (s.psi0) {
    a = build_ansatz(s, cs, mu);
    names.insert(names.end(), {"psi0", "zeta_a", "psi_a"});
    fields.insert(fields.end(), {&*s.psi0, &a->zeta_a, &a->psi_a});
  }
  write_fields_csv((out / "stationary_fields.csv").string(), names, fields);
  write_dump((out / "zeta1.bin").string(), z1);
  write_dump((out / "psi1.bin").string(), p1);
  write_dump((out / "g_eff.bin").string(), ge);
  sum.set("mu", mu);
  sum.set("gamma", c.gamma());
  sum.set("nx", g.n());
  sum.set("box_length", g.length());
  sum.set("max_zeta1_coefficient", cs.zeta1.max_coefficient());
  sum.set("max_psi1_coefficient", cs.psi1.max_coefficient());
  sum.set("max_abs_zeta1", max_abs(z1));
  return kOk;
}

int cmd_resonance_scan(const RunConfig& c, const fs::path& out, Summary& sum) {
  const SlowGrid g = c.grid();
  const SurfaceState s = make_surface(c.surface, g);
  const BottomProfile b = c.bottom_profile();
  const NonresonanceGuard guard = c.guard();
  const ResonanceReport rep = certify(s, b, guard);
  std::vector<std::vector<double>> rows;
  for (const auto& f : rep.flags)
    rows.push_back({f.x[0], double(f.index), double(f.k[0]), double(f.k[1]), f.margin, f.threshold,
                    f.crossing ? 1.0 : 0.0});
  write_csv((out / "resonance_flags.csv").string(),
            {"x", "index", "k1", "k2", "margin", "threshold", "crossing"}, rows);
  write_fields_csv((out / "froude.csv").string(), {"froude2", "window_min", "window_max"},
                   {&rep.froude, &rep.window_min, &rep.window_max});
  write_dump((out / "froude.bin").string(), rep.froude);
  const double frac = resonant_fraction(b, guard, c.mc_samples, c.seed);
  sum.set("certified", rep.certified() ? "true" : "false");
  sum.set("flags", rep.flags.size());
  sum.set("max_froude2", max_abs(rep.froude));
  sum.set("monte_carlo_samples", c.mc_samples);
  sum.set("monte_carlo_resonant_fraction", frac);
  return kOk;
}

int cmd_cell_verify(const RunConfig& c, const fs::path& out, Summary& sum) {
  const BottomProfile b = c.bottom_profile();
  const TorusSpectrum psi1(c.dim, b.cutoff(), true);
  const Vec2 grad{c.cell_grad, c.dim == 2 ? c.cell_grad : 0.0};
  std::vector<std::vector<double>> rows;
  std::vector<double> errs;
  for (int n : c.cell_grid) {
    const double e = cell_oracle_error(c.cell_h0, psi1, b, grad, n, n);
    rows.push_back({double(n), double(n), e});
    errs.push_back(e);
  }
  write_csv((out / "cell_verify.csv").string(), {"Ny", "Nz", "relerr"}, rows);
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double ratio = errs[i - 1] / errs[i];
    sum.set("ratio_" + std::to_string(c.cell_grid[i - 1]) + "_" + std::to_string(c.cell_grid[i]), ratio);
  }
  sum.set("finest_error", errs.back());
  return kOk;
}

int cmd_consistency(const RunConfig& c, const fs::path& out, Summary& sum) {
  const RateStudy r = rate_study(c.rate_study_config(), c.mu_list);
  std::vector<std::vector<double>> rows;
  for (const auto& x : r.records)
    rows.push_back({x.mu, x.e1_l2, x.e2_h12, x.hstar, x.geff_remainder, double(x.nx), double(x.nz),
                    x.box_length});
  write_csv((out / "consistency.csv").string(),
            {"mu", "e1_l2", "e2_h12", "hstar", "geff_remainder", "nx", "nz", "box_length"}, rows);
  sum.set("slope_e1", r.slope_e1);
  sum.set("slope_e2", r.slope_e2);
  sum.set("slope_geff", r.slope_geff);
  sum.set("slope_hstar", r.slope_hstar);
  const bool ok = r.slope_e1 >= c.e1_slope_min && r.slope_e2 >= c.e2_slope_min &&
                  r.slope_geff >= c.geff_slope_min;
  sum.set("thresholds_met", ok ? "true" : "false");
  return ok ? kOk : kThresholds;
}

using Command = int (*)(const RunConfig&, const fs::path&, Summary&);

const std::map<std::string, Command>& table() {
  static const std::map<std::string, Command> t{
      {"simulate", cmd_simulate},           {"corrector", cmd_corrector},
      {"stationary", cmd_stationary},       {"resonance-scan", cmd_resonance_scan},
      {"cell-verify", cmd_cell_verify},     {"consistency", cmd_consistency},
  };
  return t;
}

void write_common(const RunConfig& c, const fs::path& out) {
  fs::create_directories(out);
  std::ofstream cfg(out / "effective_config.txt", std::ios::trunc);
  cfg << render_config(c);
  if (!cfg) throw Error("cannot write effective_config.txt in " + out.string());
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"simulate", "corrector", "stationary",
                                              "resonance-scan", "cell-verify", "consistency"};
  return names;
}

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError&) {
    return kConfig;
  } catch (const CommensurabilityError&) {
    return kConfig;
  } catch (const ResonanceError&) {
    return kResonance;
  } catch (const DepthError&) {
    return kDepth;
  } catch (const SolverError&) {
    return kSolver;
  } catch (...) {
    return kGeneric;
  }
}

int run(const std::string& subcommand, const RunConfig& config, const std::string& out_dir) {
  const auto it = table().find(subcommand);
  if (it == table().end()) throw InvalidArgument("unknown subcommand '" + subcommand + "'");
  const fs::path out(out_dir);
  write_common(config, out);
  Summary sum;
  sum.set("command", subcommand);
  const int code = it->second(config, out, sum);
  sum.set("status", code == kOk ? "ok" : "failed");
  sum.set("exit_code", code);
  sum.write(out / "summary.txt");
  return code;
}

int run_guarded(const std::string& subcommand, const RunConfig& config, const std::string& out_dir,
                std::string* message) {
  try {
    return run(subcommand, config, out_dir);
  } catch (const std::exception& e) {
    const int code = exit_code_for(std::current_exception());
    if (message) *message = e.what();
    try {
      const fs::path out(out_dir);
      fs::create_directories(out);
      Summary sum;
      sum.set("command", subcommand);
      sum.set("status", "error");
      sum.set("exit_code", code);
      std::string what = e.what();
      std::replace(what.begin(), what.end(), '\n', ' ');
      sum.set("error", what);
      if (const auto* r = dynamic_cast<const ResonanceError*>(&e)) {
        sum.set("resonant_modes", r->modes().size());
        if (r->x()) sum.set("resonance_x", *r->x());
      }
      if (const auto* d = dynamic_cast<const DepthError*>(&e)) sum.set("depth_x", d->x());
      sum.write(out / "summary.txt");
    } catch (...) {
    }
    return code;
  }
}

}  // namespace shom::cli
