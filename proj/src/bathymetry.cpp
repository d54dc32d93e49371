#include "shom/bathymetry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "shom/errors.hpp"
#include "shom/spectral.hpp"

namespace shom {
namespace {

std::string mode_text(const Mode& k) {
  return "(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")";
}

}  // namespace

int default_cutoff(const ModeMap& coeffs) {
  int count = 0;
  int widest = 0;
  for (const auto& [k, c] : coeffs) {
    if (std::abs(c) <= kActiveModeFloor) continue;
    ++count;
    widest = std::max({widest, std::abs(k[0]), std::abs(k[1])});
  }
  return std::max(count + 8, widest);
}

BottomProfile::BottomProfile(int dim, int cutoff) : BottomProfile(TorusSpectrum(dim, cutoff, true)) {}

BottomProfile::BottomProfile(TorusSpectrum s) : spectrum_(std::move(s)) {
  amplitude_norm_ = spectrum_.l2_norm();
  for (std::size_t i = 0; i < spectrum_.size(); ++i)
    if (std::abs(spectrum_[i]) > kActiveModeFloor) active_.push_back(spectrum_.mode(i));
}

BottomProfile BottomProfile::from_modes(const ModeMap& coeffs, int dim, int cutoff) {
  if (dim != 1 && dim != 2) throw InvalidArgument("from_modes: dim must be 1 or 2");
  if (cutoff < 0) cutoff = default_cutoff(coeffs);
  TorusSpectrum s(dim, cutoff, true);
  for (const auto& [k, c] : coeffs) {
    if (dim == 1 && k[1] != 0)
      throw InvalidArgument("from_modes: mode " + mode_text(k) + " has a second component in d=1");
    if (k[0] == 0 && k[1] == 0) {
      if (std::abs(c) != 0.0)
        throw InvalidArgument("from_modes: bottom must have zero mean (k=0 coefficient given)");
      continue;
    }
    if (!s.contains(k))
      throw InvalidArgument("from_modes: mode " + mode_text(k) + " exceeds cutoff " +
                            std::to_string(cutoff));
    s.at(k) = c;
  }
  if (!s.is_hermitian(1e-14))
    throw InvalidArgument("from_modes: coefficients are not Hermitian (need c(-k) = conj c(k))");
  return BottomProfile(std::move(s));
}

int BottomProfile::max_active_mode() const noexcept {
  int m = 0;
  for (const auto& k : active_) m = std::max({m, std::abs(k[0]), std::abs(k[1])});
  return m;
}

BottomProfile BottomProfile::scaled(double c) const {
  TorusSpectrum s = spectrum_;
  s *= c;
  s.set_real(true);
  return BottomProfile(std::move(s));
}

SlowField realize_bottom(const BottomProfile& b, double gamma, const SlowGrid& grid) {
  if (grid.dim() != b.dim()) throw InvalidArgument("realize_bottom: dimension mismatch");
  return realize(b.spectrum(), gamma, grid);
}

SlowField realize_bottom_derivative(const BottomProfile& b, double gamma, const SlowGrid& grid,
                                    int axis) {
  if (grid.dim() != b.dim()) throw InvalidArgument("realize_bottom_derivative: dimension mismatch");
  auto g = torus_gradient(b.spectrum());
  g.at(static_cast<std::size_t>(axis)).set_real(true);
  return (1.0 / gamma) * realize(g[static_cast<std::size_t>(axis)], gamma, grid);
}

BottomProfile cosine_bottom(int dim, double amplitude, int cutoff) {
  ModeMap m{{Mode{1, 0}, 0.5 * amplitude}, {Mode{-1, 0}, 0.5 * amplitude}};
  return BottomProfile::from_modes(m, dim, cutoff);
}

BottomProfile two_mode_bottom(int dim, double amplitude, int cutoff) {
  const double a = 0.5 * amplitude;
  ModeMap m{{Mode{1, 0}, a}, {Mode{-1, 0}, a}};
  if (dim == 1) {
    m[Mode{2, 0}] = 0.5 * a;
    m[Mode{-2, 0}] = 0.5 * a;
  } else {
    m[Mode{0, 1}] = 0.5 * a;
    m[Mode{0, -1}] = 0.5 * a;
  }
  return BottomProfile::from_modes(m, dim, cutoff);
}

BottomProfile random_phase_bottom(int dim, double amplitude, double decay, int kmax,
                                  std::uint64_t seed, int cutoff) {
  if (kmax < 1) throw InvalidArgument("random_phase_bottom: kmax must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  ModeMap m;
  const int k2max = dim == 1 ? 0 : kmax;
  for (int k2 = -k2max; k2 <= k2max; ++k2)
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
      const Mode k{k1, k2};
      const Mode minus{-k1, -k2};
      if ((k1 == 0 && k2 == 0) || m.count(k)) continue;
      const double a = amplitude * std::exp(-decay * mode_norm(k));
      const cplx c = std::polar(a, phase(rng));
      m[k] = c;
      m[minus] = std::conj(c);
    }
  if (cutoff < 0) cutoff = std::max(kmax, default_cutoff(m));
  return BottomProfile::from_modes(m, dim, cutoff);
}

BottomProfile flat_bottom(int dim, int cutoff) { return BottomProfile(dim, cutoff); }

BottomProfile bottom_preset(const std::string& name, int dim, double amplitude, double decay,
                            int kmax, std::uint64_t seed, int cutoff) {
  if (name == "cos") return cosine_bottom(dim, amplitude, cutoff);
  if (name == "two_mode") return two_mode_bottom(dim, amplitude, cutoff);
  if (name == "random_phase")
    return random_phase_bottom(dim, amplitude, decay, kmax, seed, cutoff);
  if (name == "flat") return flat_bottom(dim, cutoff < 0 ? 8 : cutoff);
  throw InvalidArgument("unknown bottom preset '" + name + "'");
}

}  // namespace shom
