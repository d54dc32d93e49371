#include "shom/torus_spectrum.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "shom/errors.hpp"

namespace shom {

double mode_norm(const Mode& k) noexcept {
  return std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
}

double dot(const Mode& k, const Vec2& v) noexcept { return k[0] * v[0] + k[1] * v[1]; }

TorusSpectrum::TorusSpectrum(int dim, int cutoff, bool real)
    : dim_(dim), cutoff_(cutoff), real_(real) {
  if (dim != 1 && dim != 2) throw InvalidArgument("TorusSpectrum: dim must be 1 or 2");
  if (cutoff < 0) throw InvalidArgument("TorusSpectrum: cutoff must be >= 0");
  const std::size_t s = static_cast<std::size_t>(side());
  coeffs_.assign(dim == 1 ? s : s * s, cplx{});
}

bool TorusSpectrum::contains(const Mode& k) const noexcept {
  if (std::abs(k[0]) > cutoff_) return false;
  if (dim_ == 1) return k[1] == 0;
  return std::abs(k[1]) <= cutoff_;
}

std::size_t TorusSpectrum::index(const Mode& k) const {
  if (!contains(k))
    throw InvalidArgument("TorusSpectrum: mode (" + std::to_string(k[0]) + "," +
                          std::to_string(k[1]) + ") outside cutoff");
  const std::size_t i = static_cast<std::size_t>(k[0] + cutoff_);
  if (dim_ == 1) return i;
  return i + static_cast<std::size_t>(side()) * static_cast<std::size_t>(k[1] + cutoff_);
}

Mode TorusSpectrum::mode(std::size_t idx) const noexcept {
  const int s = side();
  if (dim_ == 1) return {static_cast<int>(idx) - cutoff_, 0};
  return {static_cast<int>(idx % s) - cutoff_, static_cast<int>(idx / s) - cutoff_};
}

cplx TorusSpectrum::operator()(const Mode& k) const noexcept {
  return contains(k) ? coeffs_[index(k)] : cplx{};
}

cplx& TorusSpectrum::at(const Mode& k) { return coeffs_[index(k)]; }

bool TorusSpectrum::is_hermitian(double tol) const {
  const double scale = std::max(1.0, max_abs());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Mode k = mode(i);
    if (std::abs(coeffs_[i] - std::conj((*this)(Mode{-k[0], -k[1]}))) > tol * scale)
      return false;
  }
  return true;
}

double TorusSpectrum::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx TorusSpectrum::evaluate(const Vec2& y) const {
  cplx sum{};
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == cplx{}) continue;
    const Mode k = mode(i);
    const double phase = k[0] * y[0] + (dim_ == 2 ? k[1] * y[1] : 0.0);
    sum += coeffs_[i] * cplx(std::cos(phase), std::sin(phase));
  }
  return real_ ? cplx(sum.real(), 0.0) : sum;
}

double TorusSpectrum::coefficient_norm() const noexcept {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double TorusSpectrum::l2_norm() const noexcept {
  return std::pow(2.0 * std::numbers::pi, 0.5 * dim_) * coefficient_norm();
}

TorusSpectrum TorusSpectrum::with_cutoff(int cutoff) const {
  TorusSpectrum out(dim_, cutoff, real_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Mode k = mode(i);
    if (out.contains(k)) out.at(k) = coeffs_[i];
  }
  return out;
}

void TorusSpectrum::require_compatible(const TorusSpectrum& o) const {
  if (dim_ != o.dim_ || cutoff_ != o.cutoff_)
    throw InvalidArgument("TorusSpectrum: incompatible dim or cutoff");
}

TorusSpectrum& TorusSpectrum::operator+=(const TorusSpectrum& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  real_ = real_ && o.real_;
  return *this;
}

TorusSpectrum& TorusSpectrum::operator-=(const TorusSpectrum& o) {
  require_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  real_ = real_ && o.real_;
  return *this;
}

TorusSpectrum& TorusSpectrum::operator*=(cplx a) {
  for (auto& c : coeffs_) c *= a;
  if (a.imag() != 0.0) real_ = false;
  return *this;
}

TorusSpectrum operator+(TorusSpectrum a, const TorusSpectrum& b) { return a += b; }
TorusSpectrum operator-(TorusSpectrum a, const TorusSpectrum& b) { return a -= b; }
TorusSpectrum operator*(cplx s, TorusSpectrum a) { return a *= s; }

}  // namespace shom
