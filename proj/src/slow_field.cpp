#include "shom/slow_field.hpp"

#include <cmath>

#include "shom/errors.hpp"

namespace shom {
namespace {

std::vector<int> shape_of(const SlowGrid& g) {
  return g.dim() == 1 ? std::vector<int>{g.n()} : std::vector<int>{g.n(), g.n()};
}

}  // namespace

SlowField::SlowField(const SlowGrid& grid, double value)
    : grid_(grid), values_(grid.size(), value), cache_(std::make_shared<SpectrumCache>()) {}

SlowField::SlowField(const SlowGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), cache_(std::make_shared<SpectrumCache>()) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("SlowField: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidArgument("SlowField: non-finite value");
}

SlowField SlowField::from_function(const SlowGrid& grid,
                                   const std::function<double(const Vec2&)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.point(i));
  return SlowField(grid, std::move(v));
}

SlowField SlowField::from_spectrum(const SlowGrid& grid, std::vector<cplx> spectrum) {
  if (spectrum.size() != grid.size())
    throw InvalidArgument("SlowField: spectrum size does not match grid");
  SlowField out(grid);
  fft_inverse(spectrum, shape_of(grid));
  for (std::size_t i = 0; i < spectrum.size(); ++i) out.values_[i] = spectrum[i].real();
  return out;
}

std::vector<double>& SlowField::mutable_values() {
  cache_ = std::make_shared<SpectrumCache>();
  return values_;
}

double& SlowField::at(std::size_t i) {
  cache_ = std::make_shared<SpectrumCache>();
  return values_.at(i);
}

const std::vector<cplx>& SlowField::spectrum() const {
  std::call_once(cache_->once, [this] {
    auto& c = cache_->coeffs;
    c.assign(values_.begin(), values_.end());
    fft_forward(c, shape_of(grid_));
    const double scale = 1.0 / static_cast<double>(c.size());
    for (auto& z : c) z *= scale;
  });
  return cache_->coeffs;
}

void require_same_grid(const SlowField& a, const SlowField& b, const char* where) {
  if (!(a.grid() == b.grid()))
    throw InvalidArgument(std::string(where) + ": fields live on different grids");
}

SlowField& SlowField::operator+=(const SlowField& o) {
  require_same_grid(*this, o, "operator+=");
  auto& v = mutable_values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
  return *this;
}

SlowField& SlowField::operator-=(const SlowField& o) {
  require_same_grid(*this, o, "operator-=");
  auto& v = mutable_values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
  return *this;
}

SlowField& SlowField::operator*=(double a) {
  for (auto& x : mutable_values()) x *= a;
  return *this;
}

SlowField operator+(SlowField a, const SlowField& b) { return a += b; }
SlowField operator-(SlowField a, const SlowField& b) { return a -= b; }
SlowField operator*(double s, SlowField a) { return a *= s; }
SlowField operator*(SlowField a, double s) { return a *= s; }

SlowField pointwise(const SlowField& a, const SlowField& b) {
  require_same_grid(a, b, "pointwise");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return SlowField(a.grid(), std::move(v));
}

SlowField map(const SlowField& a, const std::function<double(double)>& f) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(a[i]);
  return SlowField(a.grid(), std::move(v));
}

}  // namespace shom
