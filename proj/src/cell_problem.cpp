#include "shom/cell_problem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <numbers>

#include "shom/errors.hpp"
#include "shom/spectral.hpp"

namespace shom {
namespace {

// Vertical profile factors of one mode with a = h0 |k| > 0.
struct Hyperbolic {
  double c, s, dc, ds;  // C, S and their z-derivatives
};

Hyperbolic hyperbolic(double a, double z) {
  const double denom = 1.0 + std::exp(-2.0 * a);
  const double ez = std::exp(a * z);
  const double e2 = std::exp(-2.0 * a * (z + 1.0));
  const double up = std::exp(a * (z - 1.0));
  const double down = std::exp(-a * (z + 1.0));
  return {ez * (1.0 + e2) / denom, (up - down) / denom, a * ez * (1.0 - e2) / denom,
          a * (up + down) / denom};
}

TorusSpectrum closed_form_at(const CellData& d, double z, bool derivative) {
  TorusSpectrum out(d.psi1.dim(), d.psi1.cutoff(), true);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Mode k = out.mode(i);
    const double nk = mode_norm(k);
    if (nk == 0.0) continue;
    const Hyperbolic h = hyperbolic(d.h0 * nk, z);
    const cplx forcing = cplx(0.0, dot(k, d.grad_psi0) / nk) * d.bottom(k);
    out[i] = derivative ? h.dc * d.psi1[i] + h.ds * forcing : h.c * d.psi1[i] + h.s * forcing;
  }
  return out;
}

// Fourier coefficients of the bottom datum grad_psi0 . grad_Y b.
TorusSpectrum bottom_datum(const TorusSpectrum& b, const Vec2& grad_psi0, int cutoff) {
  TorusSpectrum out(b.dim(), cutoff, true);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Mode k = out.mode(i);
    out[i] = cplx(0.0, dot(k, grad_psi0)) * b(k);
  }
  return out;
}

void require_zero_mean(const TorusSpectrum& psi1, const char* where) {
  if (std::abs(psi1.zero_mode()) > 1e-14 * std::max(1.0, psi1.max_abs()))
    throw InvalidArgument(std::string(where) + ": psi1 must have zero fast mean");
}

}  // namespace

VerticalProfileField::VerticalProfileField(std::vector<TorusSpectrum> levels,
                                           std::optional<CellData> closed_form)
    : levels_(std::move(levels)), closed_form_(std::move(closed_form)) {
  if (levels_.size() < 3) throw InvalidArgument("VerticalProfileField: need nz >= 2");
}

TorusSpectrum VerticalProfileField::at(double z) const {
  if (z < -1.0 - 1e-12 || z > 1e-12) throw InvalidArgument("VerticalProfileField: z outside [-1,0]");
  if (closed_form_) return closed_form_at(*closed_form_, z, false);
  const double s = (z + 1.0) * nz();
  const int j = std::clamp(static_cast<int>(std::floor(s)), 0, nz() - 1);
  const double w = s - j;
  return (1.0 - w) * levels_[j] + w * levels_[j + 1];
}

TorusSpectrum VerticalProfileField::dz_at(double z) const {
  if (closed_form_) return closed_form_at(*closed_form_, z, true);
  const int j = std::clamp(static_cast<int>(std::lround((z + 1.0) * nz())), 0, nz());
  const double h = dz();
  if (j == 0) return (-1.5 / h) * levels_[0] + (2.0 / h) * levels_[1] + (-0.5 / h) * levels_[2];
  if (j == nz())
    return (1.5 / h) * levels_[j] + (-2.0 / h) * levels_[j - 1] + (0.5 / h) * levels_[j - 2];
  return (0.5 / h) * (levels_[j + 1] - levels_[j - 1]);
}

std::vector<double> VerticalProfileField::physical_samples(int ny) const {
  std::vector<double> out;
  for (const auto& l : levels_) {
    const auto s = torus_samples(l, ny);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

VerticalProfileField solve_cell(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                                const Vec2& grad_psi0, int nz) {
  if (!(h0 > 0.0)) throw InvalidArgument("solve_cell: h0 must be positive");
  if (nz < 2) throw InvalidArgument("solve_cell: nz must be >= 2");
  if (psi1.dim() != b.dim()) throw InvalidArgument("solve_cell: dimension mismatch");
  require_zero_mean(psi1, "solve_cell");
  const int cutoff = std::max(psi1.cutoff(), b.cutoff());
  CellData data{h0, psi1.with_cutoff(cutoff), b.spectrum().with_cutoff(cutoff), grad_psi0};
  data.psi1.set_real(true);
  std::vector<TorusSpectrum> levels;
  for (int j = 0; j <= nz; ++j) levels.push_back(closed_form_at(data, -1.0 + j / double(nz), false));
  return VerticalProfileField(std::move(levels), std::move(data));
}

double cell_residual(const VerticalProfileField& phi, double h0, const BottomProfile& b,
                     const Vec2& grad_psi0) {
  const int nz = phi.nz();
  const double h = phi.dz();
  const TorusSpectrum g = bottom_datum(b.spectrum(), grad_psi0, phi.cutoff());
  double worst = 0.0;
  for (std::size_t i = 0; i < phi.level(0).size(); ++i) {
    const Mode k = phi.level(0).mode(i);
    const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
    double interior = 0.0;
    for (int j = 1; j < nz; ++j) {
      const cplx d2 = (phi.level(j + 1)[i] - 2.0 * phi.level(j)[i] + phi.level(j - 1)[i]) / (h * h);
      interior = std::max(interior, std::abs(-h0 * h0 * k2 * phi.level(j)[i] + d2));
    }
    const cplx dz_bottom =
        (-1.5 * phi.level(0)[i] + 2.0 * phi.level(1)[i] - 0.5 * phi.level(2)[i]) / h;
    double defect = interior + std::abs(dz_bottom / h0 - g[i]);
    if (phi.has_closed_form()) defect += std::abs(phi.level(nz)[i] - phi.closed_form()->psi1[i]);
    worst = std::max(worst, defect);
  }
  return worst;
}

TorusSpectrum dn_trace_fast(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                            const Vec2& grad_psi0) {
  require_zero_mean(psi1, "dn_trace_fast");
  const TorusSpectrum sb = op_sech(h0, b.spectrum().with_cutoff(psi1.cutoff()));
  TorusSpectrum out = op_dn_tanh(h0, psi1);
  const auto grad = torus_gradient(sb);
  for (int j = 0; j < psi1.dim(); ++j) out += cplx(grad_psi0[j]) * grad[j];
  out.set_real(true);
  return out;
}

SlowColumnProfile::SlowColumnProfile(SlowField coefficient, int nz)
    : coefficient_(std::move(coefficient)), nz_(nz) {
  if (nz < 2) throw InvalidArgument("SlowColumnProfile: nz must be >= 2");
}

double SlowColumnProfile::value(std::size_t p, double z) const noexcept {
  return coefficient_[p] * (0.5 * z * z + z);
}

double SlowColumnProfile::dz(std::size_t p, double z) const noexcept {
  return coefficient_[p] * (z + 1.0);
}

SlowField SlowColumnProfile::at(double z) const { return (0.5 * z * z + z) * coefficient_; }

SlowColumnProfile phi0_first_corrector(const SlowField& h0, const SlowField& psi0, int nz) {
  require_same_grid(h0, psi0, "phi0_first_corrector");
  const SlowField lap = laplacian(psi0);
  SlowField coef = map(h0, [](double h) { return -h * h; });
  return SlowColumnProfile(pointwise(coef, lap), nz);
}

CellOracleSolution oracle_cell_solve(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                                     const Vec2& grad_psi0, int ny, int nz) {
  if (ny < 16 || nz < 16) throw InvalidArgument("oracle_cell_solve: need ny, nz >= 16");
  if (ny % 2) throw InvalidArgument("oracle_cell_solve: ny must be even");
  if (!(h0 > 0.0)) throw InvalidArgument("oracle_cell_solve: h0 must be positive");
  require_zero_mean(psi1, "oracle_cell_solve");
  const int d = psi1.dim();
  const std::size_t plane = d == 1 ? ny : static_cast<std::size_t>(ny) * ny;
  const std::size_t unknowns = plane * static_cast<std::size_t>(nz);
  const double dy = 2.0 * std::numbers::pi / ny;
  const double dz = 1.0 / nz;
  const double cy = h0 * h0 / (dy * dy);
  const double cz = 1.0 / (dz * dz);

  const auto top = torus_samples(psi1, ny);
  const int cutoff = std::max(psi1.cutoff(), b.cutoff());
  const auto datum = torus_samples(bottom_datum(b.spectrum(), grad_psi0, cutoff), ny);

  auto neighbours = [&](std::size_t p) {
    std::vector<std::size_t> nb;
    const int ix = static_cast<int>(p % ny);
    const int iy = d == 1 ? 0 : static_cast<int>(p / ny);
    auto id = [&](int a, int c) {
      return static_cast<std::size_t>((a + ny) % ny) + (d == 1 ? 0 : static_cast<std::size_t>(ny) * ((c + ny) % ny));
    };
    nb.push_back(id(ix - 1, iy));
    nb.push_back(id(ix + 1, iy));
    if (d == 2) {
      nb.push_back(id(ix, iy - 1));
      nb.push_back(id(ix, iy + 1));
    }
    return nb;
  };

  // Negated operator, bottom row halved so the matrix is symmetric.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(unknowns * (3 + 2 * d));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));
  for (int j = 0; j < nz; ++j) {
    const double w = j == 0 ? 0.5 : 1.0;
    for (std::size_t p = 0; p < plane; ++p) {
      const auto row = static_cast<Eigen::Index>(p + plane * j);
      trip.emplace_back(row, row, w * (2.0 * d * cy + 2.0 * cz));
      for (auto q : neighbours(p)) trip.emplace_back(row, static_cast<Eigen::Index>(q + plane * j), -w * cy);
      if (j == 0) {
        trip.emplace_back(row, static_cast<Eigen::Index>(p + plane), -cz);
        rhs[row] -= h0 * datum[p] / dz;
      } else {
        trip.emplace_back(row, static_cast<Eigen::Index>(p + plane * (j - 1)), -cz);
        if (j + 1 < nz)
          trip.emplace_back(row, static_cast<Eigen::Index>(p + plane * (j + 1)), -cz);
        else
          rhs[row] += cz * top[p];
      }
    }
  }
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd x;
  long iterations = 1;
  if (d == 1) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw SolverError("oracle_cell_solve: factorisation failed", 0, INFINITY);
    x = solver.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> solver;
    solver.setTolerance(1e-13);
    solver.setMaxIterations(20000);
    solver.compute(A);
    x = solver.solve(rhs);
    iterations = solver.iterations();
    if (solver.info() != Eigen::Success)
      throw SolverError("oracle_cell_solve: CG did not converge", iterations, solver.error());
  }
  const double residual = (A * x - rhs).norm() / std::max(1e-300, rhs.norm());
  if (!std::isfinite(residual) || residual > 1e-8)
    throw SolverError("oracle_cell_solve: inaccurate solve", iterations, residual);

  std::vector<double> samples(plane * (nz + 1));
  for (std::size_t i = 0; i < unknowns; ++i) samples[i] = x[static_cast<Eigen::Index>(i)];
  for (std::size_t p = 0; p < plane; ++p) samples[p + plane * nz] = top[p];
  const int proj = std::min(cutoff, ny / 2 - 1);
  std::vector<TorusSpectrum> levels;
  for (int j = 0; j <= nz; ++j) {
    std::vector<double> slice(samples.begin() + static_cast<long>(plane * j),
                              samples.begin() + static_cast<long>(plane * (j + 1)));
    levels.push_back(torus_from_samples(slice, d, ny, proj).with_cutoff(cutoff));
  }
  return CellOracleSolution{ny, nz, std::move(samples),
                            VerticalProfileField(std::move(levels), std::nullopt), iterations,
                            residual};
}

double cell_oracle_error(double h0, const TorusSpectrum& psi1, const BottomProfile& b,
                         const Vec2& grad_psi0, int ny, int nz) {
  const CellOracleSolution fd = oracle_cell_solve(h0, psi1, b, grad_psi0, ny, nz);
  const VerticalProfileField exact = solve_cell(h0, psi1, b, grad_psi0, nz);
  const auto ref = exact.physical_samples(ny);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num += (fd.samples[i] - ref[i]) * (fd.samples[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace shom
