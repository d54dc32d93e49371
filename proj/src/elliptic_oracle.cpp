#include "shom/elliptic_oracle.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <array>
#include <cmath>
#include <mutex>
#include <sstream>

#include "shom/errors.hpp"
#include "shom/field_io.hpp"
#include "shom/spectral.hpp"

namespace shom {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

namespace {

constexpr double kSolveTolerance = 1e-10;
const std::array<double, 2> kGauss{0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

// Bilinear shape-function derivatives on the reference cell at (s, t);
// node order (0,0), (1,0), (0,1), (1,1).
std::array<double, 4> dn_ds(double t) { return {-(1 - t), 1 - t, -t, t}; }
std::array<double, 4> dn_dt(double s) { return {-(1 - s), -s, 1 - s, s}; }

}  // namespace

struct StripProblem::Impl {
  double mu = 0.0;
  double gamma = 0.0;
  SlowGrid grid;
  int nz = 0;
  OracleOptions options;
  std::vector<double> sigma;                   // nx (nz+1)
  std::vector<CoefficientSample> coefficients;  // nx nz 4
  double min_depth = 0.0;
  double min_eigenvalue = 0.0;

  SpMat k_free;  // free-free block, free node (i, j < nz) at i nz + j
  SpMat k_top;   // free-top block
  SpMat k_tt;    // top-top block
  SpMat k_tf;    // top-free block

  mutable std::once_flag factor_once;
  mutable std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt;
  mutable std::mutex ldlt_error_mutex;

  explicit Impl(const SlowGrid& g) : grid(g) {}

  int nx() const { return grid.n(); }
  std::size_t node(int i, int j) const {
    return static_cast<std::size_t>((i % nx() + nx()) % nx()) * (nz + 1) + j;
  }
};

const StripProblem::Impl& strip_impl(const StripProblem& sp) { return *sp.impl_; }

double StripProblem::mu() const noexcept { return impl_->mu; }
double StripProblem::gamma() const noexcept { return impl_->gamma; }
const SlowGrid& StripProblem::grid() const noexcept { return impl_->grid; }
int StripProblem::nz() const noexcept { return impl_->nz; }
double StripProblem::dz() const noexcept { return 1.0 / impl_->nz; }
const OracleOptions& StripProblem::options() const noexcept { return impl_->options; }
double StripProblem::min_depth() const noexcept { return impl_->min_depth; }
double StripProblem::min_eigenvalue() const noexcept { return impl_->min_eigenvalue; }
std::size_t StripProblem::unknowns() const noexcept {
  return static_cast<std::size_t>(impl_->nx()) * impl_->nz;
}

double StripProblem::sigma(int i, int j) const {
  if (i < 0 || i >= impl_->nx() || j < 0 || j > impl_->nz)
    throw InvalidArgument("StripProblem::sigma: node out of range");
  return impl_->sigma[impl_->node(i, j)];
}

const CoefficientSample& StripProblem::coefficient(int i, int j, int q) const {
  if (i < 0 || i >= impl_->nx() || j < 0 || j >= impl_->nz || q < 0 || q > 3)
    throw InvalidArgument("StripProblem::coefficient: index out of range");
  return impl_->coefficients[(static_cast<std::size_t>(i) * impl_->nz + j) * 4 + q];
}

StripProblem build_sigma(const SlowField& zeta, const BottomProfile& b, double mu,
                         const OracleOptions& options) {
  const SlowGrid& g = zeta.grid();
  if (g.dim() != 1) throw InvalidArgument("build_sigma: the strip oracle is one-dimensional");
  if (b.dim() != 1) throw InvalidArgument("build_sigma: bottom must be one-dimensional");
  if (!(mu > 0.0)) throw InvalidArgument("build_sigma: mu must be positive");
  if (options.nz < 2) throw InvalidArgument("build_sigma: nz must be >= 2");

  auto impl = std::make_shared<StripProblem::Impl>(g);
  impl->mu = mu;
  impl->gamma = std::sqrt(mu);
  impl->nz = options.nz;
  impl->options = options;
  const double beta = impl->gamma, gamma = impl->gamma, sqmu = std::sqrt(mu);
  const int nx = g.n(), nz = options.nz;
  const double dx = g.dx(), dz = 1.0 / nz;

  const TorusSpectrum& bs = b.spectrum();
  TorusSpectrum dbs = torus_gradient(bs)[0];
  auto bottom = [&](double x) { return bs.evaluate({x / gamma, 0.0}).real(); };
  auto bottom_dx = [&](double x) { return dbs.evaluate({x / gamma, 0.0}).real() / gamma; };

  impl->sigma.resize(static_cast<std::size_t>(nx) * (nz + 1));
  impl->min_depth = INFINITY;
  auto check_depth = [&](double h, double x) {
    if (!(h >= options.alpha)) {
      std::ostringstream msg;
      msg << "strip depth 1 + zeta - beta b = " << h << " below " << options.alpha << " at x = " << x;
      throw DepthError(msg.str(), x, 0.0, h);
    }
    impl->min_depth = std::min(impl->min_depth, h);
  };
  for (int i = 0; i < nx; ++i) {
    const double x = g.coord(i);
    const double bb = bottom(x);
    check_depth(1.0 + zeta[i] - beta * bb, x);
    for (int j = 0; j <= nz; ++j) {
      const double z = -1.0 + j * dz;
      impl->sigma[impl->node(i, j)] = (z + 1.0) * zeta[i] - z * beta * bb;
    }
  }

  const SlowField zeta_x = derivative(zeta, 0);
  std::array<SlowField, 2> zq{shifted(zeta, {kGauss[0] * dx, 0.0}), shifted(zeta, {kGauss[1] * dx, 0.0})};
  std::array<SlowField, 2> zxq{shifted(zeta_x, {kGauss[0] * dx, 0.0}),
                               shifted(zeta_x, {kGauss[1] * dx, 0.0})};

  impl->coefficients.resize(static_cast<std::size_t>(nx) * nz * 4);
  impl->min_eigenvalue = INFINITY;
  std::vector<Eigen::Triplet<double>> tf, tt, tft, ttf;
  tf.reserve(static_cast<std::size_t>(nx) * nz * 16);

  for (int i = 0; i < nx; ++i) {
    std::array<double, 2> h{}, db{}, zx{};
    for (int qx = 0; qx < 2; ++qx) {
      const double x = g.coord(i) + kGauss[qx] * dx;
      h[qx] = 1.0 + zq[qx][i] - beta * bottom(x);
      check_depth(h[qx], x);
      db[qx] = bottom_dx(x);
      zx[qx] = zxq[qx][i];
    }
    for (int j = 0; j < nz; ++j) {
      std::array<std::array<double, 4>, 4> kl{};
      for (int qz = 0; qz < 2; ++qz)
        for (int qx = 0; qx < 2; ++qx) {
          const double z = -1.0 + (j + kGauss[qz]) * dz;
          const double sx = (z + 1.0) * zx[qx] - z * beta * db[qx];
          CoefficientSample c{h[qx], h[qx], -sqmu * sx, (1.0 + mu * sx * sx) / h[qx]};
          impl->coefficients[(static_cast<std::size_t>(i) * nz + j) * 4 + qx + 2 * qz] = c;
          const double tr = 0.5 * (c.p11 + c.p22);
          const double disc = std::sqrt(0.25 * (c.p11 - c.p22) * (c.p11 - c.p22) + c.p12 * c.p12);
          impl->min_eigenvalue = std::min(impl->min_eigenvalue, tr - disc);

          const auto ds = dn_ds(kGauss[qz]);
          const auto dt = dn_dt(kGauss[qx]);
          const double w = 0.25 * dx * dz;
          for (int a = 0; a < 4; ++a) {
            const double ax = sqmu * ds[a] / dx, az = dt[a] / dz;
            for (int bnode = 0; bnode < 4; ++bnode) {
              const double bx = sqmu * ds[bnode] / dx, bz = dt[bnode] / dz;
              kl[a][bnode] += w * (c.p11 * ax * bx + c.p12 * (ax * bz + az * bx) + c.p22 * az * bz);
            }
          }
        }
      const std::array<std::pair<int, int>, 4> nodes{
          {{i, j}, {(i + 1) % nx, j}, {i, j + 1}, {(i + 1) % nx, j + 1}}};
      for (int a = 0; a < 4; ++a)
        for (int bnode = 0; bnode < 4; ++bnode) {
          const auto [ia, ja] = nodes[a];
          const auto [ib, jb] = nodes[bnode];
          const bool top_a = ja == nz, top_b = jb == nz;
          const int ra = top_a ? ia : ia * nz + ja;
          const int rb = top_b ? ib : ib * nz + jb;
          const double v = kl[a][bnode];
          if (!top_a && !top_b) tf.emplace_back(ra, rb, v);
          else if (!top_a && top_b) tft.emplace_back(ra, rb, v);
          else if (top_a && !top_b) ttf.emplace_back(ra, rb, v);
          else tt.emplace_back(ra, rb, v);
        }
    }
  }
  const int nf = nx * nz;
  impl->k_free.resize(nf, nf);
  impl->k_free.setFromTriplets(tf.begin(), tf.end());
  impl->k_top.resize(nf, nx);
  impl->k_top.setFromTriplets(tft.begin(), tft.end());
  impl->k_tf.resize(nx, nf);
  impl->k_tf.setFromTriplets(ttf.begin(), ttf.end());
  impl->k_tt.resize(nx, nx);
  impl->k_tt.setFromTriplets(tt.begin(), tt.end());
  return StripProblem(std::move(impl));
}

PotentialSolution solve_potential(const StripProblem& sp, const SlowField& psi) {
  const auto& im = strip_impl(sp);
  if (!(psi.grid() == im.grid)) throw InvalidArgument("solve_potential: psi grid differs from the strip");
  const int nx = im.nx(), nz = im.nz;
  Vec top(nx);
  for (int i = 0; i < nx; ++i) top[i] = psi[i];
  const Vec rhs = -(im.k_top * top);

  PotentialSolution out;
  out.nx = nx;
  out.nz = nz;
  Vec x;
  if (im.options.solver == OracleSolver::direct) {
    std::call_once(im.factor_once, [&] {
      im.ldlt = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(im.k_free);
    });
    if (im.ldlt->info() != Eigen::Success)
      throw SolverError("solve_potential: sparse LDLT factorization failed", 0, INFINITY);
    x = im.ldlt->solve(rhs);
  } else {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(im.options.cg_tolerance);
    cg.setMaxIterations(im.options.cg_max_iterations);
    cg.compute(im.k_free);
    x = cg.solve(rhs);
    out.iterations = cg.iterations();
  }
  const double scale = rhs.norm();
  out.residual = scale > 0.0 ? (im.k_free * x - rhs).norm() / scale : (im.k_free * x).norm();
  if (!(out.residual <= kSolveTolerance)) {
    std::ostringstream msg;
    msg << "solve_potential: relative residual " << out.residual << " after " << out.iterations
        << " iterations exceeds " << kSolveTolerance;
    throw SolverError(msg.str(), out.iterations, out.residual);
  }
  out.phi.resize(static_cast<std::size_t>(nx) * (nz + 1));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nz; ++j) out.phi[im.node(i, j)] = x[i * nz + j];
    out.phi[im.node(i, nz)] = psi[i];
  }
  return out;
}

SlowField dn_flux(const StripProblem& sp, const PotentialSolution& s) {
  const auto& im = strip_impl(sp);
  if (s.nx != im.nx() || s.nz != im.nz) throw InvalidArgument("dn_flux: solution shape differs");
  const int nx = im.nx(), nz = im.nz;
  Vec free(nx * nz), top(nx);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nz; ++j) free[i * nz + j] = s.at(i, j);
    top[i] = s.at(i, nz);
  }
  const Vec flux = im.k_tf * free + im.k_tt * top;
  std::vector<double> g(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) g[i] = flux[i] / im.grid.dx();
  return SlowField(im.grid, std::move(g));
}

SlowField dn_apply(const StripProblem& sp, const SlowField& psi) {
  return dn_flux(sp, solve_potential(sp, psi));
}

double dirichlet_energy(const StripProblem& sp, const PotentialSolution& s) {
  const auto& im = strip_impl(sp);
  const int nx = im.nx(), nz = im.nz;
  const double dx = im.grid.dx(), dz = 1.0 / nz, sqmu = std::sqrt(im.mu);
  double e = 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nz; ++j) {
      const std::array<double, 4> v{s.at(i, j), s.at((i + 1) % nx, j), s.at(i, j + 1),
                                    s.at((i + 1) % nx, j + 1)};
      for (int qz = 0; qz < 2; ++qz)
        for (int qx = 0; qx < 2; ++qx) {
          const auto ds = dn_ds(kGauss[qz]);
          const auto dt = dn_dt(kGauss[qx]);
          double gx = 0.0, gz = 0.0;
          for (int a = 0; a < 4; ++a) {
            gx += ds[a] * v[a];
            gz += dt[a] * v[a];
          }
          gx *= sqmu / dx;
          gz /= dz;
          const auto& c = sp.coefficient(i, j, qx + 2 * qz);
          e += 0.25 * dx * dz * (c.p11 * gx * gx + 2.0 * c.p12 * gx * gz + c.p22 * gz * gz);
        }
    }
  return e;
}

void write_potential_dump(const std::string& path, const PotentialSolution& s) {
  write_dump(path, {static_cast<std::uint32_t>(s.nx), static_cast<std::uint32_t>(s.nz + 1)}, s.phi);
}

}  // namespace shom
