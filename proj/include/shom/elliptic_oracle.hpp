#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shom/bathymetry.hpp"
#include "shom/slow_field.hpp"

namespace shom {

// Ground-truth Dirichlet-Neumann action on the flattened strip
// box x [-1, 0]: bilinear finite elements on the x-periodic node grid
// x_i = -L/2 + i dx, z_j = -1 + j dz, 2x2 Gauss quadrature. Dirichlet data
// on z = 0, natural (conormal) condition on z = -1. One horizontal
// dimension only.

enum class OracleSolver { direct, conjugate_gradient };

struct OracleOptions {
  int nz = 32;
  OracleSolver solver = OracleSolver::direct;
  double cg_tolerance = 1e-13;
  int cg_max_iterations = 50000;
  /// Admissible depth floor.
  double alpha = 1e-3;
};

/// Transformed coefficients at one quadrature point. det P = 1.
struct CoefficientSample {
  double h;    // 1 + zeta - beta b(X/gamma)
  double p11;  // h
  double p12;  // -sqrt(mu) d_x sigma
  double p22;  // (1 + mu (d_x sigma)^2) / h
};

class StripProblem {
 public:
  double mu() const noexcept;
  double gamma() const noexcept;
  const SlowGrid& grid() const noexcept;
  int nz() const noexcept;
  double dz() const noexcept;
  const OracleOptions& options() const noexcept;

  /// sigma = (z+1) zeta - z beta b(X/gamma) at node (i, j).
  double sigma(int i, int j) const;
  /// Gauss point q = qx + 2 qz of cell (i, j).
  const CoefficientSample& coefficient(int i, int j, int q) const;
  double min_depth() const noexcept;
  /// Smallest eigenvalue of P over all quadrature points.
  double min_eigenvalue() const noexcept;
  std::size_t unknowns() const noexcept;

  struct Impl;

 private:
  explicit StripProblem(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;

  friend StripProblem build_sigma(const SlowField&, const BottomProfile&, double,
                                  const OracleOptions&);
  friend const Impl& strip_impl(const StripProblem&);
};

/// beta = gamma = sqrt(mu). Throws DepthError at the first quadrature
/// point with depth below options.alpha.
StripProblem build_sigma(const SlowField& zeta, const BottomProfile& b, double mu,
                         const OracleOptions& options = {});

struct PotentialSolution {
  int nx = 0;
  int nz = 0;
  std::vector<double> phi;  // node (i, j) at i (nz + 1) + j
  long iterations = 0;
  double residual = 0.0;    // relative, free rows

  double at(int i, int j) const { return phi[static_cast<std::size_t>(i) * (nz + 1) + j]; }
};

/// Throws SolverError if the relative residual exceeds 1e-10.
PotentialSolution solve_potential(const StripProblem& sp, const SlowField& psi);

/// Discrete conormal flux at z = 0 per unit length, (K phi)_top / dx;
/// sum_i psi_i G_i dx equals the discrete energy exactly.
SlowField dn_flux(const StripProblem& sp, const PotentialSolution& solution);

/// G psi (no 1/mu factor).
SlowField dn_apply(const StripProblem& sp, const SlowField& psi);

/// Quadrature of grad_mu phi . P grad_mu phi over the strip, element by
/// element from the nodal values.
double dirichlet_energy(const StripProblem& sp, const PotentialSolution& solution);

/// Binary dump of phi with shape (nx, nz + 1).
void write_potential_dump(const std::string& path, const PotentialSolution& solution);

}  // namespace shom
