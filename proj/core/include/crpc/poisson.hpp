#pragma once

#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "crpc/grid.hpp"

namespace crpc {

/// Dirichlet data on the boundary ring, one value per angular node.
using BoundaryData = std::vector<double>;

BoundaryData boundary_from_function(const PolarGrid& grid,
                                    const std::function<double(double theta)>& fn);

/// Solve laplacian(u) = rhs on rings 0..n_r-1 with u = boundary on ring n_r.
///
/// The discrete Laplacian is exactly the one of `laplacian()`: each angular
/// mode gives a small banded radial system which is LU-factored once per grid.
ScalarField solve_poisson(const ScalarField& rhs, const BoundaryData& boundary);
ScalarField solve_poisson(const ScalarField& rhs);  // zero boundary

ScalarField harmonic_extension(const PolarGrid& grid, const BoundaryData& boundary);

/// a11 u_xx + a12 u_xy + a22 u_yy + a1 u_x + a2 u_y
struct EllipticCoefficients {
  ScalarField a1, a2, a11, a12, a22;

  static EllipticCoefficients laplacian(const PolarGrid& grid);
  ScalarField apply(const DerivativeBundle& u) const;
  ScalarField apply(const ScalarField& u) const;
  // Throws NotElliptic unless 4 a11 a22 - a12^2 > 0 and a11 > 0 at every node.
  void check_elliptic() const;
};

enum class EllipticMethod { Krylov, Direct };
enum class Preconditioner { SpectralLaplacian, Diagonal };

struct EllipticOptions {
  EllipticMethod method = EllipticMethod::Krylov;
  Preconditioner preconditioner = Preconditioner::SpectralLaplacian;
  double rel_tol = 1e-10;
  long max_iter = 0;  // 0: 10 * number of unknowns
};

struct EllipticStats {
  long iterations = 0;
  double relative_residual = 0.0;
};

/// Variable-coefficient Dirichlet solver for the same discrete operator as
/// EllipticCoefficients::apply. Throws NotElliptic, NoConvergence.
class EllipticSolver {
public:
  explicit EllipticSolver(EllipticCoefficients coeffs, EllipticOptions options = {});
  ~EllipticSolver();
  EllipticSolver(EllipticSolver&&) noexcept;
  EllipticSolver& operator=(EllipticSolver&&) noexcept;

  ScalarField solve(const ScalarField& rhs, const BoundaryData& boundary) const;
  ScalarField solve(const ScalarField& rhs) const;

  const EllipticCoefficients& coefficients() const noexcept { return coeffs_; }
  const EllipticStats& last_stats() const noexcept { return stats_; }

  // Operator on interior unknowns (pole + rings 1..n_r-1, packed order) with
  // zero boundary; assembled by columns from the matrix-free apply.
  Eigen::SparseMatrix<double> assemble() const;
  Eigen::VectorXd apply_interior(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;

  struct Impl;

private:
  EllipticCoefficients coeffs_;
  EllipticOptions options_;
  mutable EllipticStats stats_;
  std::unique_ptr<Impl> impl_;
};

ScalarField solve_elliptic(const EllipticCoefficients& coeffs, const ScalarField& rhs,
                           const BoundaryData& boundary, const EllipticOptions& options = {});

}  // namespace crpc
