#include "crpc/poisson.hpp"

#include <cmath>

#include "crpc/error.hpp"
#include "grid_operators.hpp"

namespace crpc {

BoundaryData boundary_from_function(const PolarGrid& grid,
                                    const std::function<double(double)>& fn) {
  BoundaryData b(grid.n_theta());
  for (int k = 0; k < grid.n_theta(); ++k) {
    b[k] = fn(grid.theta(k));
    if (!std::isfinite(b[k])) fail(ErrorKind::NonFiniteSample, "boundary data not finite");
  }
  return b;
}

ScalarField solve_poisson(const ScalarField& rhs, const BoundaryData& boundary) {
  const PolarGrid& grid = rhs.grid();
  const auto& ops = grid.ops();
  const int n_r = grid.n_r();
  const int nt = grid.n_theta();
  if (static_cast<int>(boundary.size()) != nt) {
    fail(ErrorKind::GridMismatch, "boundary data has " + std::to_string(boundary.size()) +
                                      " samples, grid has " + std::to_string(nt) + " angles");
  }
  for (double v : rhs.values()) {
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteSample, "Poisson right side not finite");
  }

  // Fourier coefficients of every ring (rows = rings).
  Eigen::MatrixXd coeff(n_r + 1, nt);
  for (int j = 1; j <= n_r; ++j) {
    Eigen::Map<const Eigen::VectorXd> ring(j == n_r ? boundary.data() : rhs.ring(j).data(), nt);
    coeff.row(j) = (ops.fourier_fwd * ring).transpose();
  }

  Eigen::MatrixXd sol = Eigen::MatrixXd::Zero(n_r + 1, nt);
  sol.row(n_r) = coeff.row(n_r);
  double pole = 0.0;
  for (int c = 0; c < nt; ++c) {
    const int k = ops.coeff_mode[c];
    const int offset = (k == 0) ? 0 : 1;
    Eigen::VectorXd b(n_r - offset);
    if (k == 0) b[0] = rhs.pole_value();
    for (int j = 1; j < n_r; ++j) b[j - offset] = coeff(j, c);
    b -= ops.mode_boundary_weight[k] * coeff(n_r, c);
    const Eigen::VectorXd x = ops.mode_lu[k].solve(b);
    if (k == 0) pole = x[0];
    for (int j = 1; j < n_r; ++j) sol(j, c) = x[j - offset];
  }

  std::vector<double> values(grid.storage_size());
  for (int k = 0; k < nt; ++k) values[k] = pole;
  for (int j = 1; j <= n_r; ++j) {
    const Eigen::VectorXd ring = ops.fourier_inv * sol.row(j).transpose();
    for (int k = 0; k < nt; ++k) values[static_cast<std::size_t>(j) * nt + k] = ring[k];
  }
  // Keep the prescribed boundary bit-exact.
  for (int k = 0; k < nt; ++k) values[static_cast<std::size_t>(n_r) * nt + k] = boundary[k];
  return ScalarField(grid, std::move(values));
}

ScalarField solve_poisson(const ScalarField& rhs) {
  return solve_poisson(rhs, BoundaryData(rhs.grid().n_theta(), 0.0));
}

ScalarField harmonic_extension(const PolarGrid& grid, const BoundaryData& boundary) {
  return solve_poisson(ScalarField(grid), boundary);
}

}  // namespace crpc
