#pragma once

#include <vector>

#include <Eigen/Dense>

namespace crpc::detail {

// Finite-difference weights on an arbitrary node set (Fornberg's recursion).
// Returns weights[m][i] for derivative order m = 0..max_order at x0.
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& nodes,
                                                  int max_order);

// Radial stencil at one ring. Node index -1 denotes ring 1 reflected through
// the pole (theta + pi); 0 is the pole.
struct RadialStencil {
  std::vector<int> nodes;
  std::vector<double> d1;  // d/dr weights
  std::vector<double> d2;  // d2/dr2 weights
};

struct GridOperators {
  int n_r = 0;
  int n_theta = 0;
  double h = 0.0;

  std::vector<double> cos_t, sin_t;

  // Ring operators acting on n_theta samples.
  Eigen::MatrixXd dtheta;   // spectral d/dtheta
  Eigen::MatrixXd dtheta2;  // spectral d2/dtheta2
  // Real Fourier transform: coefficient layout [a0, a1, b1, ..., a_{n/2}].
  Eigen::MatrixXd fourier_fwd;
  Eigen::MatrixXd fourier_inv;
  std::vector<int> coeff_mode;  // angular wavenumber of each coefficient slot

  std::vector<RadialStencil> radial;  // indexed by ring j = 1..n_r (slot 0 unused)

  // Per-wavenumber radial systems of the discrete Laplacian (k = 0..n_theta/2).
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> mode_lu;
  std::vector<Eigen::VectorXd> mode_boundary_weight;  // boundary column per mode

  int half() const { return n_theta / 2; }
  int reflected(int k) const { return (k + n_theta / 2) % n_theta; }
  double wavenumber_sq(int mode) const { return static_cast<double>(mode) * mode; }
};

// Pole derivatives from the quartic fit over the pole and rings 1, 2.
struct PoleFit {
  double f_x, f_y, f_xx, f_xy, f_yy;
};

}  // namespace crpc::detail
