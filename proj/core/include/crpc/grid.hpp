#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace crpc {

namespace detail {
struct GridOperators;
}

/// Polar discretization of the closed unit disk.
///
/// Radial nodes r_j = j*h (j = 0..n_r, h = 1/n_r) and angular nodes
/// theta_k = 2*pi*k/n_theta. Ring j = 0 is a single logical pole node; ring
/// j = n_r lies on the unit circle. Copies share the precomputed
/// differentiation tables.
class PolarGrid {
public:
  int n_r() const noexcept { return n_r_; }
  int n_theta() const noexcept { return n_theta_; }
  double h() const noexcept { return 1.0 / n_r_; }
  double radius() const noexcept { return 1.0; }

  double r(int j) const noexcept { return j * h(); }
  double theta(int k) const noexcept;

  // Storage nodes: (n_r + 1) rings of n_theta values, pole row replicated.
  std::size_t storage_size() const noexcept {
    return static_cast<std::size_t>(n_r_ + 1) * n_theta_;
  }
  // Logical unknowns: the pole plus every ring node.
  std::size_t unknown_count() const noexcept {
    return 1 + static_cast<std::size_t>(n_r_) * n_theta_;
  }
  // Index of ring node (j >= 1, k) in the packed unknown vector; the pole is 0.
  std::size_t unknown_index(int j, int k) const noexcept {
    return j == 0 ? 0 : 1 + static_cast<std::size_t>(j - 1) * n_theta_ + k;
  }

  bool operator==(const PolarGrid& other) const noexcept {
    return n_r_ == other.n_r_ && n_theta_ == other.n_theta_;
  }

  const detail::GridOperators& ops() const noexcept { return *ops_; }

private:
  friend PolarGrid make_polar_grid(int n_r, int n_theta);
  PolarGrid(int n_r, int n_theta, std::shared_ptr<const detail::GridOperators> ops)
      : n_r_(n_r), n_theta_(n_theta), ops_(std::move(ops)) {}

  int n_r_;
  int n_theta_;
  std::shared_ptr<const detail::GridOperators> ops_;
};

/// Throws OddAngularCount for odd n_theta, GridTooSmall below 8x8.
PolarGrid make_polar_grid(int n_r, int n_theta);

/// Real function sampled on a PolarGrid.
class ScalarField {
public:
  explicit ScalarField(PolarGrid grid, double fill = 0.0);
  // `values` has storage_size() entries; the pole row must be uniform.
  ScalarField(PolarGrid grid, std::vector<double> values);

  static ScalarField generate(const PolarGrid& grid,
                              const std::function<double(int j, int k)>& fn);
  static ScalarField from_packed(const PolarGrid& grid, const Eigen::VectorXd& packed);

  const PolarGrid& grid() const noexcept { return grid_; }
  double operator()(int j, int k) const noexcept {
    return values_[static_cast<std::size_t>(j) * grid_.n_theta() + k];
  }
  double pole_value() const noexcept { return values_[0]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> ring(int j) const noexcept {
    return std::span<const double>(values_).subspan(
        static_cast<std::size_t>(j) * grid_.n_theta(), grid_.n_theta());
  }
  std::vector<double> boundary_values() const;
  Eigen::VectorXd packed() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double s);

  ScalarField map(const std::function<double(double)>& fn) const;

private:
  void check_same_grid(const ScalarField& o) const;

  PolarGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
ScalarField operator-(ScalarField a);

struct DerivativeBundle {
  ScalarField f_x, f_y, f_xx, f_xy, f_yy;
};

/// values[j,k] = expr(r_j cos theta_k, r_j sin theta_k); the pole holds expr(0,0).
ScalarField sample(const std::function<double(double x, double y)>& expr,
                   const PolarGrid& grid);

/// Cartesian first and second derivatives.
///
/// Angular derivatives are spectral (trigonometric interpolation on each
/// ring), radial ones 4th-order finite differences continued through the
/// pole by reflection, one-sided near the boundary ring. Pole derivatives come
/// from a least-squares quartic fit over the pole and the two innermost rings.
/// This operator is the discrete differentiation used by every solver.
DerivativeBundle cartesian_derivatives(const ScalarField& f);

/// Discrete Laplacian f_xx + f_yy of the same operator (cheaper than the bundle).
ScalarField laplacian(const ScalarField& f);

double boundary_sup(const ScalarField& f);
double sup_norm(const ScalarField& f);
// Max |value| over the open disk (rings 0..n_r-1), where the PDEs are imposed.
double interior_sup(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);

/// CSV with header `r,theta,value`, j outer / k inner, 17 significant digits.
void write_field_csv(std::ostream& os, const ScalarField& f);
void write_field_csv(const std::string& path, const ScalarField& f);
ScalarField read_field_csv(std::istream& is);
ScalarField read_field_csv(const std::string& path);

}  // namespace crpc
