#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "crpc/grid.hpp"

namespace crpc {

enum class Geometry { Isotropic, Euclidean };

std::string_view to_string(Geometry g) noexcept;
Geometry parse_geometry(std::string_view s);  // "iso"/"isotropic", "euc"/"euclidean"

/// First and second derivatives of a graph z = f(x, y) at one point.
struct PointDerivatives {
  double z = 0.0;
  double z_x = 0.0, z_y = 0.0;
  double z_xx = 0.0, z_xy = 0.0, z_yy = 0.0;
};

struct PointCurvature {
  double H = 0.0, K = 0.0;            // isotropic, or normalized Euclidean
  double H_true = 0.0, K_true = 0.0;  // equal to H, K in the isotropic case
  double kappa1 = 0.0, kappa2 = 0.0;  // kappa1 >= kappa2
  double ratio = 0.0;                 // smaller |kappa| over larger |kappa|; 0 at flat points
  bool larger_is_kappa1 = true;
};

PointCurvature isotropic_point(double f_xx, double f_xy, double f_yy);
PointCurvature euclidean_point(double f_x, double f_y, double f_xx, double f_xy, double f_yy);
PointCurvature point_curvature(Geometry g, const PointDerivatives& d);

/// Unit top-view null directions of the quadratic form f_xx dx^2 + 2 f_xy dx dy + f_yy dy^2.
/// Only meaningful where f_xx f_yy - f_xy^2 < 0. The first family is the
/// positive-curvature principal axis rotated counterclockwise; signs follow
/// the positive-x (then positive-y) convention.
struct AsymptoticPair {
  std::array<double, 2> d1{}, d2{};
};
AsymptoticPair asymptotic_directions(double f_xx, double f_xy, double f_yy);

/// Angle between the two asymptotic directions, measured in the sector that
/// contains the principal direction of positive curvature. Isotropic: top-view
/// metric; Euclidean: first fundamental form.
double asymptotic_angle_deg(Geometry g, const PointDerivatives& d);

struct CurvatureReport {
  Geometry geometry;
  ScalarField H, K;            // isotropic, or normalized Euclidean
  ScalarField H_true, K_true;  // true curvatures (Euclidean: H W^{-3/2}, (f_xx f_yy - f_xy^2) W^{-2})
  ScalarField kappa1, kappa2;
  ScalarField ratio;
  std::vector<char> larger_is_kappa1;  // per storage node
  ScalarField dir1_x, dir1_y, dir2_x, dir2_y;  // zero where K >= 0
  std::vector<char> has_directions;
  double residual_sup = 0.0;
  bool flat = false;  // all principal curvatures vanish (within 1e-10)
};

CurvatureReport isotropic_curvatures(const DerivativeBundle& d);
CurvatureReport euclidean_curvatures(const DerivativeBundle& d);
CurvatureReport curvatures(Geometry g, const DerivativeBundle& d);

/// Isotropic: t = (a + 1)/sqrt(|a|); Euclidean with s = a + 1 the same value
/// t = s/sqrt(1 - s). Both require a < 0 (UnsupportedRatio otherwise).
double ratio_to_t(double a, Geometry g = Geometry::Isotropic);
/// Inverse on the branch |a| <= 1 for t >= 0 (|a| >= 1 for t < 0).
double t_to_ratio(double t);
double s_to_t(double s);  // s < 1
double t_to_s(double t);
double angle_from_ratio(double a);  // degrees, a < 0
double ratio_from_angle(double gamma_deg);

}  // namespace crpc
