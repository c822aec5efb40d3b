#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crpc/curvature.hpp"

namespace crpc {

/// z = f(x, y) with analytic first and second derivatives.
struct GraphFunction {
  std::string name;
  std::function<PointDerivatives(double x, double y)> eval;

  double operator()(double x, double y) const { return eval(x, y).z; }
};

/// z = 2xy + ((a+1)/(a-1)) (x^2 + y^2 - 1), a in [-1, 0).
GraphFunction paraboloid_family(double a);
/// f = 2xy + (t / sqrt(t^2 + 4)) (x^2 + y^2 - 1).
GraphFunction deg2_family(double t);

/// A point of a parametric surface with its parameter derivatives.
struct ParametricPoint {
  using Vec3 = std::array<double, 3>;
  Vec3 p{}, p_u{}, p_v{}, p_uu{}, p_uv{}, p_vv{};
};

struct ParametricSurface {
  std::string name;
  std::map<std::string, double> params;
  std::function<ParametricPoint(double u, double v)> eval;
  double u_min = 0.0, u_max = 1.0;
  double v_min = 0.0, v_max = 1.0;
};

/// Radial profile z(r) with z'(r), z''(r).
struct ProfilePoint {
  double z = 0.0, dz = 0.0, d2z = 0.0;
  double error = 0.0;  // quadrature error estimate (0 for explicit profiles)
};

/// (r^{a+1} - 1)/(a+1) for a in (-1, 0); log r at a = -1. r >= 1.
ProfilePoint iso_rotational_profile(double a, double r);
/// c r^{1+1/a} - c for a in (0, 1], c > 0, 0 <= r <= 1.
ProfilePoint iso_rotational_positive_profile(double a, double c, double r);
/// int_1^r d rho / sqrt(rho^{-2a} - 1), a < 0, r >= 1.
ProfilePoint euclid_rotational(double a, double r);
/// int_r^1 d rho / sqrt(c rho^{-2/a} - 1), 0 < a <= 1, c >= 1, 0 < r <= 1.
ProfilePoint euclid_cap(double a, double c, double r);

/// Surface of revolution (u cos v, u sin v, z(u)) over u in [u_min, u_max].
ParametricSurface rotational_surface(std::string name, std::function<ProfilePoint(double)> profile,
                                     double u_min, double u_max);

/// Graph (u, v, f(u, v)) over a box.
ParametricSurface graph_surface(const GraphFunction& f, double u_min, double u_max, double v_min,
                                double v_max);

/// Isotropic rotational families as surfaces over the sampled radius range.
ParametricSurface iso_rotational(double a);
ParametricSurface iso_rotational_positive(double a, double c);
/// (u, u tan phi(v), v) with phi(v) = sqrt|a|/(1+a) log((a+1) v + 1); a = -1 is the helicoid.
ParametricSurface iso_ruled(double a);
/// Helical family r_{a,b}, a in (-1, 0), b > 0.
ParametricSurface iso_helical(double a, double b);
/// Isotropic helicatenoid (u cos v, u sin v, c log u + v).
ParametricSurface iso_helicatenoid(double c);
/// b such that the helical family tends to the helicatenoid with parameter c: b = sqrt(1+c^2) - c.
double helical_b_from_c(double c);
double helical_c_from_b(double b);
/// Translational family r_b, b in (-1, 0]; ratio (b+1)/(b-1).
ParametricSurface iso_translational(double b);
ParametricSurface euclid_rotational_surface(double a);
ParametricSurface euclid_cap_surface(double a, double c);

/// Graph derivatives of z over (x, y) at parameter (u, v) via the chain rule.
/// NotAdmissible if the top-view Jacobian is singular.
PointDerivatives parametric_graph_hessian(const ParametricSurface& s, double u, double v);
PointDerivatives parametric_graph_hessian(const ParametricPoint& pt);

/// Ratio in the stored convention (|ratio| <= 1): a or 1/a.
double stored_ratio(double a);

struct CatalogEntry {
  std::string family;
  Geometry geometry = Geometry::Isotropic;
  double expected_ratio = 0.0;  // stored convention
  ParametricSurface surface;
};

/// Builds a catalog entry by family name; missing parameters take defaults.
/// Names: paraboloid(a), deg2(t), iso-rotational(a), iso-rotational-positive(a,c),
/// iso-ruled(a), iso-helical(a,b), iso-helicatenoid(c), iso-translational(b),
/// euc-rotational(a), euc-cap(a,c).
CatalogEntry catalog_entry(const std::string& family, const std::map<std::string, double>& params = {});
std::vector<std::string> catalog_names();
/// One entry per family with default parameters.
std::vector<CatalogEntry> default_catalog();

struct RatioCheck {
  int samples = 0;
  double max_deviation = 0.0;
  double worst_u = 0.0, worst_v = 0.0;
};

/// Samples an n_u x n_v tensor grid strictly inside the parameter box.
RatioCheck check_ratio(const CatalogEntry& e, int n_u = 16, int n_v = 16);

}  // namespace crpc
