#include "crpc/curvature.hpp"

#include <cmath>
#include <numbers>

#include "crpc/error.hpp"

namespace crpc {

std::string_view to_string(Geometry g) noexcept {
  return g == Geometry::Isotropic ? "isotropic" : "euclidean";
}

Geometry parse_geometry(std::string_view s) {
  if (s == "iso" || s == "isotropic") return Geometry::Isotropic;
  if (s == "euc" || s == "euclidean") return Geometry::Euclidean;
  fail(ErrorKind::ConfigError, "unknown geometry '" + std::string(s) + "'");
}

namespace {

// Below this both principal curvatures count as zero.
constexpr double kFlatCurvature = 1e-10;

void order_ratio(PointCurvature& c) {
  const double big = std::max(std::abs(c.kappa1), std::abs(c.kappa2));
  c.larger_is_kappa1 = std::abs(c.kappa1) >= std::abs(c.kappa2);
  if (big <= kFlatCurvature) {
    c.ratio = 0.0;
  } else {
    c.ratio = c.larger_is_kappa1 ? c.kappa2 / c.kappa1 : c.kappa1 / c.kappa2;
  }
}

// Eigenvalues l1 >= l2 and the angle of the l1 eigenvector.
void sym_eigen(double a, double b, double c, double& l1, double& l2, double& phi) {
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  l1 = mean + rad;
  l2 = mean - rad;
  phi = 0.5 * std::atan2(2.0 * b, a - c);
}

void fix_sign(std::array<double, 2>& d) {
  if (d[0] < -1e-14 || (std::abs(d[0]) <= 1e-14 && d[1] < 0.0)) {
    d[0] = -d[0];
    d[1] = -d[1];
  }
}

// Null directions with positive component along the l1 eigenvector.
AsymptoticPair raw_asymptotic(double f_xx, double f_xy, double f_yy) {
  double l1, l2, phi;
  sym_eigen(f_xx, f_xy, f_yy, l1, l2, phi);
  AsymptoticPair p;
  if (!(l1 > 0.0 && l2 < 0.0)) return p;
  const double e1x = std::cos(phi), e1y = std::sin(phi);
  const double e2x = -e1y, e2y = e1x;
  const double norm = std::sqrt(l1 - l2);
  const double u = std::sqrt(-l2) / norm, v = std::sqrt(l1) / norm;
  p.d1 = {u * e1x + v * e2x, u * e1y + v * e2y};
  p.d2 = {u * e1x - v * e2x, u * e1y - v * e2y};
  return p;
}

}  // namespace

PointCurvature isotropic_point(double f_xx, double f_xy, double f_yy) {
  PointCurvature c;
  c.H = 0.5 * (f_xx + f_yy);
  c.K = f_xx * f_yy - f_xy * f_xy;
  c.H_true = c.H;
  c.K_true = c.K;
  double phi;
  sym_eigen(f_xx, f_xy, f_yy, c.kappa1, c.kappa2, phi);
  order_ratio(c);
  return c;
}

PointCurvature euclidean_point(double f_x, double f_y, double f_xx, double f_xy, double f_yy) {
  PointCurvature c;
  const double w = 1.0 + f_x * f_x + f_y * f_y;
  const double det = f_xx * f_yy - f_xy * f_xy;
  c.H = 0.5 * ((1.0 + f_y * f_y) * f_xx - 2.0 * f_x * f_y * f_xy + (1.0 + f_x * f_x) * f_yy);
  c.K = w * det;  // = -W (f_xy^2 - f_xx f_yy)
  c.H_true = c.H / std::pow(w, 1.5);
  c.K_true = det / (w * w);
  const double disc = std::sqrt(std::max(0.0, c.H_true * c.H_true - c.K_true));
  c.kappa1 = c.H_true + disc;
  c.kappa2 = c.H_true - disc;
  order_ratio(c);
  return c;
}

PointCurvature point_curvature(Geometry g, const PointDerivatives& d) {
  return g == Geometry::Isotropic ? isotropic_point(d.z_xx, d.z_xy, d.z_yy)
                                  : euclidean_point(d.z_x, d.z_y, d.z_xx, d.z_xy, d.z_yy);
}

AsymptoticPair asymptotic_directions(double f_xx, double f_xy, double f_yy) {
  AsymptoticPair p = raw_asymptotic(f_xx, f_xy, f_yy);
  fix_sign(p.d1);
  fix_sign(p.d2);
  return p;
}

double asymptotic_angle_deg(Geometry g, const PointDerivatives& d) {
  const AsymptoticPair p = raw_asymptotic(d.z_xx, d.z_xy, d.z_yy);
  auto inner = [&](const std::array<double, 2>& u, const std::array<double, 2>& v) {
    double s = u[0] * v[0] + u[1] * v[1];
    if (g == Geometry::Euclidean) {
      s += (d.z_x * u[0] + d.z_y * u[1]) * (d.z_x * v[0] + d.z_y * v[1]);
    }
    return s;
  };
  const double c = inner(p.d1, p.d2) / std::sqrt(inner(p.d1, p.d1) * inner(p.d2, p.d2));
  return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

CurvatureReport curvatures(Geometry g, const DerivativeBundle& d) {
  const PolarGrid& grid = d.f_xx.grid();
  const std::size_t n = grid.storage_size();
  std::vector<double> H(n), K(n), Ht(n), Kt(n), k1(n), k2(n), ratio(n), d1x(n), d1y(n), d2x(n),
      d2y(n);
  std::vector<char> larger(n), has_dir(n);
  double kmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = d.f_x.values()[i], fy = d.f_y.values()[i];
    const double fxx = d.f_xx.values()[i], fxy = d.f_xy.values()[i], fyy = d.f_yy.values()[i];
    const PointCurvature c = g == Geometry::Isotropic ? isotropic_point(fxx, fxy, fyy)
                                                      : euclidean_point(fx, fy, fxx, fxy, fyy);
    H[i] = c.H;
    K[i] = c.K;
    Ht[i] = c.H_true;
    Kt[i] = c.K_true;
    k1[i] = c.kappa1;
    k2[i] = c.kappa2;
    ratio[i] = c.ratio;
    larger[i] = c.larger_is_kappa1;
    kmax = std::max({kmax, std::abs(c.kappa1), std::abs(c.kappa2)});
    if (fxx * fyy - fxy * fxy < 0.0) {
      const AsymptoticPair p = asymptotic_directions(fxx, fxy, fyy);
      d1x[i] = p.d1[0];
      d1y[i] = p.d1[1];
      d2x[i] = p.d2[0];
      d2y[i] = p.d2[1];
      has_dir[i] = 1;
    }
  }
  auto field = [&](std::vector<double>& v) { return ScalarField(grid, std::move(v)); };
  CurvatureReport r{g,          field(H),   field(K),   field(Ht),  field(Kt),
                    field(k1),  field(k2),  field(ratio), std::move(larger), field(d1x),
                    field(d1y), field(d2x), field(d2y), std::move(has_dir)};
  r.flat = kmax <= kFlatCurvature;
  return r;
}

CurvatureReport isotropic_curvatures(const DerivativeBundle& d) {
  return curvatures(Geometry::Isotropic, d);
}

CurvatureReport euclidean_curvatures(const DerivativeBundle& d) {
  return curvatures(Geometry::Euclidean, d);
}

double ratio_to_t(double a, Geometry) {
  if (!(a < 0.0)) {
    fail(ErrorKind::UnsupportedRatio,
         "ratio a = " + std::to_string(a) + " is not negative; only K < 0 families have a series");
  }
  return (a + 1.0) / std::sqrt(-a);
}

double t_to_ratio(double t) {
  const double u = 2.0 / (t + std::sqrt(t * t + 4.0));  // root of u^2 + t u - 1 = 0
  return -u * u;
}

double s_to_t(double s) {
  if (!(s < 1.0)) fail(ErrorKind::ParamOutOfRange, "s must be below 1");
  return s / std::sqrt(1.0 - s);
}

double t_to_s(double t) { return t_to_ratio(t) + 1.0; }

double angle_from_ratio(double a) {
  if (!(a < 0.0)) fail(ErrorKind::UnsupportedRatio, "asymptotic angle needs a < 0");
  return 2.0 * std::atan(1.0 / std::sqrt(-a)) * 180.0 / std::numbers::pi;
}

double ratio_from_angle(double gamma_deg) {
  if (!(gamma_deg > 0.0 && gamma_deg < 180.0)) {
    fail(ErrorKind::ParamOutOfRange, "angle must lie in (0, 180) degrees");
  }
  const double half = 0.5 * gamma_deg * std::numbers::pi / 180.0;
  const double cot = std::cos(half) / std::sin(half);
  return -cot * cot;
}

}  // namespace crpc
