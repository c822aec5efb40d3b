#include "crpc/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "crpc/error.hpp"

namespace crpc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-10;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::ParamOutOfRange, what);
}

double integrate(const std::function<double(double)>& f, double hi) {
  if (hi == 0.0) return 0.0;
  double err = 0.0;
  const double val =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, hi, 15, 1e-13, &err);
  if (!std::isfinite(val) || err > kQuadTol * std::max(1.0, std::abs(val))) {
    fail(ErrorKind::QuadratureFailure,
         "Gauss-Kronrod error estimate " + fmt(err) + " above tolerance");
  }
  return val;
}

double quad_error(const std::function<double(double)>& f, double hi) {
  if (hi == 0.0) return 0.0;
  double err = 0.0;
  boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, hi, 15, 1e-13, &err);
  return err;
}

using Vec3 = ParametricPoint::Vec3;

}  // namespace

GraphFunction paraboloid_family(double a) {
  require(a >= -1.0 && a < 0.0, "paraboloid family needs a in [-1, 0)");
  const double c = (a + 1.0) / (a - 1.0);
  return {"paraboloid(a=" + fmt(a) + ")", [c](double x, double y) {
            return PointDerivatives{2 * x * y + c * (x * x + y * y - 1), 2 * y + 2 * c * x,
                                    2 * x + 2 * c * y, 2 * c, 2.0, 2 * c};
          }};
}

GraphFunction deg2_family(double t) {
  require(std::isfinite(t), "deg2 family needs a finite t");
  const double c = t / std::sqrt(t * t + 4.0);
  return {"deg2(t=" + fmt(t) + ")", [c](double x, double y) {
            return PointDerivatives{2 * x * y + c * (x * x + y * y - 1), 2 * y + 2 * c * x,
                                    2 * x + 2 * c * y, 2 * c, 2.0, 2 * c};
          }};
}

ProfilePoint iso_rotational_profile(double a, double r) {
  require(a >= -1.0 && a < 0.0, "isotropic rotational family needs a in [-1, 0)");
  require(r > 0.0, "radius must be positive");
  ProfilePoint p;
  p.z = a == -1.0 ? std::log(r) : std::expm1((a + 1.0) * std::log(r)) / (a + 1.0);
  p.dz = std::pow(r, a);
  p.d2z = a * std::pow(r, a - 1.0);
  return p;
}

ProfilePoint iso_rotational_positive_profile(double a, double c, double r) {
  require(a > 0.0 && a <= 1.0 && c > 0.0, "positive branch needs a in (0, 1] and c > 0");
  require(r >= 0.0 && r <= 1.0, "positive branch lives on 0 <= r <= 1");
  ProfilePoint p;
  const double e = 1.0 + 1.0 / a;
  p.z = c * std::pow(r, e) - c;
  p.dz = c * e * std::pow(r, e - 1.0);
  p.d2z = c * e * (e - 1.0) * std::pow(r, e - 2.0);
  return p;
}

ProfilePoint euclid_rotational(double a, double r) {
  require(a < 0.0, "Euclidean rotational family needs a < 0");
  require(r >= 1.0, "Euclidean rotational family lives on r >= 1");
  // rho = 1 + s^2 removes the inverse square root at rho = 1.
  const auto f = [a](double s) {
    if (s == 0.0) return 2.0 / std::sqrt(-2.0 * a);
    return 2.0 * s / std::sqrt(std::expm1(-2.0 * a * std::log1p(s * s)));
  };
  const double hi = std::sqrt(r - 1.0);
  ProfilePoint p;
  p.z = integrate(f, hi);
  p.error = quad_error(f, hi);
  const double q = std::expm1(-2.0 * a * std::log(r));  // r^{-2a} - 1
  if (q > 0.0) {
    p.dz = 1.0 / std::sqrt(q);
    p.d2z = a * std::pow(r, -2.0 * a - 1.0) * std::pow(q, -1.5);
  } else {
    p.dz = p.d2z = std::numeric_limits<double>::infinity();
  }
  return p;
}

ProfilePoint euclid_cap(double a, double c, double r) {
  require(a > 0.0 && a <= 1.0 && c >= 1.0, "cap family needs 0 < a <= 1 and c >= 1");
  require(r > 0.0 && r <= 1.0, "cap family lives on 0 < r <= 1");
  // rho = 1 - s^2; singular at rho = 1 only for c = 1.
  const auto f = [a, c](double s) {
    const double q = (c - 1.0) + c * std::expm1(-(2.0 / a) * std::log1p(-s * s));
    if (s == 0.0) return c == 1.0 ? 2.0 / std::sqrt(2.0 / a) : 0.0;
    return 2.0 * s / std::sqrt(q);
  };
  const double hi = std::sqrt(1.0 - r);
  ProfilePoint p;
  p.z = integrate(f, hi);
  p.error = quad_error(f, hi);
  const double q = c * std::pow(r, -2.0 / a) - 1.0;
  p.dz = -1.0 / std::sqrt(q);
  p.d2z = -(c / a) * std::pow(r, -2.0 / a - 1.0) * std::pow(q, -1.5);
  return p;
}

ParametricSurface rotational_surface(std::string name, std::function<ProfilePoint(double)> profile,
                                     double u_min, double u_max) {
  ParametricSurface s;
  s.name = std::move(name);
  s.u_min = u_min;
  s.u_max = u_max;
  s.v_min = 0.0;
  s.v_max = 2.0 * kPi;
  s.eval = [profile = std::move(profile)](double u, double v) {
    const ProfilePoint z = profile(u);
    const double c = std::cos(v), sn = std::sin(v);
    ParametricPoint pt;
    pt.p = {u * c, u * sn, z.z};
    pt.p_u = {c, sn, z.dz};
    pt.p_v = {-u * sn, u * c, 0.0};
    pt.p_uu = {0.0, 0.0, z.d2z};
    pt.p_uv = {-sn, c, 0.0};
    pt.p_vv = {-u * c, -u * sn, 0.0};
    return pt;
  };
  return s;
}

ParametricSurface graph_surface(const GraphFunction& f, double u_min, double u_max, double v_min,
                                double v_max) {
  ParametricSurface s;
  s.name = f.name;
  s.u_min = u_min;
  s.u_max = u_max;
  s.v_min = v_min;
  s.v_max = v_max;
  s.eval = [f](double u, double v) {
    const PointDerivatives d = f.eval(u, v);
    ParametricPoint pt;
    pt.p = {u, v, d.z};
    pt.p_u = {1.0, 0.0, d.z_x};
    pt.p_v = {0.0, 1.0, d.z_y};
    pt.p_uu = {0.0, 0.0, d.z_xx};
    pt.p_uv = {0.0, 0.0, d.z_xy};
    pt.p_vv = {0.0, 0.0, d.z_yy};
    return pt;
  };
  return s;
}

ParametricSurface iso_rotational(double a) {
  iso_rotational_profile(a, 1.0);
  auto s = rotational_surface("iso-rotational", [a](double r) { return iso_rotational_profile(a, r); },
                              1.0, 3.0);
  s.params = {{"a", a}};
  return s;
}

ParametricSurface iso_rotational_positive(double a, double c) {
  iso_rotational_positive_profile(a, c, 1.0);
  // r >= 0.05 keeps the flat point on the axis out of the sample.
  auto s = rotational_surface("iso-rotational-positive",
                              [a, c](double r) { return iso_rotational_positive_profile(a, c, r); },
                              0.05, 1.0);
  s.params = {{"a", a}, {"c", c}};
  return s;
}

ParametricSurface iso_ruled(double a) {
  require(a >= -1.0 && a < 0.0, "ruled family needs a in [-1, 0)");
  // phi, phi', phi''; a = -1 is the helicoid limit phi(v) = v.
  const auto phi = [a](double v) -> std::array<double, 3> {
    if (a == -1.0) return {v, 1.0, 0.0};
    const double k = std::sqrt(-a), q = (a + 1.0) * v + 1.0;
    return {k / (1.0 + a) * std::log(q), k / q, -k * (a + 1.0) / (q * q)};
  };
  // Largest z with phi(z) <= 1.45 < pi/2 so tan stays bounded.
  double v_max = kPi / 2 - 0.05;
  while (phi(v_max)[0] > 1.45) v_max *= 0.95;
  ParametricSurface s;
  s.name = "iso-ruled";
  s.params = {{"a", a}};
  s.u_min = 0.2;
  s.u_max = 2.0;
  s.v_min = 0.05;
  s.v_max = v_max;
  s.eval = [phi](double u, double v) {
    const auto [f, f1, f2] = phi(v);
    const double tn = std::tan(f), sec2 = 1.0 + tn * tn;
    ParametricPoint pt;
    pt.p = {u, u * tn, v};
    pt.p_u = {1.0, tn, 0.0};
    pt.p_v = {0.0, u * sec2 * f1, 1.0};
    pt.p_uu = {0.0, 0.0, 0.0};
    pt.p_uv = {0.0, sec2 * f1, 0.0};
    pt.p_vv = {0.0, u * (2.0 * sec2 * tn * f1 * f1 + sec2 * f2), 0.0};
    return pt;
  };
  return s;
}

double helical_b_from_c(double c) { return std::sqrt(1.0 + c * c) - c; }
double helical_c_from_b(double b) { return (1.0 - b * b) / (2.0 * b); }

ParametricSurface iso_helical(double a, double b) {
  require(a > -1.0 && a < 0.0, "helical family needs a in (-1, 0)");
  require(b > 0.0, "helical family needs b > 0");
  ParametricSurface s;
  s.name = "iso-helical";
  s.params = {{"a", a}, {"b", b}};
  s.u_min = 0.3;
  s.u_max = 3.0;
  s.v_min = -kPi / 2 + 0.05;
  s.v_max = kPi / 2 - 0.05;
  const double k = std::sqrt(b * b + 1.0);
  s.eval = [a, b, k](double u, double v) {
    // rho = sqrt(S)/k with S = u^{-2a} + b^2 u^2.
    const double S = std::pow(u, -2 * a) + b * b * u * u;
    const double S1 = -2 * a * std::pow(u, -2 * a - 1) + 2 * b * b * u;
    const double S2 = 2 * a * (2 * a + 1) * std::pow(u, -2 * a - 2) + 2 * b * b;
    const double rS = std::sqrt(S);
    const double rho = rS / k, rho1 = S1 / (2 * rS * k);
    const double rho2 = (S2 / (2 * rS) - S1 * S1 / (4 * S * rS)) / k;
    // zeta = arctan(b u^{a+1}) - arctan b + rational part.
    const double w = b * std::pow(u, a + 1), w1 = b * (a + 1) * std::pow(u, a),
                 w2 = b * (a + 1) * a * std::pow(u, a - 1);
    const double den = (a * a - 1.0) * b;
    const double zeta = std::atan(w) - std::atan(b) +
                        (b * b * std::expm1((a + 1) * std::log(u)) +
                         a * a * std::expm1(-(a + 1) * std::log(u))) / den;
    const double zeta1 = w1 / (1 + w * w) +
                         (b * b * std::pow(u, a) - a * a * std::pow(u, -a - 2)) / ((a - 1) * b);
    const double zeta2 = w2 / (1 + w * w) - 2 * w * w1 * w1 / ((1 + w * w) * (1 + w * w)) +
                         (b * b * a * std::pow(u, a - 1) + a * a * (a + 2) * std::pow(u, -a - 3)) /
                             ((a - 1) * b);
    const double c = std::cos(v), sn = std::sin(v);
    ParametricPoint pt;
    pt.p = {rho * c, rho * sn, v + zeta};
    pt.p_u = {rho1 * c, rho1 * sn, zeta1};
    pt.p_v = {-rho * sn, rho * c, 1.0};
    pt.p_uu = {rho2 * c, rho2 * sn, zeta2};
    pt.p_uv = {-rho1 * sn, rho1 * c, 0.0};
    pt.p_vv = {-rho * c, -rho * sn, 0.0};
    return pt;
  };
  return s;
}

ParametricSurface iso_helicatenoid(double c) {
  ParametricSurface s;
  s.name = "iso-helicatenoid";
  s.params = {{"c", c}};
  s.u_min = 0.3;
  s.u_max = 3.0;
  s.v_min = -kPi / 2 + 0.05;
  s.v_max = kPi / 2 - 0.05;
  s.eval = [c](double u, double v) {
    const double cs = std::cos(v), sn = std::sin(v);
    ParametricPoint pt;
    pt.p = {u * cs, u * sn, c * std::log(u) + v};
    pt.p_u = {cs, sn, c / u};
    pt.p_v = {-u * sn, u * cs, 1.0};
    pt.p_uu = {0.0, 0.0, -c / (u * u)};
    pt.p_uv = {-sn, cs, 0.0};
    pt.p_vv = {-u * cs, -u * sn, 0.0};
    return pt;
  };
  return s;
}

ParametricSurface iso_translational(double b) {
  require(b > -1.0 && b <= 0.0, "translational family needs b in (-1, 0]");
  ParametricSurface s;
  s.name = "iso-translational";
  s.params = {{"b", b}};
  s.u_min = 0.0;
  s.u_max = 1.0;
  s.v_min = 0.05;
  s.v_max = kPi - 0.05;
  s.eval = [b](double u, double v) {
    const double cs = std::cos(v), sn = std::sin(v), q = b - sn, e = std::exp(u);
    const double k = b * b - 1.0;
    ParametricPoint pt;
    pt.p = {v + b * cs, b * sn + k * std::log(std::abs(q)) - k * u, e};
    pt.p_u = {0.0, -k, e};
    pt.p_v = {1.0 - b * sn, b * cs - k * cs / q, 0.0};
    pt.p_uu = {0.0, 0.0, e};
    pt.p_uv = {0.0, 0.0, 0.0};
    pt.p_vv = {-b * cs, -b * sn + k * (b * sn - 1.0) / (q * q), 0.0};
    return pt;
  };
  return s;
}

ParametricSurface euclid_rotational_surface(double a) {
  require(a < 0.0, "Euclidean rotational family needs a < 0");
  // z' blows up at r = 1; sample from 1.05.
  auto s = rotational_surface("euc-rotational", [a](double r) { return euclid_rotational(a, r); },
                              1.05, 3.0);
  s.params = {{"a", a}};
  return s;
}

ParametricSurface euclid_cap_surface(double a, double c) {
  require(a > 0.0 && a <= 1.0 && c >= 1.0, "cap family needs 0 < a <= 1 and c >= 1");
  auto s = rotational_surface("euc-cap", [a, c](double r) { return euclid_cap(a, c, r); }, 0.05,
                              0.95);
  s.params = {{"a", a}, {"c", c}};
  return s;
}

PointDerivatives parametric_graph_hessian(const ParametricPoint& pt) {
  Eigen::Matrix2d J;
  J << pt.p_u[0], pt.p_v[0], pt.p_u[1], pt.p_v[1];
  const double scale = J.cwiseAbs().maxCoeff();
  if (!(std::abs(J.determinant()) > 1e-12 * std::max(scale * scale, 1e-300))) {
    fail(ErrorKind::NotAdmissible, "top-view Jacobian is singular");
  }
  const Eigen::Matrix2d Ji = J.inverse();
  const Eigen::Vector2d gz = Ji.transpose() * Eigen::Vector2d(pt.p_u[2], pt.p_v[2]);
  const auto hess = [&](int i) {
    Eigen::Matrix2d m;
    m << pt.p_uu[i], pt.p_uv[i], pt.p_uv[i], pt.p_vv[i];
    return m;
  };
  const Eigen::Matrix2d H = Ji.transpose() * (hess(2) - gz(0) * hess(0) - gz(1) * hess(1)) * Ji;
  return {pt.p[2], gz(0), gz(1), H(0, 0), 0.5 * (H(0, 1) + H(1, 0)), H(1, 1)};
}

PointDerivatives parametric_graph_hessian(const ParametricSurface& s, double u, double v) {
  return parametric_graph_hessian(s.eval(u, v));
}

double stored_ratio(double a) { return std::abs(a) <= 1.0 ? a : 1.0 / a; }

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"paraboloid",       "deg2",       "iso-rotational", "iso-rotational-positive",
          "iso-ruled",        "iso-helical", "iso-helicatenoid", "iso-translational",
          "euc-rotational",   "euc-cap"};
}

CatalogEntry catalog_entry(const std::string& family, const std::map<std::string, double>& p) {
  const Geometry iso = Geometry::Isotropic, euc = Geometry::Euclidean;
  // Graph families are sampled over a box inside the unit disk.
  constexpr double kBox = 0.7;
  if (family == "paraboloid") {
    const double a = param(p, "a", -0.5);
    auto s = graph_surface(paraboloid_family(a), -kBox, kBox, -kBox, kBox);
    s.params = {{"a", a}};
    return {family, iso, stored_ratio(a), s};
  }
  if (family == "deg2") {
    const double t = param(p, "t", 0.5);
    auto s = graph_surface(deg2_family(t), -kBox, kBox, -kBox, kBox);
    s.params = {{"t", t}};
    return {family, iso, stored_ratio(t_to_ratio(t)), s};
  }
  if (family == "iso-rotational") {
    const double a = param(p, "a", -0.5);
    return {family, iso, stored_ratio(a), iso_rotational(a)};
  }
  if (family == "iso-rotational-positive") {
    const double a = param(p, "a", 0.5);
    return {family, iso, stored_ratio(a), iso_rotational_positive(a, param(p, "c", 1.0))};
  }
  if (family == "iso-ruled") {
    const double a = param(p, "a", -0.5);
    return {family, iso, stored_ratio(a), iso_ruled(a)};
  }
  if (family == "iso-helical") {
    const double a = param(p, "a", -0.5);
    return {family, iso, stored_ratio(a), iso_helical(a, param(p, "b", 0.5))};
  }
  if (family == "iso-helicatenoid") {
    return {family, iso, -1.0, iso_helicatenoid(param(p, "c", 0.75))};
  }
  if (family == "iso-translational") {
    const double b = param(p, "b", -0.5);
    return {family, iso, stored_ratio((b + 1.0) / (b - 1.0)), iso_translational(b)};
  }
  if (family == "euc-rotational") {
    const double a = param(p, "a", -0.5);
    return {family, euc, stored_ratio(a), euclid_rotational_surface(a)};
  }
  if (family == "euc-cap") {
    const double a = param(p, "a", 0.5);
    return {family, euc, stored_ratio(a), euclid_cap_surface(a, param(p, "c", 1.5))};
  }
  fail(ErrorKind::ConfigError, "unknown closed-form family '" + family + "'");
}

std::vector<CatalogEntry> default_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& name : catalog_names()) out.push_back(catalog_entry(name));
  // Both sides of a = -1 for the Euclidean rotational family.
  out.push_back(catalog_entry("euc-rotational", {{"a", -2.0}}));
  return out;
}

RatioCheck check_ratio(const CatalogEntry& e, int n_u, int n_v) {
  RatioCheck out;
  const auto& s = e.surface;
  for (int i = 0; i < n_u; ++i) {
    const double u = s.u_min + (s.u_max - s.u_min) * (i + 0.5) / n_u;
    for (int j = 0; j < n_v; ++j) {
      const double v = s.v_min + (s.v_max - s.v_min) * (j + 0.5) / n_v;
      const PointCurvature c = point_curvature(e.geometry, parametric_graph_hessian(s, u, v));
      const double dev = std::abs(c.ratio - e.expected_ratio);
      if (dev > out.max_deviation || out.samples == 0) {
        out.max_deviation = dev;
        out.worst_u = u;
        out.worst_v = v;
      }
      ++out.samples;
    }
  }
  return out;
}

}  // namespace crpc
