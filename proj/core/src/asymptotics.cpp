#include "crpc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "crpc/error.hpp"

namespace crpc {

namespace {

struct Cell {
  int j0, j1, k0, k1;
  double fr, ft;
};

Cell locate(const PolarGrid& g, double x, double y) {
  const double r = std::min(std::hypot(x, y), 1.0);
  double th = std::atan2(y, x);
  if (th < 0.0) th += 2.0 * std::numbers::pi;
  const double sr = r * g.n_r(), st = th / (2.0 * std::numbers::pi) * g.n_theta();
  const int j = std::min(static_cast<int>(sr), g.n_r() - 1);
  const int k = std::min(static_cast<int>(st), g.n_theta() - 1);
  return {j, j + 1, k, (k + 1) % g.n_theta(), sr - j, st - k};
}

template <class F>
auto blend(const Cell& c, F&& at) {
  return (1 - c.fr) * (1 - c.ft) * at(c.j0, c.k0) + c.fr * (1 - c.ft) * at(c.j1, c.k0) +
         (1 - c.fr) * c.ft * at(c.j0, c.k1) + c.fr * c.ft * at(c.j1, c.k1);
}

// Interpolated unit direction of one family, each corner flipped to agree with `ref`.
std::optional<Point2> direction(const CurvatureReport& rep, int family, double x, double y,
                                const Point2& ref) {
  if (std::hypot(x, y) > 1.0) return std::nullopt;
  const PolarGrid& g = rep.dir1_x.grid();
  const Cell c = locate(g, x, y);
  const ScalarField& fx = family == 1 ? rep.dir1_x : rep.dir2_x;
  const ScalarField& fy = family == 1 ? rep.dir1_y : rep.dir2_y;
  bool ok = true;
  const auto comp = [&](int axis) {
    return blend(c, [&](int j, int k) {
      const std::size_t i = static_cast<std::size_t>(j) * g.n_theta() + k;
      if (!rep.has_directions[i]) ok = false;
      const double dx = fx(j, k), dy = fy(j, k);
      const double s = dx * ref[0] + dy * ref[1] < 0.0 ? -1.0 : 1.0;
      return s * (axis == 0 ? dx : dy);
    });
  };
  const double dx = comp(0), dy = comp(1);
  const double n = std::hypot(dx, dy);
  if (!ok || n < 1e-12) return std::nullopt;
  return Point2{dx / n, dy / n};
}

Polyline2 trace_one(const CurvatureReport& rep, int family, Point2 p, Point2 ref,
                    const TraceOptions& o) {
  Polyline2 out{p};
  const double h = o.step;
  for (int s = 0; s < o.max_steps; ++s) {
    const auto k1 = direction(rep, family, p[0], p[1], ref);
    if (!k1) break;
    const auto k2 = direction(rep, family, p[0] + 0.5 * h * (*k1)[0], p[1] + 0.5 * h * (*k1)[1], *k1);
    if (!k2) break;
    const auto k3 = direction(rep, family, p[0] + 0.5 * h * (*k2)[0], p[1] + 0.5 * h * (*k2)[1], *k2);
    if (!k3) break;
    const auto k4 = direction(rep, family, p[0] + h * (*k3)[0], p[1] + h * (*k3)[1], *k3);
    if (!k4) break;
    Point2 next{p[0] + h / 6 * ((*k1)[0] + 2 * (*k2)[0] + 2 * (*k3)[0] + (*k4)[0]),
                p[1] + h / 6 * ((*k1)[1] + 2 * (*k2)[1] + 2 * (*k3)[1] + (*k4)[1])};
    if (std::hypot(next[0], next[1]) > 1.0) break;
    ref = {next[0] - p[0], next[1] - p[1]};
    p = next;
    out.push_back(p);
  }
  return out;
}

std::optional<Point2> segment_hit(const Point2& a, const Point2& b, const Point2& c,
                                  const Point2& d) {
  const double rx = b[0] - a[0], ry = b[1] - a[1], sx = d[0] - c[0], sy = d[1] - c[1];
  const double den = rx * sy - ry * sx;
  if (std::abs(den) < 1e-300) return std::nullopt;
  const double u = ((c[0] - a[0]) * sy - (c[1] - a[1]) * sx) / den;
  const double v = ((c[0] - a[0]) * ry - (c[1] - a[1]) * rx) / den;
  if (u < 0.0 || u >= 1.0 || v < 0.0 || v >= 1.0) return std::nullopt;
  return Point2{a[0] + u * rx, a[1] + u * ry};
}

}  // namespace

double interpolate(const ScalarField& f, double x, double y) {
  const Cell c = locate(f.grid(), x, y);
  return blend(c, [&](int j, int k) { return f(j, k); });
}

AsymptoticNet trace_asymptotics(const CurvatureReport& report, const std::vector<Point2>& seeds,
                                const TraceOptions& options) {
  if (!(options.step > 0.0)) fail(ErrorKind::ConfigError, "trace step must be positive");
  AsymptoticNet net;
  for (const Point2& s : seeds) {
    for (int family = 1; family <= 2; ++family) {
      const auto d0 = direction(report, family, s[0], s[1], {1.0, 0.0});
      if (!d0) continue;
      Polyline2 fwd = trace_one(report, family, s, *d0, options);
      Polyline2 bwd = trace_one(report, family, s, {-(*d0)[0], -(*d0)[1]}, options);
      Polyline2 line(bwd.rbegin(), bwd.rend());
      line.insert(line.end(), fwd.begin() + 1, fwd.end());
      if (line.size() >= 2) (family == 1 ? net.family1 : net.family2).push_back(std::move(line));
    }
  }
  return net;
}

std::vector<Crossing> measure_crossings(const AsymptoticNet& net, Geometry g,
                                        const DerivativeBundle& d) {
  std::vector<Crossing> out;
  for (const auto& p : net.family1) {
    for (const auto& q : net.family2) {
      for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        for (std::size_t k = 0; k + 1 < q.size(); ++k) {
          const auto hit = segment_hit(p[i], p[i + 1], q[k], q[k + 1]);
          if (!hit) continue;
          const double x = (*hit)[0], y = (*hit)[1];
          const double fx = interpolate(d.f_x, x, y), fy = interpolate(d.f_y, x, y);
          const double fxx = interpolate(d.f_xx, x, y), fxy = interpolate(d.f_xy, x, y),
                       fyy = interpolate(d.f_yy, x, y);
          const auto inner = [&](const Point2& u, const Point2& v) {
            double s = u[0] * v[0] + u[1] * v[1];
            if (g == Geometry::Euclidean) s += (fx * u[0] + fy * u[1]) * (fx * v[0] + fy * v[1]);
            return s;
          };
          const auto unit = [&](Point2 u) {
            const double n = std::sqrt(inner(u, u));
            return Point2{u[0] / n, u[1] / n};
          };
          const Point2 u = unit({p[i + 1][0] - p[i][0], p[i + 1][1] - p[i][1]});
          const Point2 v = unit({q[k + 1][0] - q[k][0], q[k + 1][1] - q[k][1]});
          const double ang =
              std::acos(std::clamp(inner(u, v), -1.0, 1.0)) * 180.0 / std::numbers::pi;
          // The bisector of u and v on which the second fundamental form is positive
          // is the positive principal direction; measure the sector around it.
          const Point2 b{u[0] + v[0], u[1] + v[1]};
          const double second = fxx * b[0] * b[0] + 2.0 * fxy * b[0] * b[1] + fyy * b[1] * b[1];
          out.push_back({*hit, second >= 0.0 ? ang : 180.0 - ang});
        }
      }
    }
  }
  return out;
}

}  // namespace crpc
