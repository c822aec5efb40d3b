#include "crpc/refine.hpp"

#include <cmath>
#include <sstream>

#include "crpc/error.hpp"
#include "crpc/series_euclidean.hpp"
#include "crpc/series_isotropic.hpp"

namespace crpc {

namespace {

double residual_sup(const ScalarField& f, double t, Geometry g) {
  return g == Geometry::Isotropic ? residual_isotropic(f, t).sup : residual_euclidean(f, t).sup;
}

ScalarField picard_step(const ScalarField& f, double t, Geometry g, const BoundaryData& trace,
                        const EllipticOptions& opts) {
  const DerivativeBundle d = cartesian_derivatives(f);
  const ScalarField rad = d.f_xy * d.f_xy - d.f_xx * d.f_yy;
  if (g == Geometry::Isotropic) {
    return solve_poisson(t * rad.map([](double v) { return std::sqrt(std::max(v, 0.0)); }), trace);
  }
  const ScalarField one(f.grid(), 1.0);
  const ScalarField w = one + d.f_x * d.f_x + d.f_y * d.f_y;
  EllipticCoefficients c{ScalarField(f.grid()), ScalarField(f.grid()), one + d.f_y * d.f_y,
                         -2.0 * (d.f_x * d.f_y), one + d.f_x * d.f_x};
  const ScalarField rhs = t * (w * rad).map([](double v) { return std::sqrt(std::max(v, 0.0)); });
  return solve_elliptic(c, rhs, trace, opts);
}

}  // namespace

RefineResult picard_refine(const ScalarField& f0, double t, Geometry geometry,
                           const RefineOptions& options) {
  const BoundaryData trace = f0.boundary_values();
  RefineResult out{f0, {}, 0, false, false};
  ScalarField current = f0;
  double res = residual_sup(f0, t, geometry);
  double best = res, before_growth = res;
  out.history.push_back(res);
  bool relax = false;
  int increases = 0, since_best = 0;
  while (best >= options.tol && out.iterations < options.max_iter) {
    ScalarField next = picard_step(current, t, geometry, trace, options.elliptic);
    if (relax) next = current + options.relaxation * (next - current);
    const double next_res = residual_sup(next, t, geometry);
    ++out.iterations;
    out.history.push_back(next_res);
    if (next_res > res) {
      relax = true;
      if (increases++ == 0) before_growth = res;
      if (increases >= options.max_increases && next_res > options.growth * before_growth) {
        std::ostringstream msg;
        msg << "residual grew for " << increases << " consecutive iterations (" << before_growth
            << " -> " << next_res << ")";
        fail(ErrorKind::Diverged, msg.str());
      }
    } else {
      increases = 0;
    }
    if (next_res < best) {
      best = next_res;
      out.field = next;
      since_best = 0;
    } else if (++since_best >= options.stall) {
      out.stalled = true;
      break;
    }
    current = std::move(next);
    res = next_res;
  }
  out.converged = best < options.tol;
  return out;
}

}  // namespace crpc
