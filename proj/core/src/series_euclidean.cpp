#include "crpc/series_euclidean.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>

#include "crpc/error.hpp"

namespace crpc {

namespace {

double binom(int n, int k) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k));
}

TSeries constant_plus(const std::string& label, double c, TSeries s) {
  s.label = label;
  if (!s.terms.empty()) s.terms[0] = s.terms[0].map([c](double v) { return v + c; });
  return s;
}

}  // namespace

ScalarField leibniz_product(const TSeries& a, const TSeries& b, int m) {
  if (m < 0 || static_cast<int>(a.terms.size()) <= m || static_cast<int>(b.terms.size()) <= m) {
    fail(ErrorKind::MissingTerm, "Leibniz product of '" + a.label + "' and '" + b.label +
                                     "' at order " + std::to_string(m) + " lacks terms");
  }
  ScalarField out = a.terms[0] * b.terms[m];
  for (int r = 1; r <= m; ++r) out += binom(m, r) * (a.terms[r] * b.terms[m - r]);
  return out;
}

EuclideanTSeries build_tseries(const CoefficientSeries& s, int order) {
  if (order < 0 || order > s.order()) {
    fail(ErrorKind::MissingTerm, "t-series of order " + std::to_string(order) +
                                     " needs coefficients up to that order");
  }
  EuclideanTSeries ts;
  ts.f_x.label = "f_x";
  ts.f_y.label = "f_y";
  ts.f_xx.label = "f_xx";
  ts.f_xy.label = "f_xy";
  ts.f_yy.label = "f_yy";
  for (int m = 0; m <= order; ++m) {
    const auto& d = s.derivatives[m];
    ts.f_x.terms.push_back(d.f_x);
    ts.f_y.terms.push_back(d.f_y);
    ts.f_xx.terms.push_back(d.f_xx);
    ts.f_xy.terms.push_back(d.f_xy);
    ts.f_yy.terms.push_back(d.f_yy);
  }
  TSeries fx2{"f_x^2", {}}, fy2{"f_y^2", {}};
  for (int m = 0; m <= order; ++m) {
    fx2.terms.push_back(leibniz_product(ts.f_x, ts.f_x, m));
    fy2.terms.push_back(leibniz_product(ts.f_y, ts.f_y, m));
    ts.fx_fy.terms.push_back(leibniz_product(ts.f_x, ts.f_y, m));
    ts.D.terms.push_back(leibniz_product(ts.f_xy, ts.f_xy, m) -
                         leibniz_product(ts.f_xx, ts.f_yy, m));
  }
  ts.fx_fy.label = "f_x f_y";
  ts.D.label = "f_xy^2 - f_xx f_yy";
  ts.one_plus_fx2 = constant_plus("1+f_x^2", 1.0, fx2);
  ts.one_plus_fy2 = constant_plus("1+f_y^2", 1.0, fy2);
  ts.W.label = "W";
  for (int m = 0; m <= order; ++m) ts.W.terms.push_back(fx2.terms[m] + fy2.terms[m]);
  ts.W = constant_plus("W", 1.0, ts.W);
  ts.H.label = "H";
  ts.K.label = "K";
  for (int m = 0; m <= order; ++m) {
    ScalarField two_h = leibniz_product(ts.one_plus_fy2, ts.f_xx, m) -
                        2.0 * leibniz_product(ts.fx_fy, ts.f_xy, m) +
                        leibniz_product(ts.one_plus_fx2, ts.f_yy, m);
    ts.H.terms.push_back(0.5 * two_h);
    ts.K.terms.push_back(-leibniz_product(ts.W, ts.D, m));
  }
  return ts;
}

ScalarField H_r_apply(int r, const EuclideanTSeries& ts, const DerivativeBundle& u) {
  if (r < 0 || static_cast<int>(ts.f_x.terms.size()) <= r) {
    fail(ErrorKind::MissingTerm, "H_" + std::to_string(r) + " needs t-series terms 0.." +
                                     std::to_string(r));
  }
  const double w = (r == 0) ? 2.0 : 1.0;
  const ScalarField& fxx0 = ts.f_xx.terms[0];
  const ScalarField& fxy0 = ts.f_xy.terms[0];
  const ScalarField& fyy0 = ts.f_yy.terms[0];
  const ScalarField& fxr = ts.f_x.terms[r];
  const ScalarField& fyr = ts.f_y.terms[r];
  return ts.one_plus_fy2.terms[r] * u.f_xx - 2.0 * (ts.fx_fy.terms[r] * u.f_xy) +
         ts.one_plus_fx2.terms[r] * u.f_yy + w * ((fyy0 * fxr - fxy0 * fyr) * u.f_x) +
         w * ((fxx0 * fyr - fxy0 * fxr) * u.f_y);
}

ScalarField H_r_apply(int r, const CoefficientSeries& s, const ScalarField& u) {
  return H_r_apply(r, build_tseries(s, r), cartesian_derivatives(u));
}

EllipticCoefficients h0_coefficients(const DerivativeBundle& d) {
  const PolarGrid& g = d.f_x.grid();
  const ScalarField one(g, 1.0);
  return {2.0 * (d.f_yy * d.f_x - d.f_xy * d.f_y), 2.0 * (d.f_xx * d.f_y - d.f_xy * d.f_x),
          one + d.f_y * d.f_y, -2.0 * (d.f_x * d.f_y), one + d.f_x * d.f_x};
}

ScalarField scherk_field(const PolarGrid& grid, double scale) {
  if (!(scale > 0.0 && scale < std::numbers::pi / 2)) {
    fail(ErrorKind::ParamOutOfRange, "Scherk scale must lie in (0, pi/2)");
  }
  return sample([scale](double x, double y) {
    return (std::log(std::cos(scale * y)) - std::log(std::cos(scale * x))) / scale;
  }, grid);
}

namespace {

ScalarField two_h(const DerivativeBundle& d) {
  const ScalarField one(d.f_x.grid(), 1.0);
  return (one + d.f_y * d.f_y) * d.f_xx - 2.0 * (d.f_x * d.f_y * d.f_xy) +
         (one + d.f_x * d.f_x) * d.f_yy;
}

}  // namespace

CoefficientSeries seed_euclidean(const ScalarField& f0, SeedSpec spec, double minimal_tol) {
  DerivativeBundle d = cartesian_derivatives(f0);
  const ScalarField one(f0.grid(), 1.0);
  const double h_sup = interior_sup(two_h(d));
  if (h_sup > minimal_tol) {
    std::ostringstream msg;
    msg << "seed is not a minimal graph: sup |2H| = " << h_sup << " > " << minimal_tol;
    fail(ErrorKind::NotMinimalSeed, msg.str());
  }
  const ScalarField w = one + d.f_x * d.f_x + d.f_y * d.f_y;
  ScalarField sk = (w * (d.f_xy * d.f_xy - d.f_xx * d.f_yy)).map([](double v) {
    return std::sqrt(std::max(v, 0.0));
  });
  const double mx = max_value(sk), mn = min_value(sk);
  if (!(mx > 0.0) || mn < kFlatPointTol * mx) {
    std::ostringstream msg;
    msg << "seed has a flat point: min sqrt(-K) = " << mn << ", max = " << mx;
    fail(ErrorKind::FlatPointDetected, msg.str());
  }
  CoefficientSeries s{Geometry::Euclidean, f0.grid(), std::move(spec), {}, {}, std::move(sk)};
  s.coeffs.push_back(f0);
  s.derivatives.push_back(std::move(d));
  return s;
}

PolishResult polish_minimal_graph(const ScalarField& f0, double tol, int max_iter,
                                  const EllipticOptions& options) {
  PolishResult out{f0, {}};
  for (int it = 0;; ++it) {
    const DerivativeBundle d = cartesian_derivatives(out.field);
    const ScalarField h = two_h(d);
    const double sup = interior_sup(h);
    out.history.push_back(sup);
    if (sup <= tol) break;
    if (it == max_iter) {
      std::ostringstream msg;
      msg << "minimal-graph Newton iteration stalled at sup |2H| = " << sup;
      fail(ErrorKind::NoConvergence, msg.str());
    }
    out.field -= EllipticSolver(h0_coefficients(d), options).solve(h);
  }
  return out;
}

CoefficientSeries seed_scherk(const PolarGrid& grid, double scale, bool polish,
                              double minimal_tol) {
  std::ostringstream desc;
  desc << "Scherk graph (log cos(" << scale << " y) - log cos(" << scale << " x)) / " << scale;
  ScalarField f0 = scherk_field(grid, scale);
  if (polish) {
    f0 = polish_minimal_graph(f0).field;
    desc << ", polished to a discrete minimal graph";
  }
  SeedSpec spec{SeedSpec::Kind::Scherk, {}, scale, desc.str()};
  return seed_euclidean(f0, spec, minimal_tol);
}

ScalarField rhs_euclidean(int m, const CoefficientSeries& s, const EuclideanTSeries& ts) {
  if (m < 1) fail(ErrorKind::MissingTerm, "order must be positive");
  if (static_cast<int>(ts.f_x.terms.size()) < m) {
    fail(ErrorKind::MissingTerm, "order " + std::to_string(m) + " needs t-series up to " +
                                     std::to_string(m - 1));
  }
  ScalarField out(s.grid);
  for (int r = 1; r <= m - 1; ++r) {
    out -= binom(m, r) * H_r_apply(r, ts, s.derivatives[m - r]);
  }
  ScalarField num = -static_cast<double>(m) * ts.K.terms[m - 1];
  for (int r = 2; r <= m - 1; ++r) {
    num -= (4.0 * binom(m + 1, r) / (m + 1)) * (ts.H.terms[r] * ts.H.terms[m - r + 1]);
  }
  const double two = (m == 1) ? 1.0 : 2.0;
  const auto sk = s.sqrtK0.values();
  std::vector<double> q(num.values().begin(), num.values().end());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] /= two * sk[i];
  return out + ScalarField(s.grid, std::move(q));
}

ScalarField rhs_euclidean(int m, const CoefficientSeries& s) {
  if (static_cast<int>(s.coeffs.size()) < m) {
    fail(ErrorKind::MissingTerm, "order " + std::to_string(m) + " needs f^(0.." +
                                     std::to_string(m - 1) + ")");
  }
  return rhs_euclidean(m, s, build_tseries(s, m - 1));
}

void extend_euclidean(CoefficientSeries& s, int order, const EllipticOptions& options) {
  if (s.geometry != Geometry::Euclidean) {
    fail(ErrorKind::ConfigError, "extend_euclidean() needs a Euclidean seed");
  }
  if (s.order() >= order) return;
  const EllipticSolver solver(h0_coefficients(s.derivatives[0]), options);
  for (int m = static_cast<int>(s.coeffs.size()); m <= order; ++m) {
    s.push(solver.solve(rhs_euclidean(m, s)));
  }
}

Residual residual_euclidean(const ScalarField& f, double t) {
  const DerivativeBundle d = cartesian_derivatives(f);
  const PolarGrid& g = f.grid();
  const std::size_t n_int = static_cast<std::size_t>(g.n_r()) * g.n_theta();
  std::vector<double> out(g.storage_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double fx = d.f_x.values()[i], fy = d.f_y.values()[i];
    const double fxx = d.f_xx.values()[i], fxy = d.f_xy.values()[i], fyy = d.f_yy.values()[i];
    const double rad = fxy * fxy - fxx * fyy;
    if (rad < 0.0 && i < n_int && t != 0.0) {
      std::ostringstream msg;
      msg << "f_xy^2 - f_xx f_yy = " << rad << " < 0 at node (" << i / g.n_theta() << ", "
          << i % g.n_theta() << ")";
      fail(ErrorKind::NotNegativeK, msg.str());
    }
    const double w = 1.0 + fx * fx + fy * fy;
    out[i] = (1.0 + fy * fy) * fxx - 2.0 * fx * fy * fxy + (1.0 + fx * fx) * fyy -
             t * std::sqrt(w * std::max(rad, 0.0));
  }
  ScalarField field(g, std::move(out));
  const double sup = interior_sup(field);
  return {std::move(field), sup};
}

}  // namespace crpc
