#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "crpc/error.hpp"
#include "crpc/report_io.hpp"
#include "crpc/series_euclidean.hpp"
#include "test_util.hpp"

using namespace crpc;
using crpc::test::max_abs_diff;

namespace {

const PolarGrid& grid48() {
  static const PolarGrid g = make_polar_grid(48, 96);
  return g;
}

const CoefficientSeries& scherk3() {
  static const CoefficientSeries s = [] {
    CoefficientSeries out = seed_scherk(grid48());
    extend_euclidean(out, 3);
    return out;
  }();
  return s;
}

// Polynomial in t (ascending), truncated to `n` terms.
using Poly = std::vector<double>;
Poly mul(const Poly& a, const Poly& b, std::size_t n) {
  Poly c(n, 0.0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}
Poly add(Poly a, const Poly& b, double s = 1.0) {
  a.resize(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
  return a;
}

// t-polynomials of f_x, ..., f_yy at node i from the coefficient bundles.
struct NodePolys {
  Poly fx, fy, fxx, fxy, fyy;
};
NodePolys node_polys(const CoefficientSeries& s, std::size_t i) {
  NodePolys p;
  double fact = 1.0;
  for (int m = 0; m <= s.order(); ++m) {
    if (m > 0) fact *= m;
    const DerivativeBundle& d = s.derivatives[m];
    p.fx.push_back(d.f_x.values()[i] / fact);
    p.fy.push_back(d.f_y.values()[i] / fact);
    p.fxx.push_back(d.f_xx.values()[i] / fact);
    p.fxy.push_back(d.f_xy.values()[i] / fact);
    p.fyy.push_back(d.f_yy.values()[i] / fact);
  }
  return p;
}

// 2H(t) = (1+f_y^2) f_xx - 2 f_x f_y f_xy + (1+f_x^2) f_yy as a t-polynomial.
Poly two_h(const NodePolys& p, std::size_t n) {
  const Poly one{1.0};
  return add(add(mul(add(one, mul(p.fy, p.fy, n)), p.fxx, n), mul(mul(p.fx, p.fy, n), p.fxy, n), -2.0),
             mul(add(one, mul(p.fx, p.fx, n)), p.fyy, n));
}

// K(t) = -(1 + f_x^2 + f_y^2)(f_xy^2 - f_xx f_yy)
Poly k_norm(const NodePolys& p, std::size_t n) {
  const Poly W = add(add(Poly{1.0}, mul(p.fx, p.fx, n)), mul(p.fy, p.fy, n));
  const Poly D = add(mul(p.fxy, p.fxy, n), mul(p.fxx, p.fyy, n), -1.0);
  return add(Poly{}, mul(W, D, n), -1.0);
}

}  // namespace

TEST(EucSeriesLeibniz, Examples) {
  const PolarGrid g = make_polar_grid(8, 8);
  const TSeries one{"1", {ScalarField(g, 1.0), ScalarField(g), ScalarField(g)}};
  EXPECT_EQ(sup_norm(leibniz_product(one, one, 0) - ScalarField(g, 1.0)), 0.0);
  EXPECT_EQ(sup_norm(leibniz_product(one, one, 2)), 0.0);
  const TSeries lin{"1+t", {ScalarField(g, 1.0), ScalarField(g, 1.0), ScalarField(g)}};
  EXPECT_EQ(sup_norm(leibniz_product(lin, lin, 2) - ScalarField(g, 2.0)), 0.0);
  try {
    leibniz_product(lin, lin, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingTerm);
  }
}

// 2H^(m) = H_0(f^(m)) + sum_{r=1}^{m-1} C(m, r) H_r(f^(m-r)) against per-node t-polynomials.
TEST(EucSeriesHOperators, DecompositionIdentity) {
  const PolarGrid g = make_polar_grid(24, 48);
  CoefficientSeries s{Geometry::Euclidean, g, {}, {}, {}, ScalarField(g, 1.0)};
  s.push(sample([](double x, double y) { return 0.4 * std::sin(x) * y + 0.3 * x * x; }, g));
  s.push(sample([](double x, double y) { return std::cos(x + 2 * y) - 0.2 * x; }, g));
  s.push(sample([](double x, double y) { return x * y * y - 0.5 * std::exp(y); }, g));
  s.push(sample([](double x, double y) { return 0.7 * x * x * x + y; }, g));
  s.push(sample([](double x, double y) { return std::sin(3 * x * y); }, g));
  const int order = 4;
  // H_0 is the linearization at f^(0), so the identity starts at m = 1.
  std::vector<ScalarField> lhs{ScalarField(g)};
  for (int m = 1; m <= order; ++m) {
    ScalarField acc = H_r_apply(0, s, s.coeffs[m]);
    double c = 1.0;
    for (int r = 1; r <= m - 1; ++r) {
      c = c * (m - r + 1) / r;
      acc += c * H_r_apply(r, s, s.coeffs[m - r]);
    }
    lhs.push_back(acc);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < g.storage_size(); i += 7) {
    const Poly h = two_h(node_polys(s, i), order + 1);
    double fact = 1.0;
    for (int m = 1; m <= order; ++m) {
      fact *= m;
      worst = std::max(worst, std::abs(lhs[m].values()[i] - fact * h[m]) / (1 + std::abs(fact * h[m])));
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(EucSeriesHOperators, ZeroSeedIsLaplacian) {
  const PolarGrid g = make_polar_grid(24, 48);
  CoefficientSeries s{Geometry::Euclidean, g, {}, {}, {}, ScalarField(g, 1.0)};
  s.push(ScalarField(g));
  const ScalarField u = sample([](double x, double y) { return x * x * y + std::cos(y); }, g);
  EXPECT_LT(sup_norm(H_r_apply(0, s, u) - laplacian(u)), 1e-12);
}

TEST(EucSeriesSeed, ScherkIsDiscreteMinimal) {
  const CoefficientSeries& s = scherk3();
  EXPECT_LT(residual_euclidean(s.coeffs[0], 0.0).sup, 5e-8);
}

TEST(EucSeriesSeed, SaddleNotMinimal) {
  try {
    seed_euclidean(sample([](double x, double y) { return 2 * x * y; }, grid48()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMinimalSeed);
  }
}

TEST(EucSeriesRecursion, FirstRightSide) {
  const CoefficientSeries& s = scherk3();
  const ScalarField r1 = rhs_euclidean(1, s);
  EXPECT_LT(max_abs_diff(r1, s.sqrtK0), 1e-12);
  EXPECT_NEAR(r1.pole_value(), 1.0, 1e-6);
}

TEST(EucSeriesRecursion, FirstOrderEquation) {
  const CoefficientSeries& s = scherk3();
  const ScalarField lhs = h0_coefficients(s.derivatives[0]).apply(s.coeffs[1]);
  EXPECT_LT(interior_sup(lhs - s.sqrtK0), 1e-8);
}

// Coefficients of 4H^2 + t^2 K at t^2 and t^3 vanish once f^(1), f^(2) are known.
TEST(EucSeriesRecursion, BruteForceSecondOrder) {
  const CoefficientSeries& s = scherk3();
  const PolarGrid& g = s.grid;
  double worst = 0.0;
  for (int j = 0; j < g.n_r(); ++j) {
    for (int k = 0; k < g.n_theta(); k += 5) {
      const std::size_t i = static_cast<std::size_t>(j) * g.n_theta() + k;
      NodePolys p = node_polys(s.truncated(2), i);
      const Poly h = two_h(p, 4);
      const Poly q = add(mul(h, h, 4), mul(Poly{0.0, 0.0, 1.0}, k_norm(p, 4), 4));
      worst = std::max({worst, std::abs(q[2]), std::abs(q[3])});
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(EucSeriesRecursion, DirichletPreserved) {
  const CoefficientSeries& s = scherk3();
  for (int m = 1; m <= s.order(); ++m) EXPECT_LE(boundary_sup(s.coeffs[m]), 1e-9);
  EXPECT_LE(boundary_sup(sum_series(s, 0.1) - s.coeffs[0]), 1e-9);
}

TEST(EucSeriesResidual, Order) {
  const CoefficientSeries& s = scherk3();
  EXPECT_LT(residual_euclidean(sum_series(s, 0.05), 0.05).sup, 1e-5);
  for (int M : {1, 2, 3}) {
    const std::vector<double> ts{0.01, 0.02, 0.04};
    std::vector<double> sup;
    for (double t : ts) sup.push_back(residual_euclidean(sum_series(s.truncated(M), t), t).sup);
    EXPECT_GE(loglog_slope(ts, sup), M + 0.5) << M;
  }
}

TEST(EucSeriesDeterminism, TwoRunsIdentical) {
  CoefficientSeries a = seed_scherk(make_polar_grid(24, 48));
  CoefficientSeries b = seed_scherk(make_polar_grid(24, 48));
  extend_euclidean(a, 2);
  extend_euclidean(b, 2);
  for (int m = 0; m <= 2; ++m) EXPECT_LE(max_abs_diff(a.coeffs[m], b.coeffs[m]), 1e-12);
}

TEST(EucSeriesRecursion, DirectAndKrylovAgree) {
  CoefficientSeries a = seed_scherk(make_polar_grid(24, 48));
  CoefficientSeries b = a;
  extend_euclidean(a, 2);
  EllipticOptions direct;
  direct.method = EllipticMethod::Direct;
  extend_euclidean(b, 2, direct);
  for (int m = 1; m <= 2; ++m) EXPECT_LE(max_abs_diff(a.coeffs[m], b.coeffs[m]), 1e-7);
}

TEST(EucSeriesSaveLoad, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "crpc_series_euc";
  std::filesystem::remove_all(dir);
  save_series(scherk3(), dir.string());
  const CoefficientSeries back = load_series(dir.string());
  EXPECT_EQ(back.geometry, Geometry::Euclidean);
  EXPECT_EQ(back.seed.kind, SeedSpec::Kind::Scherk);
  ASSERT_EQ(back.order(), 3);
  for (int m = 0; m <= 3; ++m) EXPECT_EQ(max_abs_diff(back.coeffs[m], scherk3().coeffs[m]), 0.0);
  std::filesystem::remove_all(dir);
}
