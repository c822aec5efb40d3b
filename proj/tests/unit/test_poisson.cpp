#include <gtest/gtest.h>

#include <cmath>

#include "crpc/error.hpp"
#include "crpc/poisson.hpp"
#include "crpc/series_euclidean.hpp"
#include "test_util.hpp"

using namespace crpc;
using crpc::test::bowl;
using crpc::test::max_abs_diff;

namespace {
const PolarGrid& grid64() {
  static const PolarGrid g = make_polar_grid(64, 128);
  return g;
}
}  // namespace

TEST(PoissonPoisson, ConstantRhs) {
  const ScalarField u = solve_poisson(ScalarField(grid64(), 2.0));
  EXPECT_LT(max_abs_diff(u, [](double x, double y) { return bowl(x, y) / 2; }), 1e-10);
  const ScalarField v = solve_poisson(ScalarField(grid64(), -1.5));
  EXPECT_LT(max_abs_diff(v, [](double x, double y) { return -0.375 * bowl(x, y); }), 1e-10);
}

TEST(PoissonPoisson, HarmonicExtension) {
  const auto& g = grid64();
  const ScalarField u = solve_poisson(ScalarField(g), boundary_from_function(g, [](double th) { return std::sin(2 * th); }));
  EXPECT_LT(max_abs_diff(u, [](double x, double y) { return 2 * x * y; }), 1e-10);

  // the radial stencils are exact up to r^4; higher modes see truncation error
  for (int k : {0, 1, 3, 7}) {
    const ScalarField h = harmonic_extension(g, boundary_from_function(g, [&](double th) { return std::cos(k * th); }));
    EXPECT_LT(max_abs_diff(h, [&](double x, double y) { return std::pow(std::hypot(x, y), k) * std::cos(k * std::atan2(y, x)); }),
              k <= 3 ? 1e-10 : 1e-6)
        << k;
  }
  // trace of 2 Re(w^3 / 2) = x^3 - 3 x y^2
  const ScalarField c = harmonic_extension(g, boundary_from_function(g, [](double th) { return std::cos(3 * th); }));
  EXPECT_LT(max_abs_diff(c, [](double x, double y) { return x * x * x - 3 * x * y * y; }), 1e-9);
}

TEST(PoissonPoisson, Linearity) {
  const auto& g = grid64();
  const ScalarField g1 = sample([](double x, double y) { return std::exp(x) * y; }, g);
  const ScalarField g2 = sample([](double x, double y) { return std::cos(3 * x * y); }, g);
  const ScalarField lhs = solve_poisson(0.3 * g1 - 1.7 * g2);
  const ScalarField rhs = 0.3 * solve_poisson(g1) - 1.7 * solve_poisson(g2);
  EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
}

TEST(PoissonPoisson, MaximumPrinciple) {
  const auto& g = grid64();
  const BoundaryData b = boundary_from_function(g, [](double th) { return std::exp(std::cos(th)) * std::sin(5 * th) + 0.2; });
  const ScalarField u = harmonic_extension(g, b);
  const double lo = *std::min_element(b.begin(), b.end()), hi = *std::max_element(b.begin(), b.end());
  EXPECT_GE(min_value(u), lo - 1e-12);
  EXPECT_LE(max_value(u), hi + 1e-12);
}

TEST(PoissonPoisson, ResidualOfDiscreteOperator) {
  const auto& g = grid64();
  const ScalarField rhs = sample([](double x, double y) { return std::sin(4 * x) + y * y; }, g);
  const ScalarField u = solve_poisson(rhs);
  EXPECT_LT(interior_sup(laplacian(u) - rhs), 1e-12 * (1 + sup_norm(rhs)) * 100);
}

TEST(PoissonPoisson, GridConvergence) {
  // u* = (1 - r^2) e^x cos y, laplacian computed symbolically
  const auto exact = [](double x, double y) { return -bowl(x, y) * std::exp(x) * std::cos(y); };
  const auto lap = [](double x, double y) {
    const double e = std::exp(x), c = std::cos(y), s = std::sin(y);
    return -(4 * e * c + 4 * x * e * c - 4 * y * e * s);
  };
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const PolarGrid g = make_polar_grid(n, 2 * n);
    const double err = max_abs_diff(solve_poisson(sample(lap, g)), exact);
    if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 1.9) << n;
    prev = err;
  }
}

TEST(PoissonElliptic, LaplacianCoefficients) {
  const auto& g = grid64();
  const ScalarField u = solve_elliptic(EllipticCoefficients::laplacian(g), ScalarField(g, 2.0),
                                       BoundaryData(g.n_theta(), 0.0));
  EXPECT_LT(max_abs_diff(u, [](double x, double y) { return bowl(x, y) / 2; }), 1e-8);
}

TEST(PoissonElliptic, ZeroSeedGivesLaplacian) {
  const auto& g = grid64();
  const EllipticCoefficients c = h0_coefficients(cartesian_derivatives(ScalarField(g)));
  const ScalarField u = sample([](double x, double y) { return std::sin(x) * std::exp(2 * y); }, g);
  EXPECT_LT(sup_norm(c.apply(u) - laplacian(u)), 1e-12);
}

TEST(PoissonElliptic, ManufacturedAtScherkSeed) {
  const auto& g = grid64();
  const CoefficientSeries s = seed_scherk(g);
  const EllipticCoefficients c = h0_coefficients(s.derivatives[0]);
  const ScalarField exact = sample([](double x, double y) { return -bowl(x, y) * x; }, g);
  for (EllipticMethod m : {EllipticMethod::Krylov, EllipticMethod::Direct}) {
    EllipticOptions o;
    o.method = m;
    const ScalarField u = solve_elliptic(c, c.apply(exact), BoundaryData(g.n_theta(), 0.0), o);
    EXPECT_LT(max_abs_diff(u, exact), 5e-6);
  }
}

TEST(PoissonElliptic, DiagonalPreconditionerAgrees) {
  const PolarGrid g = make_polar_grid(24, 48);
  const CoefficientSeries s = seed_scherk(g);
  const EllipticCoefficients c = h0_coefficients(s.derivatives[0]);
  const ScalarField rhs = sample([](double x, double y) { return 1.0 + x * y; }, g);
  EllipticOptions diag;
  diag.preconditioner = Preconditioner::Diagonal;
  const ScalarField a = solve_elliptic(c, rhs, BoundaryData(g.n_theta(), 0.0));
  const ScalarField b = solve_elliptic(c, rhs, BoundaryData(g.n_theta(), 0.0), diag);
  EXPECT_LT(max_abs_diff(a, b), 1e-7);
}

TEST(PoissonElliptic, RejectsNonElliptic) {
  const auto& g = grid64();
  EllipticCoefficients c = EllipticCoefficients::laplacian(g);
  c.a22 = ScalarField(g, -1.0);
  try {
    solve_elliptic(c, ScalarField(g), BoundaryData(g.n_theta(), 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotElliptic);
  }
}
