#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "crpc/error.hpp"
#include "crpc/grid.hpp"
#include "test_util.hpp"

using namespace crpc;
using crpc::test::max_abs_diff;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no crpc::Error thrown";
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(GridPolarGrid, Sizes) {
  const PolarGrid g = make_polar_grid(64, 128);
  EXPECT_EQ(g.n_r() + 1, 65);
  EXPECT_EQ(g.n_theta(), 128);
  EXPECT_DOUBLE_EQ(g.h(), 1.0 / 64);
  EXPECT_EQ(g.r(64), 1.0);
  EXPECT_EQ(g.unknown_count(), 1u + 64u * 128u);
}

TEST(GridPolarGrid, SmallestAndRejected) {
  EXPECT_NO_THROW(make_polar_grid(8, 8));
  EXPECT_EQ(kind_of([] { make_polar_grid(8, 7); }), ErrorKind::OddAngularCount);
  EXPECT_EQ(kind_of([] { make_polar_grid(7, 8); }), ErrorKind::GridTooSmall);
  EXPECT_EQ(kind_of([] { make_polar_grid(8, 6); }), ErrorKind::GridTooSmall);
}

TEST(GridSample, BoundaryTraces) {
  const PolarGrid g = make_polar_grid(16, 32);
  const ScalarField f = sample([](double x, double y) { return 2 * x * y; }, g);
  for (int k = 0; k < g.n_theta(); ++k) EXPECT_NEAR(f(16, k), std::sin(2 * g.theta(k)), 1e-15);
  EXPECT_NEAR(boundary_sup(f), 1.0, 1e-15);

  const ScalarField one = sample([](double, double) { return 1.0; }, g);
  EXPECT_EQ(sup_norm(one), 1.0);
  EXPECT_EQ(min_value(one), 1.0);

  const ScalarField bowl = sample([](double x, double y) { return (x * x + y * y - 1) / 2; }, g);
  EXPECT_LT(boundary_sup(bowl), 1e-15);
}

TEST(GridSample, NonFinite) {
  const PolarGrid g = make_polar_grid(8, 8);
  EXPECT_EQ(kind_of([&] { sample([](double x, double) { return 1.0 / x; }, g); }),
            ErrorKind::NonFiniteSample);
}

TEST(GridSample, PoleAliasesAgree) {
  const PolarGrid g = make_polar_grid(16, 32);
  const ScalarField f = sample([](double x, double y) { return std::exp(x) * std::cos(3 * y) + 0.1; }, g);
  for (int k = 1; k < g.n_theta(); ++k) EXPECT_EQ(f(0, k), f(0, 0));
  const DerivativeBundle d = cartesian_derivatives(f);
  for (const ScalarField* h : {&d.f_x, &d.f_y, &d.f_xx, &d.f_xy, &d.f_yy}) {
    for (int k = 1; k < g.n_theta(); ++k) EXPECT_EQ((*h)(0, k), (*h)(0, 0));
  }
}

TEST(GridDerivatives, Monomials) {
  const PolarGrid g = make_polar_grid(64, 128);
  const DerivativeBundle d = cartesian_derivatives(sample([](double x, double y) { return 2 * x * y; }, g));
  EXPECT_LT(max_abs_diff(d.f_xy, [](double, double) { return 2.0; }), 1e-8);
  EXPECT_LT(sup_norm(d.f_xx), 1e-8);
  EXPECT_LT(sup_norm(d.f_yy), 1e-8);

  const DerivativeBundle e = cartesian_derivatives(sample([](double x, double y) { return x * x - y * y; }, g));
  EXPECT_LT(max_abs_diff(e.f_xx, [](double, double) { return 2.0; }), 1e-8);
  EXPECT_LT(max_abs_diff(e.f_yy, [](double, double) { return -2.0; }), 1e-8);
}

// Random cubic polynomials against their symbolic derivatives.
TEST(GridDerivatives, CubicsExact) {
  const PolarGrid g = make_polar_grid(64, 128);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    double c[10];
    for (double& v : c) v = u(rng);
    const auto f = [&](double x, double y) {
      return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y + c[6] * x * x * x +
             c[7] * x * x * y + c[8] * x * y * y + c[9] * y * y * y;
    };
    const DerivativeBundle d = cartesian_derivatives(sample(f, g));
    EXPECT_LT(max_abs_diff(d.f_x, [&](double x, double y) {
                return c[1] + 2 * c[3] * x + c[4] * y + 3 * c[6] * x * x + 2 * c[7] * x * y + c[8] * y * y;
              }), 1e-8);
    EXPECT_LT(max_abs_diff(d.f_y, [&](double x, double y) {
                return c[2] + c[4] * x + 2 * c[5] * y + c[7] * x * x + 2 * c[8] * x * y + 3 * c[9] * y * y;
              }), 1e-8);
    EXPECT_LT(max_abs_diff(d.f_xx, [&](double x, double y) { return 2 * c[3] + 6 * c[6] * x + 2 * c[7] * y; }), 1e-8);
    EXPECT_LT(max_abs_diff(d.f_xy, [&](double x, double y) { return c[4] + 2 * c[7] * x + 2 * c[8] * y; }), 1e-8);
    EXPECT_LT(max_abs_diff(d.f_yy, [&](double x, double y) { return 2 * c[5] + 2 * c[8] * x + 6 * c[9] * y; }), 1e-8);
  }
}

// r^4 cos 4 theta = x^4 - 6x^2y^2 + y^4: error falls at fourth order.
TEST(GridDerivatives, QuarticConverges) {
  const auto f = [](double x, double y) { return x * x * x * x - 6 * x * x * y * y + y * y * y * y; };
  const auto fxx = [](double x, double y) { return 12 * x * x - 12 * y * y; };
  const auto fxy = [](double x, double y) { return -24 * x * y; };
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const PolarGrid g = make_polar_grid(n, 2 * n);
    const DerivativeBundle d = cartesian_derivatives(sample(f, g));
    const double err = std::max(max_abs_diff(d.f_xx, fxx), max_abs_diff(d.f_xy, fxy));
    EXPECT_LT(err, 200.0 / std::pow(n, 4) + 1e-9) << n;
    if (prev > 1e-10) EXPECT_GT(prev / err, 8.0) << n;
    prev = err;
  }
}

TEST(GridDerivatives, SpectralAngular) {
  const PolarGrid g = make_polar_grid(32, 64);
  for (int k : {1, 5, 17, 31}) {
    const ScalarField f = ScalarField::generate(g, [&](int j, int m) {
      return std::pow(g.r(j), k) * std::cos(k * g.theta(m));
    });
    // On the boundary ring r = 1 only the angular part matters: f_theta = -k sin(k theta),
    // and in Cartesian terms f_theta = -y f_x + x f_y.
    const DerivativeBundle d = cartesian_derivatives(f);
    for (int m = 0; m < g.n_theta(); ++m) {
      const double th = g.theta(m), x = std::cos(th), y = std::sin(th);
      EXPECT_NEAR(-y * d.f_x(32, m) + x * d.f_y(32, m), -k * std::sin(k * th), 1e-10 * k);
    }
  }
}

TEST(GridField, Arithmetic) {
  const PolarGrid g = make_polar_grid(8, 8);
  const ScalarField a = sample([](double x, double) { return x; }, g);
  const ScalarField b = sample([](double, double y) { return y; }, g);
  EXPECT_LT(max_abs_diff(a * b, [](double x, double y) { return x * y; }), 1e-15);
  EXPECT_LT(max_abs_diff(a + 2.0 * b, [](double x, double y) { return x + 2 * y; }), 1e-15);
  EXPECT_THROW(a + ScalarField(make_polar_grid(8, 10)), Error);
}

TEST(GridField, CsvRoundTrip) {
  const PolarGrid g = make_polar_grid(12, 16);
  const ScalarField f = sample([](double x, double y) { return std::sin(3 * x) * std::exp(y) / 7.0; }, g);
  std::stringstream ss;
  write_field_csv(ss, f);
  EXPECT_EQ(ss.str().rfind("r,theta,value\n", 0), 0u);
  const ScalarField back = read_field_csv(ss);
  EXPECT_TRUE(back.grid() == g);
  EXPECT_EQ(max_abs_diff(f, back), 0.0);
}

TEST(GridField, CsvRejectsGarbage) {
  std::stringstream ss("r,theta,value\n0,0,1\n0.5,x,2\n");
  EXPECT_THROW(read_field_csv(ss), Error);
  std::stringstream no_header("0,0,1\n");
  EXPECT_THROW(read_field_csv(no_header), Error);
}
