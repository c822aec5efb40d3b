#include <gtest/gtest.h>

#include <algorithm>

#include "crpc/approx2.hpp"
#include "crpc/closed_forms.hpp"
#include "crpc/error.hpp"
#include "crpc/refine.hpp"
#include "crpc/series_euclidean.hpp"
#include "crpc/series_isotropic.hpp"
#include "test_util.hpp"

using namespace crpc;
using crpc::test::max_abs_diff;

namespace {

const PolarGrid& grid48() {
  static const PolarGrid g = make_polar_grid(48, 96);
  return g;
}

ScalarField deg2_sampled(double t) {
  const GraphFunction f = deg2_family(t);
  return sample([&](double x, double y) { return f(x, y); }, grid48());
}

double boundary_drift(const RefineResult& r, const ScalarField& f0) { return boundary_sup(r.field - f0); }

}  // namespace

TEST(RefineIsotropic, ClosedFormIsNearFixedPoint) {
  const ScalarField exact = deg2_sampled(0.5);
  RefineOptions o;
  o.tol = 1e-14;
  const RefineResult r = picard_refine(exact, 0.5, Geometry::Isotropic, o);
  EXPECT_LT(r.history.front(), 1e-6);
  EXPECT_LE(r.history.back(), r.history.front() * 1.5);
  EXPECT_LT(max_abs_diff(r.field, exact), 1e-7);

  o.tol = 1e-7;
  const RefineResult quick = picard_refine(exact, 0.5, Geometry::Isotropic, o);
  EXPECT_TRUE(quick.converged);
  EXPECT_LE(quick.iterations, 1);
}

TEST(RefineIsotropic, TruncatedSeriesConvergesToClosedForm) {
  CoefficientSeries s = seed_isotropic(ComplexPoly{0.0, 0.0, cplx(0.0, -0.5)}, grid48());
  extend(s, 2);
  const ScalarField f0 = sum_series(s, 0.5);
  RefineOptions o;
  o.tol = 1e-9;
  const RefineResult r = picard_refine(f0, 0.5, Geometry::Isotropic, o);
  EXPECT_TRUE(r.converged || r.stalled);
  EXPECT_LE(r.iterations, 30);
  EXPECT_LT(max_abs_diff(r.field, deg2_sampled(0.5)), 1e-6);
  EXPECT_LE(boundary_drift(r, f0), 1e-10);
}

TEST(RefineIsotropic, FromApprox2) {
  const Approx2Pipeline p = pipeline_from_hprime(ComplexPoly{1.0, 0.3, cplx(0.0, 0.2)});
  const double tw = 0.3, t = isotropic_t(tw);
  const ScalarField f0 = approx2_field(p, grid48(), tw);
  const RefineResult r = picard_refine(f0, t, Geometry::Isotropic);
  EXPECT_LT(r.history.back(), r.history.front());
  EXPECT_TRUE(r.converged || r.stalled);
  EXPECT_LT(residual_isotropic(r.field, t).sup, 1e-6);
  EXPECT_LE(boundary_drift(r, f0), 1e-10);
}

TEST(RefineIsotropic, FromExactApprox2) {
  // h' = 1: 2 Re g + t |h|^2 already solves the equation
  const Approx2Pipeline p = pipeline_from_hprime(ComplexPoly{1.0});
  const double tw = 0.3;
  const ScalarField f0 = approx2_field(p, grid48(), tw);
  const RefineResult r = picard_refine(f0, isotropic_t(tw), Geometry::Isotropic);
  EXPECT_LT(*std::min_element(r.history.begin(), r.history.end()), 1e-7);
  EXPECT_LE(boundary_drift(r, f0), 1e-10);
}

TEST(RefineIsotropic, LargeTLeavesHyperbolicRegime) {
  CoefficientSeries s = seed_isotropic(ComplexPoly{0.0, 0.0, cplx(0.0, -0.5)}, make_polar_grid(16, 32));
  extend(s, 1);
  try {
    picard_refine(sum_series(s, 40.0), 40.0, Geometry::Isotropic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNegativeK);
  }
}

TEST(RefineIsotropic, DivergenceReported) {
  const ScalarField f0 = sample([](double x, double y) { return 2 * x * y; }, make_polar_grid(16, 32));
  try {
    picard_refine(f0, 1.9, Geometry::Isotropic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Diverged);
  }
  EXPECT_TRUE(picard_refine(f0, 1.0, Geometry::Isotropic).converged);
}

TEST(RefineHistory, Bookkeeping) {
  CoefficientSeries s = seed_isotropic(ComplexPoly{0.0, 0.0, cplx(0.0, -0.5)}, grid48());
  extend(s, 1);
  const ScalarField f0 = sum_series(s, 0.3);
  const RefineResult r = picard_refine(f0, 0.3, Geometry::Isotropic);
  ASSERT_EQ(r.history.size(), static_cast<std::size_t>(r.iterations) + 1);
  EXPECT_DOUBLE_EQ(r.history.front(), residual_isotropic(f0, 0.3).sup);
  EXPECT_DOUBLE_EQ(*std::min_element(r.history.begin(), r.history.end()), residual_isotropic(r.field, 0.3).sup);
}

TEST(RefineEuclidean, ScherkSeries) {
  CoefficientSeries s = seed_scherk(make_polar_grid(32, 64));
  extend_euclidean(s, 2);
  const ScalarField f0 = sum_series(s, 0.05);
  const RefineResult r = picard_refine(f0, 0.05, Geometry::Euclidean);
  EXPECT_LT(r.history.back(), r.history.front());
  EXPECT_LT(residual_euclidean(r.field, 0.05).sup, 1e-6);
  EXPECT_LE(boundary_drift(r, f0), 1e-10);
}
