#include <gtest/gtest.h>

#include <cmath>

#include "crpc/approx2.hpp"
#include "crpc/error.hpp"
#include "crpc/series_isotropic.hpp"
#include "test_util.hpp"

using namespace crpc;
using crpc::test::max_abs_diff;

namespace {

const PolarGrid& grid64() {
  static const PolarGrid g = make_polar_grid(64, 128);
  return g;
}

// h' without zeros in the closed disk: |0.3 w + 0.2 w^2| <= 0.5.
const ComplexPoly kHprime{1.0, 0.3, cplx(0.0, 0.2)};

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

TEST(Approx2Build, FromHprime) {
  const Approx2Pipeline p = pipeline_from_hprime(ComplexPoly{0.0, 1.0});
  EXPECT_EQ(p.h, (ComplexPoly{0.0, 0.0, 0.5}));
  EXPECT_EQ(p.g, (ComplexPoly{0.0, 0.0, 0.0, 0.0, 1.0 / 12}));
  const Approx2Pipeline q = pipeline_from_hprime(kHprime);
  for (cplx w : {cplx(0.3, 0.1), cplx(-0.7, 0.2)}) {
    const cplx hp = kHprime(w);
    EXPECT_LT(std::abs(q.g.derivative().derivative()(w) - hp * hp), 1e-14);
    EXPECT_LT(std::abs(q.h.derivative()(w) - hp), 1e-14);
  }
}

TEST(Approx2Build, FromG) {
  const Approx2Pipeline sq = pipeline_from_g(ComplexPoly{0.0, 0.0, 0.0, 0.0, 1.0 / 12});
  EXPECT_EQ(sq.route, "perfect-square");
  EXPECT_LT(std::abs(std::abs(sq.hprime.coeff(1)) - 1.0), 1e-14);
  EXPECT_LE(sq.validation_residual, 1e-12);

  const Approx2Pipeline series = pipeline_from_g(ComplexPoly{0.0, 0.0, 0.5, 0.0, 1.0 / 24});
  EXPECT_EQ(series.route, "series");
  EXPECT_GT(series.series_degree, 0);
  EXPECT_LE(series.validation_residual, 1e-10);

  EXPECT_EQ(pipeline_from_g(ComplexPoly{0.0, 1.0}).route, "zero");
  EXPECT_EQ(kind_of([] { pipeline_from_g(ComplexPoly{0.0, 0.0, 0.0, 0.5}); }), ErrorKind::NoContinuousBranch);
}

TEST(Approx2Build, DoubleZeroInsideIsFactoredOut) {
  // g'' = (w - 0.2)^2 (3 + w)
  const ComplexPoly g2 = ComplexPoly{-0.2, 1.0} * ComplexPoly{-0.2, 1.0} * ComplexPoly{3.0, 1.0};
  const Approx2Pipeline p = pipeline_from_g(g2.integral().integral());
  EXPECT_LT(std::abs(p.hprime(0.2)), 1e-8);
  EXPECT_LE(p.validation_residual, 1e-10);
}

TEST(Approx2Eval, MatchesFormula) {
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  double worst = 0.0;
  for (cplx w : {cplx(0.0, 0.0), cplx(0.5, -0.3), cplx(-0.9, 0.1), cplx(0.2, 0.95)}) {
    for (double t : {-0.4, 0.1, 0.7}) {
      const cplx g = p.g(w), h = p.h(w), hp = kHprime(w);
      const double expect = 2 * g.real() + std::norm(h) * t + (h * h).real() * std::log(std::abs(hp)) * t * t;
      worst = std::max(worst, std::abs(approx2_eval(p, w, t) - expect));
    }
    EXPECT_EQ(approx2_eval(p, w, 0.0), 2 * p.g(w).real());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Approx2Eval, LogSingularity) {
  const Approx2Pipeline flat = pipeline_from_hprime(ComplexPoly{0.0, 1.0});
  // h and h' both vanish at 0: the log term tends to 0.
  EXPECT_EQ(approx2_eval(flat, 0.0, 0.5), 0.0);
  EXPECT_EQ(approx2_eval(flat, 0.0, 0.5, true), 0.0);
  const Approx2Pipeline off = pipeline_from_hprime(ComplexPoly{-0.5, 1.0});
  EXPECT_EQ(kind_of([&] { approx2_eval(off, 0.5, 0.3); }), ErrorKind::LogSingularity);
  EXPECT_TRUE(std::isfinite(approx2_eval(off, 0.5, 0.3, true)));
  // At a flat point the regularized field is finite everywhere on the grid.
  const ScalarField f = approx2_field(flat, grid64(), 0.3, true);
  for (double v : f.values()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Approx2TaylorTerms, DerivativesInT) {
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  const Approx2Terms terms = approx2_terms(p, grid64());
  const double t = 1e-3;
  const ScalarField fp = approx2_field(p, grid64(), t), fm = approx2_field(p, grid64(), -t);
  EXPECT_LT(max_abs_diff((fp - fm) * (0.5 / t), terms.f1), 1e-12);
  EXPECT_LT(max_abs_diff((fp + fm - 2.0 * terms.f0) * (1 / (t * t)), terms.f2), 1e-6);
}

TEST(Approx2TaylorTerms, FirstOrderLaplacian) {
  // f1 = |h|^2, so f1_{w wbar} = |h'|^2 = |g''|.
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  const Approx2Terms terms = approx2_terms(p, grid64());
  const ScalarField oracle = sample([&](double x, double y) { return std::abs(p.g.derivative().derivative()(cplx(x, y))); }, grid64());
  EXPECT_LT(interior_sup(laplacian(terms.f1) * 0.25 - oracle), 1e-7);
}

TEST(Approx2TaylorTerms, SecondOrderIdentity) {
  // (f2/2)_{w wbar} = Re(conj(g'') f1_ww) / |g''| with f1_ww = h'' conj(h).
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  const Approx2Terms terms = approx2_terms(p, grid64());
  const ComplexPoly h2 = kHprime.derivative();
  const ScalarField rhs = sample(
      [&](double x, double y) {
        const cplx w(x, y), hp = kHprime(w), g2 = hp * hp;
        return (std::conj(g2) * h2(w) * std::conj(p.h(w))).real() / std::abs(g2);
      },
      grid64());
  EXPECT_LT(interior_sup(laplacian(terms.f2) * 0.125 - rhs), 1e-6);
}

TEST(Approx2Residual, WirtingerOfHarmonic) {
  // f = 2 Re g: f_{w wbar} = 0 and f_ww = g''.
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  const ScalarField f0 = approx2_terms(p, grid64()).f0;
  const ScalarField oracle = sample([&](double x, double y) { return -std::abs(p.g.derivative().derivative()(cplx(x, y))); }, grid64());
  EXPECT_LT(interior_sup(approx2_residual(f0, 1.0).field - oracle), 1e-6);
  EXPECT_LT(approx2_residual(f0, 0.0).sup, 1e-7);
}

TEST(Approx2Residual, SecondOrderSlope) {
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  const ResidualOrder o = approx2_residual_order(p, grid64(), {0.02, 0.04, 0.08});
  EXPECT_GE(o.slope, 2.5);
  const Approx2Pipeline q = pipeline_from_hprime(ComplexPoly{0.0, 1.0});
  EXPECT_GE(approx2_residual_order(q, grid64(), {0.02, 0.04, 0.08}).slope, 2.5);
}

// The series' first coefficient solves laplacian(f1) = 2 |g''| with zero
// boundary trace, so it differs from |h|^2 / 2 by a harmonic function.
TEST(Approx2Equivalence, FirstOrderMatchesSeries) {
  const Approx2Pipeline p = pipeline_from_hprime(kHprime);
  CoefficientSeries s = seed_isotropic(p.g, grid64());
  extend(s, 1);
  const ScalarField f1 = approx2_terms(p, grid64()).f1;
  EXPECT_LT(interior_sup(laplacian(s.coeffs[1] - f1 * 0.5)), 1e-6);
}

TEST(Approx2Parameters, WirtingerRoundTrip) {
  for (double t : {-3.0, -0.5, 0.0, 0.2, 10.0}) {
    EXPECT_NEAR(isotropic_t(wirtinger_t(t)), t, 1e-12 * (1 + std::abs(t)));
    EXPECT_LT(std::abs(wirtinger_t(t)), 1.0);
  }
  EXPECT_NEAR(wirtinger_t(2.0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(kind_of([] { isotropic_t(1.0); }), ErrorKind::ParamOutOfRange);
}
