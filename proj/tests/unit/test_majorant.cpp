#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/differentiation/autodiff.hpp>

#include "crpc/error.hpp"
#include "crpc/majorant.hpp"

using namespace crpc;
namespace ad = boost::math::differentiation;

namespace {

constexpr int kTaylorOrder = 12;

// Derivatives a^(m)(0) of the closed-form generating function, by forward-mode
// automatic differentiation.
std::vector<double> closed_form_derivatives(double M, double N) {
  const auto t = ad::make_fvar<double, kTaylorOrder>(0.0);
  const auto rad = 1.0 / (4 * N * N) - t * (2 * M * M * M * N + M / N) - t * t * std::pow(M, 4) * N * N;
  const auto a = (M + t * (M * M * N + 1.0 / (2 * N)) - t * sqrt(rad)) / (t * t + 1.0);
  std::vector<double> out;
  for (int m = 0; m <= kTaylorOrder; ++m) out.push_back(a.derivative(m));
  return out;
}

// Coefficients of the Euclidean quadratic in t, evaluated on the power series
// a(t) = sum b_m t^m; each entry is (value, scale of its terms).
std::vector<std::pair<double, double>> quadratic_coefficients(double M, double N, const std::vector<double>& b,
                                                              int L) {
  using P = std::vector<double>;
  const auto mul = [&](const P& x, const P& y) {
    P z(L, 0.0);
    for (int i = 0; i < L; ++i)
      for (int j = 0; i + j < L; ++j) z[i + j] += x[i] * y[j];
    return z;
  };
  const auto absmul = [&](const P& x, const P& y) {
    P z(L, 0.0);
    for (int i = 0; i < L; ++i)
      for (int j = 0; i + j < L; ++j) z[i + j] += std::abs(x[i] * y[j]);
    return z;
  };
  P a(b.begin(), b.begin() + L), t(L, 0.0), one(L, 0.0), am = a;
  t[1] = 1.0;
  one[0] = 1.0;
  am[0] -= M;
  P a2 = mul(a, a), a4 = mul(a2, a2), a6 = mul(a4, a2), t2 = mul(t, t);
  P ap = a;
  ap[0] += 2 * M;
  P p = mul(am, ap);
  for (double& v : p) v *= -N;
  p[0] += 1 + 30 * std::pow(M, 8) * N * N;
  const P q1 = mul(a4, t2), q2 = mul(t, mul(am, p));
  std::vector<std::pair<double, double>> out;
  const P s1 = absmul(mul(a2, a2), t2), s6 = absmul(a4, a2);
  for (int i = 0; i < L; ++i) {
    const double c1 = N * q1[i] + 15 * std::pow(M, 12) * N * N * N * t2[i];
    const double c3 = N * a6[i] - 6 * a[i] * std::pow(M, 5) * N + (i == 0 ? 5 * std::pow(M, 6) * N : 0.0);
    const double scale = N * s1[i] + std::abs(15 * std::pow(M, 12) * N * N * N * t2[i]) + std::abs(q2[i]) +
                         N * s6[i] + 6 * std::abs(a[i]) * std::pow(M, 5) * N + (i == 0 ? 5 * std::pow(M, 6) * N : 0.0);
    out.push_back({c1 - q2[i] + c3, scale});
  }
  return out;
}

}  // namespace

TEST(MajorantIsotropic, FirstTerms) {
  for (double M : {0.5, 1.0, 2.0}) {
    for (double N : {0.5, 1.0, 2.0}) {
      const MajorantSeq s = majorant_isotropic(M, N, 3);
      EXPECT_DOUBLE_EQ(s.a[0], M);
      EXPECT_NEAR(s.a[1], N * M * M, 1e-14 * N * M * M);
      EXPECT_NEAR(s.a[2], 4 * M * M * M * N * N, 1e-13 * M * M * M * N * N);
    }
  }
}

TEST(MajorantIsotropic, MatchesClosedFormTaylor) {
  for (double M : {0.5, 1.0, 2.0}) {
    for (double N : {0.5, 1.0, 2.0}) {
      const auto oracle = closed_form_derivatives(M, N);
      const MajorantSeq s = majorant_isotropic(M, N, kTaylorOrder);
      for (int m = 0; m <= kTaylorOrder; ++m) {
        EXPECT_NEAR(s.a[m] / oracle[m], 1.0, 1e-9) << "M=" << M << " N=" << N << " m=" << m;
      }
    }
  }
}

TEST(MajorantIsotropic, ClosedForm) {
  EXPECT_DOUBLE_EQ(majorant_closed_form_isotropic(1.3, 0.7, 0.0), 1.3);
  const double M = 0.8, N = 1.1, h = 1e-6;
  const double d = (majorant_closed_form_isotropic(M, N, h) - majorant_closed_form_isotropic(M, N, -h)) / (2 * h);
  EXPECT_NEAR(d, M * M * N, 1e-7);
  // Partial sums inside the radius. At M = N = 1 the radius is about 0.081.
  const MajorantSeq s = majorant_isotropic(1.0, 1.0, 60);
  const double t = 0.02;
  double sum = 0.0;
  for (int m = s.order(); m >= 0; --m) sum = sum * t + s.b[m];
  EXPECT_NEAR(sum, majorant_closed_form_isotropic(1.0, 1.0, t), 1e-8);
  EXPECT_THROW(majorant_closed_form_isotropic(1.0, 1.0, 0.1), Error);
}

TEST(MajorantIsotropic, RadiusIsRadicandRoot) {
  const double R = isotropic_closed_form_radius(1.0, 1.0);
  EXPECT_NEAR(R, (-3 + std::sqrt(10.0)) / 2, 1e-15);
  const RadiusEstimate e = radius_estimate(majorant_isotropic(1.0, 1.0, 60));
  ASSERT_TRUE(e.closed_form && e.ratio_test && e.value);
  EXPECT_NEAR(*e.ratio_test / R, 1.0, 0.1);
  EXPECT_EQ(*e.value, std::min(*e.closed_form, *e.ratio_test));
}

TEST(MajorantSequence, PositiveAndGrowing) {
  for (auto geo : {Geometry::Isotropic, Geometry::Euclidean}) {
    const MajorantSeq s = geo == Geometry::Isotropic ? majorant_isotropic(1.0, 1.0, 30) : majorant_euclidean(1.0, 1.0, 30);
    for (int m = 1; m <= s.order(); ++m) {
      EXPECT_GT(s.a[m], 0.0);
      if (m >= 2) EXPECT_GE(s.a[m], s.a[m - 1]);
    }
  }
}

TEST(MajorantSequence, LogSpaceAgreesAndExtends) {
  const MajorantSeq lin = majorant_euclidean(0.5, 2.0, 40);
  const MajorantSeq lg = majorant_euclidean(0.5, 2.0, 40, true);
  for (int m = 0; m <= 40; ++m) EXPECT_NEAR(lg.log_a[m], lin.log_a[m], 1e-10 * (1 + std::abs(lin.log_a[m])));
  EXPECT_THROW(majorant_isotropic(1.0, 1.0, 100), Error);
  const MajorantSeq big = majorant_isotropic(1.0, 1.0, 100, true);
  EXPECT_EQ(big.order(), 100);
  EXPECT_TRUE(std::isfinite(big.log_a.back()));
}

TEST(MajorantSequence, OverflowKind) {
  try {
    majorant_euclidean(1.0, 1.0, 65);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
}

TEST(MajorantEuclidean, FirstTerms) {
  for (double M : {0.5, 1.0, 2.0}) {
    for (double N : {0.5, 1.0, 2.0}) {
      const MajorantSeq s = majorant_euclidean(M, N, 2);
      EXPECT_DOUBLE_EQ(s.a[0], M);
      EXPECT_NEAR(s.a[1], std::pow(M, 4) * N, 1e-13 * std::pow(M, 4) * N);
    }
  }
  const MajorantSeq one = majorant_euclidean(1.0, 1.0, 3);
  EXPECT_DOUBLE_EQ(one.b[2], 27.0);
  EXPECT_DOUBLE_EQ(one.b[3], 12847.0);
}

TEST(MajorantEuclidean, SatisfiesQuadratic) {
  for (double M : {0.5, 1.0, 2.0}) {
    for (double N : {0.5, 1.0, 2.0}) {
      const MajorantSeq s = majorant_euclidean(M, N, 12);
      for (const auto& [value, scale] : quadratic_coefficients(M, N, s.b, 11)) {
        EXPECT_LE(std::abs(value), 1e-9 * scale) << "M=" << M << " N=" << N;
      }
    }
  }
}

TEST(MajorantEuclidean, TOfA) {
  for (double M : {0.5, 1.0, 2.0}) {
    for (double N : {0.5, 1.0, 2.0}) {
      EXPECT_EQ(euclidean_t_of_a(M, N, M), 0.0);
      // The real domain of t(a) above M can be narrower than double spacing
      // around M itself, so differentiate in the offset d = a - M.
      const double d0 = euclidean_radicand_offset(M, N).value_or(1e-3);
      const double h = std::min(1e-9, d0 * 1e-4);
      const double slope = (euclidean_t_of_offset(M, N, h) - euclidean_t_of_offset(M, N, -h)) / (2 * h);
      EXPECT_NEAR(slope * std::pow(M, 4) * N, 1.0, 1e-6) << "M=" << M << " N=" << N;
    }
  }
}

TEST(MajorantEuclidean, CompositionInvertsT) {
  const MajorantSeq s = majorant_euclidean(1.0, 1.0, 60);
  const RadiusEstimate r = radius_estimate(s);
  ASSERT_TRUE(r.value.has_value());
  for (double frac : {0.1, 0.3, 0.5}) {
    const double t = frac * *r.value;
    double a = 0.0;
    for (int m = s.order(); m >= 0; --m) a = a * t + s.b[m];
    EXPECT_NEAR(euclidean_t_of_a(1.0, 1.0, a), t, 1e-8 * std::max(1.0, t));
    EXPECT_NEAR(euclidean_quadratic(1.0, 1.0, a, t), 0.0, 1e-9);
  }
}

TEST(MajorantEuclidean, RadiusEstimates) {
  const RadiusEstimate r = radius_estimate(majorant_euclidean(1.0, 1.0, 60));
  ASSERT_TRUE(r.closed_form && r.ratio_test);
  EXPECT_GT(*r.closed_form, 0.0);
  EXPECT_LT(*r.closed_form, *r.ratio_test * 1.2);
}

TEST(MajorantFitN, RecoversN) {
  for (auto geo : {Geometry::Isotropic, Geometry::Euclidean}) {
    const MajorantSeq s = geo == Geometry::Isotropic ? majorant_isotropic(0.7, 1.9, 6) : majorant_euclidean(0.7, 1.9, 6);
    EXPECT_NEAR(fit_N(geo, s.a), 1.9, 1e-12);
  }
}
