#pragma once

#include <string>
#include <vector>

#include "crpc/poisson.hpp"
#include "crpc/series_isotropic.hpp"

namespace crpc {

/// t-derivatives at t = 0 of one quantity, index m.
struct TSeries {
  std::string label;
  std::vector<ScalarField> terms;
};

/// sum_{r=0}^{m} C(m, r) A[r] B[m - r]. MissingTerm if either side is too short.
ScalarField leibniz_product(const TSeries& a, const TSeries& b, int m);

/// The t-series entering the normalized Euclidean H and K, up to `order`.
struct EuclideanTSeries {
  TSeries f_x, f_y, f_xx, f_xy, f_yy;
  TSeries one_plus_fx2, one_plus_fy2, fx_fy, W;  // 1+f_x^2, 1+f_y^2, f_x f_y, 1+f_x^2+f_y^2
  TSeries D;  // f_xy^2 - f_xx f_yy
  TSeries H;  // ((1+f_y^2) f_xx - 2 f_x f_y f_xy + (1+f_x^2) f_yy) / 2
  TSeries K;  // -W D
};

EuclideanTSeries build_tseries(const CoefficientSeries& s, int order);

/// H_r applied to u (r = 0 is the linearization of 2H at f^(0)).
ScalarField H_r_apply(int r, const EuclideanTSeries& ts, const DerivativeBundle& u);
ScalarField H_r_apply(int r, const CoefficientSeries& s, const ScalarField& u);

/// Coefficients of H_0 at the seed.
EllipticCoefficients h0_coefficients(const DerivativeBundle& seed);

/// Minimality tolerance on sup |2H^(0)|.
inline constexpr double kMinimalSeedTol = 1e-6;

/// Newton iteration on 2H(f) = 0 (H_0 is its linearization) keeping the
/// boundary trace of `f0`. Turns a sampled analytic minimal graph into an
/// exact minimal graph of the discrete operator.
struct PolishResult {
  ScalarField field;
  std::vector<double> history;  // interior sup |2H| before each step and at the end
};
PolishResult polish_minimal_graph(const ScalarField& f0, double tol = 1e-11, int max_iter = 20,
                                  const EllipticOptions& options = {});

CoefficientSeries seed_euclidean(const ScalarField& f0, SeedSpec spec = {},
                                 double minimal_tol = kMinimalSeedTol);
/// Scherk graph (log cos(s y) - log cos(s x)) / s, 0 < s < pi/2. With
/// `polish` the sampled graph is replaced by the discrete minimal graph with
/// the same boundary trace.
CoefficientSeries seed_scherk(const PolarGrid& grid, double scale = 1.0, bool polish = true,
                              double minimal_tol = kMinimalSeedTol);
ScalarField scherk_field(const PolarGrid& grid, double scale);

ScalarField rhs_euclidean(int m, const CoefficientSeries& s);
ScalarField rhs_euclidean(int m, const CoefficientSeries& s, const EuclideanTSeries& ts);
void extend_euclidean(CoefficientSeries& s, int order, const EllipticOptions& options = {});

/// (1+f_y^2) f_xx - 2 f_x f_y f_xy + (1+f_x^2) f_yy - t sqrt(W (f_xy^2 - f_xx f_yy)).
Residual residual_euclidean(const ScalarField& f, double t);

}  // namespace crpc
