#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crpc/complex_poly.hpp"
#include "crpc/curvature.hpp"
#include "crpc/grid.hpp"

namespace crpc {

/// How f^(0) was produced.
struct SeedSpec {
  enum class Kind { Polynomial, Scherk, Field };
  Kind kind = Kind::Field;
  ComplexPoly g;       // Polynomial: f^(0) = 2 Re g
  double scale = 1.0;  // Scherk: f^(0) = (log cos(s y) - log cos(s x)) / s
  std::string description;
};

std::string to_string(SeedSpec::Kind k);

/// Taylor coefficients f^(0..M) of a one-parameter family on a fixed grid.
struct CoefficientSeries {
  Geometry geometry = Geometry::Isotropic;
  PolarGrid grid;
  SeedSpec seed;
  std::vector<ScalarField> coeffs;
  std::vector<DerivativeBundle> derivatives;  // one per coefficient
  ScalarField sqrtK0;                         // sqrt(-K^(0)), positive at every node

  int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  void push(ScalarField coeff);
  // Copy keeping coefficients 0..order.
  CoefficientSeries truncated(int order) const;
};

struct Residual {
  ScalarField field;
  double sup = 0.0;  // over rings 0..n_r-1
};

/// Relative tolerance for flat points: min |g''| < tol * max |g''| is rejected.
inline constexpr double kFlatPointTol = 1e-8;

/// Seed f^(0) = 2 Re g. FlatPointDetected if g'' nearly vanishes on the closed
/// disk (dense sample plus the roots of g'').
CoefficientSeries seed_isotropic(const ComplexPoly& g, const PolarGrid& grid);
/// Seed from an arbitrary sampled harmonic field (e.g. a harmonic extension).
CoefficientSeries seed_isotropic(const ScalarField& f0, SeedSpec spec = {});

ScalarField rhs_isotropic(int m, const CoefficientSeries& s);
void extend(CoefficientSeries& s, int order);

/// sum_m f^(m) t^m / m!  (Horner in t).
ScalarField sum_series(const CoefficientSeries& s, double t);
/// Same, appending a note to `warnings` when |t| exceeds safety * empirical radius.
ScalarField sum_series(const CoefficientSeries& s, double t, std::vector<std::string>& warnings,
                       double safety = 0.5);

/// Ratio test on ||f^(m)||_inf / m! over the last two coefficients that are
/// not negligible; nullopt when fewer than two are available.
std::optional<double> empirical_radius(const CoefficientSeries& s);

/// f_xx + f_yy - t sqrt(f_xy^2 - f_xx f_yy); NotNegativeK if the radicand is negative.
Residual residual_isotropic(const ScalarField& f, double t);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ResidualOrder {
  std::vector<double> t;
  std::vector<double> sup;
  double slope = 0.0;
};

ResidualOrder residual_order(const CoefficientSeries& s, const std::vector<double>& ts);

}  // namespace crpc
