#pragma once

#include <string>
#include <vector>

#include "crpc/complex_poly.hpp"
#include "crpc/grid.hpp"
#include "crpc/series_isotropic.hpp"

namespace crpc {

/// g, h with h'^2 = g'' and how h was obtained.
struct Approx2Pipeline {
  ComplexPoly g, h, hprime;
  std::string route;                 // "hprime", "zero", "perfect-square" or "series"
  int series_degree = 0;             // truncation degree of the series square root
  double validation_residual = 0.0;  // max |h'^2 - g''| on the unit circle
};

/// h = int h' and g = int int h'^2, zero constants.
Approx2Pipeline pipeline_from_hprime(const ComplexPoly& hprime);

/// Continuous branch h' = sqrt(g'') on the closed disk. Exact polynomial square
/// root when g'' is a square; otherwise even-multiplicity zeros in the disk are
/// factored out and the rest is expanded as a power series, validated on the
/// unit circle. NoContinuousBranch for a zero of odd multiplicity in the disk.
Approx2Pipeline pipeline_from_g(const ComplexPoly& g, double tol = 1e-10);

/// 2 Re g + |h|^2 t + Re(h^2) log|h'| t^2, with log(|h'| + t) when flat_reg.
/// LogSingularity where h' vanishes (unless h does too; the term then tends to 0).
double approx2_eval(const Approx2Pipeline& p, cplx w, double t, bool flat_reg = false);

ScalarField approx2_field(const Approx2Pipeline& p, const PolarGrid& grid, double t,
                          bool flat_reg = false);

/// t-derivatives at 0: f^(1) = |h|^2, f^(2) = 2 Re(h^2) log|h'|.
struct Approx2Terms {
  ScalarField f0, f1, f2;
};
Approx2Terms approx2_terms(const Approx2Pipeline& p, const PolarGrid& grid);

/// (f_xx + f_yy)/4 - t sqrt((f_xx - f_yy)^2 + 4 f_xy^2)/4, i.e. f_ww' - t |f_ww|.
Residual approx2_residual(const ScalarField& f, double t);

ResidualOrder approx2_residual_order(const Approx2Pipeline& p, const PolarGrid& grid,
                                     const std::vector<double>& ts, bool flat_reg = false);

/// The parameter of the Wirtinger form for a given isotropic t: t/sqrt(4 + t^2).
double wirtinger_t(double t);
/// Inverse of wirtinger_t: 2 t / sqrt(1 - t^2), |t| < 1.
double isotropic_t(double t_wirtinger);

}  // namespace crpc
