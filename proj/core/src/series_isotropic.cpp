#include "crpc/series_isotropic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>

#include "crpc/error.hpp"
#include "crpc/poisson.hpp"
#include "crpc/series_euclidean.hpp"

namespace crpc {

std::string to_string(SeedSpec::Kind k) {
  switch (k) {
    case SeedSpec::Kind::Polynomial: return "polynomial";
    case SeedSpec::Kind::Scherk: return "scherk";
    case SeedSpec::Kind::Field: return "field";
  }
  return "field";
}

void CoefficientSeries::push(ScalarField coeff) {
  derivatives.push_back(cartesian_derivatives(coeff));
  coeffs.push_back(std::move(coeff));
}

CoefficientSeries CoefficientSeries::truncated(int order) const {
  CoefficientSeries out = *this;
  while (out.order() > order) {
    out.coeffs.pop_back();
    out.derivatives.pop_back();
  }
  return out;
}

namespace {

double binom(int n, int k) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(n),
                                                   static_cast<unsigned>(k));
}

ScalarField sqrt_minus_k0(const DerivativeBundle& d) {
  return (d.f_xy * d.f_xy - d.f_xx * d.f_yy).map([](double v) {
    return std::sqrt(std::max(v, 0.0));
  });
}

void check_flat(const ScalarField& sqrtK0) {
  const double mx = max_value(sqrtK0);
  const double mn = min_value(sqrtK0);
  if (!(mx > 0.0) || mn < kFlatPointTol * mx) {
    std::ostringstream msg;
    msg << "seed Hessian nearly degenerate: min sqrt(-K) = " << mn << ", max = " << mx;
    fail(ErrorKind::FlatPointDetected, msg.str());
  }
}

}  // namespace

CoefficientSeries seed_isotropic(const ComplexPoly& g, const PolarGrid& grid) {
  const ComplexPoly g2 = g.derivative().derivative();
  if (g2.is_zero()) fail(ErrorKind::FlatPointDetected, "g'' vanishes identically");
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double r = i / 200.0;
    for (int k = 0; k < 512; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 512;
      const double v = std::abs(g2(std::polar(r, th)));
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  for (const cplx& z : g2.roots()) {
    if (std::abs(z) <= 1.0 + 1e-12) mn = 0.0;
  }
  if (mn < kFlatPointTol * mx) {
    std::ostringstream msg;
    msg << "g'' = " << g2.to_string() << " nearly vanishes on the closed disk (min |g''| = " << mn
        << ", max = " << mx << ")";
    fail(ErrorKind::FlatPointDetected, msg.str());
  }
  const ScalarField f0 = sample([&](double x, double y) { return 2.0 * g(cplx(x, y)).real(); }, grid);
  SeedSpec spec{SeedSpec::Kind::Polynomial, g, 1.0, "2 Re g, g = " + g.to_string()};
  return seed_isotropic(f0, spec);
}

CoefficientSeries seed_isotropic(const ScalarField& f0, SeedSpec spec) {
  DerivativeBundle d = cartesian_derivatives(f0);
  ScalarField sk = sqrt_minus_k0(d);
  check_flat(sk);
  CoefficientSeries s{Geometry::Isotropic, f0.grid(), std::move(spec), {}, {}, std::move(sk)};
  s.coeffs.push_back(f0);
  s.derivatives.push_back(std::move(d));
  return s;
}

ScalarField rhs_isotropic(int m, const CoefficientSeries& s) {
  if (m < 1) fail(ErrorKind::MissingCoefficient, "order must be positive");
  if (static_cast<int>(s.coeffs.size()) < m) {
    fail(ErrorKind::MissingCoefficient, "order " + std::to_string(m) + " needs f^(0.." +
                                            std::to_string(m - 1) + ")");
  }
  const auto& d = s.derivatives;
  ScalarField num(s.grid);
  for (int r = 0; r <= m - 1; ++r) {
    const auto& a = d[r];
    const auto& b = d[m - 1 - r];
    num += binom(m - 1, r) * (a.f_xy * b.f_xy - a.f_xx * b.f_yy);
  }
  num *= static_cast<double>(m);
  for (int r = 2; r <= m - 1; ++r) {
    const auto& a = d[r];
    const auto& b = d[m - r + 1];
    num -= (binom(m + 1, r) / (m + 1)) * ((a.f_xx + a.f_yy) * (b.f_xx + b.f_yy));
  }
  const double two = (m == 1) ? 1.0 : 2.0;
  const auto sk = s.sqrtK0.values();
  std::vector<double> out(num.values().begin(), num.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= two * sk[i];
  return ScalarField(s.grid, std::move(out));
}

void extend(CoefficientSeries& s, int order) {
  if (s.geometry != Geometry::Isotropic) {
    fail(ErrorKind::ConfigError, "extend() is the isotropic engine; use extend_euclidean()");
  }
  for (int m = static_cast<int>(s.coeffs.size()); m <= order; ++m) {
    s.push(solve_poisson(rhs_isotropic(m, s)));
  }
}

ScalarField sum_series(const CoefficientSeries& s, double t) {
  ScalarField acc = s.coeffs.back();
  for (int m = s.order() - 1; m >= 0; --m) {
    acc *= t / (m + 1);
    acc += s.coeffs[m];
  }
  return acc;
}

ScalarField sum_series(const CoefficientSeries& s, double t, std::vector<std::string>& warnings,
                       double safety) {
  if (auto rho = empirical_radius(s); rho && std::abs(t) > safety * *rho) {
    std::ostringstream msg;
    msg << "|t| = " << std::abs(t) << " exceeds " << safety << " x empirical radius " << *rho;
    warnings.push_back(msg.str());
  }
  return sum_series(s, t);
}

std::optional<double> empirical_radius(const CoefficientSeries& s) {
  std::vector<std::pair<int, double>> norms;
  double fact = 1.0;
  double scale = 0.0;
  for (int m = 0; m <= s.order(); ++m) {
    if (m > 0) fact *= m;
    const double v = sup_norm(s.coeffs[m]) / fact;
    scale = std::max(scale, v);
    norms.emplace_back(m, v);
  }
  std::vector<std::pair<int, double>> kept;
  for (auto& [m, v] : norms) {
    if (m > 0 && v > 1e-12 * scale) kept.emplace_back(m, v);
  }
  if (kept.size() < 2) return std::nullopt;
  const auto [m1, v1] = kept[kept.size() - 2];
  const auto [m2, v2] = kept.back();
  return std::pow(v1 / v2, 1.0 / (m2 - m1));
}

Residual residual_isotropic(const ScalarField& f, double t) {
  const DerivativeBundle d = cartesian_derivatives(f);
  const PolarGrid& g = f.grid();
  const std::size_t n_int = static_cast<std::size_t>(g.n_r()) * g.n_theta();
  std::vector<double> out(g.storage_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double fxx = d.f_xx.values()[i], fxy = d.f_xy.values()[i], fyy = d.f_yy.values()[i];
    const double rad = fxy * fxy - fxx * fyy;
    if (rad < 0.0 && i < n_int && t != 0.0) {
      std::ostringstream msg;
      msg << "K = " << -rad << " > 0 at node (" << i / g.n_theta() << ", " << i % g.n_theta()
          << ")";
      fail(ErrorKind::NotNegativeK, msg.str());
    }
    out[i] = fxx + fyy - t * std::sqrt(std::max(rad, 0.0));
  }
  ScalarField field(g, std::move(out));
  const double sup = interior_sup(field);
  return {std::move(field), sup};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(std::abs(x[i])), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ResidualOrder residual_order(const CoefficientSeries& s, const std::vector<double>& ts) {
  ResidualOrder out;
  for (double t : ts) {
    const ScalarField f = sum_series(s, t);
    const Residual r = s.geometry == Geometry::Isotropic ? residual_isotropic(f, t)
                                                         : residual_euclidean(f, t);
    out.t.push_back(t);
    out.sup.push_back(r.sup);
  }
  out.slope = loglog_slope(out.t, out.sup);
  return out;
}

}  // namespace crpc
