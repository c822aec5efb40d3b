#include "crpc/approx2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "crpc/error.hpp"

namespace crpc {

namespace {

constexpr int kCircleSamples = 512;
constexpr int kMaxSeriesDegree = 4096;
constexpr double kClusterTol = 1e-4;

double circle_mismatch(const ComplexPoly& hp, const ComplexPoly& g2) {
  double worst = 0.0;
  for (int k = 0; k < kCircleSamples; ++k) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * k / kCircleSamples);
    const cplx v = hp(w);
    worst = std::max(worst, std::abs(v * v - g2(w)));
  }
  return worst;
}

double circle_max(const ComplexPoly& p) {
  double m = 0.0;
  for (int k = 0; k < kCircleSamples; ++k) {
    m = std::max(m, std::abs(p(std::polar(1.0, 2.0 * std::numbers::pi * k / kCircleSamples))));
  }
  return m;
}

// Power-series square root of q about 0 (q(0) != 0), first n + 1 coefficients.
std::vector<cplx> series_sqrt(const std::vector<cplx>& q, int n) {
  std::vector<cplx> s(n + 1);
  s[0] = std::sqrt(q[0]);
  for (int k = 1; k <= n; ++k) {
    cplx acc = k < static_cast<int>(q.size()) ? q[k] : cplx{};
    for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
    s[k] = acc / (2.0 * s[0]);
  }
  return s;
}

// Exact square root when p is the square of a polynomial (relative tol), else empty.
std::optional<ComplexPoly> poly_sqrt(const ComplexPoly& p, double tol) {
  const int d = p.degree();
  if (d < 0 || d % 2 != 0) return std::nullopt;
  // Square root of the reversed polynomial: its constant term is the leading coefficient.
  std::vector<cplx> rev(p.coeffs().rbegin(), p.coeffs().rend());
  auto s = series_sqrt(rev, d / 2);
  std::reverse(s.begin(), s.end());
  ComplexPoly cand(s);
  const ComplexPoly diff = cand * cand - p;
  double scale = 0.0, err = 0.0;
  for (const cplx& c : p.coeffs()) scale = std::max(scale, std::abs(c));
  for (const cplx& c : diff.coeffs()) err = std::max(err, std::abs(c));
  if (err > tol * scale) return std::nullopt;
  return cand;
}

ComplexPoly from_roots(cplx lead, const std::vector<cplx>& roots) {
  ComplexPoly p{lead};
  for (const cplx& z : roots) p = p * ComplexPoly{-z, 1.0};
  return p;
}

}  // namespace

double wirtinger_t(double t) { return t / std::sqrt(4.0 + t * t); }

double isotropic_t(double t_wirtinger) {
  if (!(std::abs(t_wirtinger) < 1.0)) fail(ErrorKind::ParamOutOfRange, "Wirtinger t must satisfy |t| < 1");
  return 2.0 * t_wirtinger / std::sqrt(1.0 - t_wirtinger * t_wirtinger);
}

Approx2Pipeline pipeline_from_hprime(const ComplexPoly& hprime) {
  Approx2Pipeline p;
  p.hprime = hprime;
  p.h = hprime.integral();
  p.g = (hprime * hprime).integral().integral();
  p.route = "hprime";
  return p;
}

Approx2Pipeline pipeline_from_g(const ComplexPoly& g, double tol) {
  const ComplexPoly g2 = g.derivative().derivative();
  Approx2Pipeline p;
  p.g = g;
  if (g2.is_zero()) {
    p.route = "zero";
    return p;
  }
  const double scale = std::max(1.0, circle_max(g2));
  if (auto s = poly_sqrt(g2, 1e-13)) {
    p.hprime = *s;
    p.route = "perfect-square";
  } else {
    // Zeros in the closed disk must pair up; factor them out of g''.
    std::vector<cplx> roots = g2.roots();
    std::vector<cplx> outside, half;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      std::vector<cplx> cluster{roots[i]};
      used[i] = true;
      for (std::size_t j = i + 1; j < roots.size(); ++j) {
        if (!used[j] && std::abs(roots[j] - roots[i]) < kClusterTol * std::max(1.0, std::abs(roots[i]))) {
          cluster.push_back(roots[j]);
          used[j] = true;
        }
      }
      cplx centre{};
      for (const cplx& z : cluster) centre += z;
      centre /= static_cast<double>(cluster.size());
      if (std::abs(centre) <= 1.0 + 1e-9) {
        if (cluster.size() % 2 != 0) {
          std::ostringstream msg;
          msg << "g'' = " << g2.to_string() << " has a zero of multiplicity " << cluster.size()
              << " at " << centre << " in the closed disk; sqrt(g'') has no continuous branch";
          fail(ErrorKind::NoContinuousBranch, msg.str());
        }
        for (std::size_t k = 0; k < cluster.size() / 2; ++k) half.push_back(centre);
      } else {
        outside.insert(outside.end(), cluster.begin(), cluster.end());
      }
    }
    const cplx lead = g2.coeffs().back();
    const ComplexPoly q = from_roots(lead, outside);
    const ComplexPoly paired = from_roots(1.0, half);
    // Degree 2 deg g first, doubled until the branch is accurate on the circle.
    int n = std::max(2 * std::max(g.degree(), 1), 4);
    for (;;) {
      const ComplexPoly hp = paired * ComplexPoly(series_sqrt(q.coeffs(), n));
      const double mis = circle_mismatch(hp, g2);
      if (mis < tol * scale) {
        p.hprime = hp;
        p.series_degree = n;
        break;
      }
      if (n >= kMaxSeriesDegree) {
        std::ostringstream msg;
        msg << "series square root of g'' not within " << tol << " on the unit circle at degree "
            << n << " (mismatch " << mis << "); a zero of g'' is too close to the circle";
        fail(ErrorKind::NoConvergence, msg.str());
      }
      n *= 2;
    }
    p.route = "series";
  }
  p.h = p.hprime.integral();
  p.validation_residual = circle_mismatch(p.hprime, g2);
  if (p.validation_residual > tol * scale) {
    fail(ErrorKind::NoContinuousBranch, "square root of g'' failed validation on the unit circle");
  }
  return p;
}

double approx2_eval(const Approx2Pipeline& p, cplx w, double t, bool flat_reg) {
  const cplx h = p.h(w);
  double f = 2.0 * p.g(w).real() + std::norm(h) * t;
  if (t == 0.0) return f;
  const double ahp = std::abs(p.hprime(w));
  const double re_h2 = (h * h).real();
  if (flat_reg) {
    f += re_h2 * std::log(ahp + std::abs(t)) * t * t;
  } else if (ahp < 1e-300) {
    // Re(h^2) log|h'| tends to 0 at a zero of h' that h shares.
    if (h != cplx{}) {
      std::ostringstream msg;
      msg << "h'(" << w << ") = 0 with h != 0: log|h'| is singular (use flat regularization)";
      fail(ErrorKind::LogSingularity, msg.str());
    }
  } else {
    f += re_h2 * std::log(ahp) * t * t;
  }
  return f;
}

ScalarField approx2_field(const Approx2Pipeline& p, const PolarGrid& grid, double t,
                          bool flat_reg) {
  return sample([&](double x, double y) { return approx2_eval(p, cplx(x, y), t, flat_reg); }, grid);
}

Approx2Terms approx2_terms(const Approx2Pipeline& p, const PolarGrid& grid) {
  auto f0 = sample([&](double x, double y) { return 2.0 * p.g(cplx(x, y)).real(); }, grid);
  auto f1 = sample([&](double x, double y) { return std::norm(p.h(cplx(x, y))); }, grid);
  auto f2 = sample(
      [&](double x, double y) {
        const cplx w(x, y), h = p.h(w);
        const double ahp = std::abs(p.hprime(w));
        if (ahp < 1e-300) {
          if (h != cplx{}) fail(ErrorKind::LogSingularity, "h' vanishes where h does not");
          return 0.0;
        }
        return 2.0 * (h * h).real() * std::log(ahp);
      },
      grid);
  return {std::move(f0), std::move(f1), std::move(f2)};
}

Residual approx2_residual(const ScalarField& f, double t) {
  const DerivativeBundle d = cartesian_derivatives(f);
  const auto xx = d.f_xx.values(), xy = d.f_xy.values(), yy = d.f_yy.values();
  std::vector<double> out(xx.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.25 * (xx[i] + yy[i]) - 0.25 * t * std::hypot(xx[i] - yy[i], 2.0 * xy[i]);
  }
  ScalarField field(f.grid(), std::move(out));
  const double sup = interior_sup(field);
  return {std::move(field), sup};
}

ResidualOrder approx2_residual_order(const Approx2Pipeline& p, const PolarGrid& grid,
                                     const std::vector<double>& ts, bool flat_reg) {
  ResidualOrder out;
  for (double t : ts) {
    out.t.push_back(t);
    out.sup.push_back(approx2_residual(approx2_field(p, grid, t, flat_reg), t).sup);
  }
  out.slope = loglog_slope(out.t, out.sup);
  return out;
}

}  // namespace crpc
