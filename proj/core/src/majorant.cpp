#include "crpc/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "crpc/error.hpp"

namespace crpc {

namespace {

using real = long double;
constexpr real kNegInf = -std::numeric_limits<real>::infinity();

void check_inputs(double M, double N, int order, bool log_space) {
  if (!(M > 0.0) || !(N > 0.0)) fail(ErrorKind::ConfigError, "majorant needs M > 0 and N > 0");
  if (order < 0) fail(ErrorKind::ConfigError, "majorant order must be non-negative");
  if (!log_space && order > kMaxLinearOrder) {
    fail(ErrorKind::Overflow, "order " + std::to_string(order) +
                                  " exceeds the linear-mode limit; use log-space mode");
  }
}

real log_add(real x, real y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const real hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

// Arithmetic on either plain values or logarithms, so one recursion serves both modes.
struct Linear {
  static real zero() { return 0; }
  static real mul(real x, real y) { return x * y; }
  static real add(real x, real y) { return x + y; }
  static real scale(real x, real s) { return x * s; }
  static real from(real v) { return v; }
};
struct Log {
  static real zero() { return kNegInf; }
  static real mul(real x, real y) { return (x == kNegInf || y == kNegInf) ? kNegInf : x + y; }
  static real add(real x, real y) { return log_add(x, y); }
  static real scale(real x, real s) { return x == kNegInf ? x : x + std::log(s); }
  static real from(real v) { return std::log(v); }
};

// Coefficient n of the Cauchy product x * y (both truncated to what they hold).
template <class A>
real conv_at(const std::vector<real>& x, const std::vector<real>& y, int n) {
  real acc = A::zero();
  for (int i = 0; i <= n; ++i) {
    if (i >= static_cast<int>(x.size()) || n - i >= static_cast<int>(y.size())) continue;
    acc = A::add(acc, A::mul(x[i], y[n - i]));
  }
  return acc;
}

template <class A>
std::vector<real> power(const std::vector<real>& b, int k, int len) {
  std::vector<real> out(len, A::zero());
  out[0] = A::from(1);
  for (int p = 0; p < k; ++p) {
    std::vector<real> next(len);
    for (int n = 0; n < len; ++n) next[n] = conv_at<A>(out, b, n);
    out = std::move(next);
  }
  return out;
}

template <class A>
std::vector<real> iso_sequence(real M, real N, int order) {
  std::vector<real> b{A::from(M)};
  for (int m = 1; m <= order; ++m) {
    real acc = A::zero();
    for (int r = 0; r <= m - 1; ++r) acc = A::add(acc, A::mul(b[r], b[m - 1 - r]));
    for (int r = 2; r <= m - 1; ++r) acc = A::add(acc, A::mul(b[r], b[m + 1 - r]));
    b.push_back(A::scale(acc, N));
  }
  return b;
}

template <class A>
std::vector<real> euc_sequence(real M, real N, int order) {
  std::vector<real> b{A::from(M)};
  for (int m = 1; m <= order; ++m) {
    // b holds indices < m here, which is exactly the truncation the recursion needs.
    const auto b3 = power<A>(b, 3, m + 1);
    const auto b4 = power<A>(b, 4, m);
    const auto b6 = power<A>(b, 6, m + 2);
    const real acc = A::add(A::add(b3[m], b4[m - 1]), b6[m + 1]);
    b.push_back(A::scale(acc, N));
  }
  return b;
}

MajorantSeq finish(MajorantSeq seq, const std::vector<real>& b) {
  real log_fact = 0;
  for (int m = 0; m < static_cast<int>(b.size()); ++m) {
    if (m > 0) log_fact += std::log(static_cast<real>(m));
    if (seq.log_space) {
      seq.b.push_back(static_cast<double>(b[m]));
      seq.log_a.push_back(static_cast<double>(b[m] + log_fact));
    } else {
      const real a = b[m] * std::exp(log_fact);
      if (!std::isfinite(static_cast<double>(a)) || !std::isfinite(static_cast<double>(b[m]))) {
        fail(ErrorKind::Overflow,
             "a^(" + std::to_string(m) + ") overflows double; use log-space mode");
      }
      seq.b.push_back(static_cast<double>(b[m]));
      seq.a.push_back(static_cast<double>(a));
      seq.log_a.push_back(static_cast<double>(std::log(b[m]) + log_fact));
    }
  }
  seq.radius = radius_estimate(seq).value;
  return seq;
}

// Everything below is written in the offset d = a - M so that the narrow
// real domain of t(a) near a = M stays resolvable.
real euc_p(real M, real N, real d) { return 1 - d * (d + 3 * M) * N + 30 * std::pow(M, 8) * N * N; }

real euc_radicand(real M, real N, real d) {
  const real a = M + d;
  const real p = euc_p(M, N, d);
  const real q1 = std::pow(a, 4) + 15 * std::pow(M, 12) * N * N;
  const real q2 = a * a * a * a + 2 * a * a * a * M + 3 * a * a * M * M + 4 * a * M * M * M +
                  5 * M * M * M * M;
  return p * p - 4 * N * N * q1 * q2;
}

real euc_t_plus(real M, real N, real d) {
  const real R = euc_radicand(M, N, d);
  const real den = 2 * (std::pow(M + d, 4) * N + 15 * std::pow(M, 12) * N * N * N);
  return d * (euc_p(M, N, d) + std::sqrt(std::max(R, real(0)))) / den;
}

// First offset d > 0 where the radicand of t(a) vanishes.
std::optional<real> euc_radicand_root(real M, real N) {
  real lo = 0, step = 1e-30L;
  for (int i = 0; i < 400; ++i) {
    const real hi = lo + step;
    if (euc_radicand(M, N, hi) <= 0) {
      boost::math::tools::eps_tolerance<real> tol(60);
      std::uintmax_t it = 400;
      auto [x0, x1] = boost::math::tools::bisect(
          [&](real d) { return euc_radicand(M, N, d); }, lo, hi, tol, it);
      return (x0 + x1) / 2;
    }
    lo = hi;
    step *= 1.5L;
  }
  return std::nullopt;
}

}  // namespace

MajorantSeq majorant_isotropic(double M, double N, int order, bool log_space) {
  check_inputs(M, N, order, log_space);
  MajorantSeq seq{M, N, Geometry::Isotropic, log_space, {}, {}, {}, std::nullopt};
  return finish(seq, log_space ? iso_sequence<Log>(M, N, order) : iso_sequence<Linear>(M, N, order));
}

MajorantSeq majorant_euclidean(double M, double N, int order, bool log_space) {
  check_inputs(M, N, order, log_space);
  MajorantSeq seq{M, N, Geometry::Euclidean, log_space, {}, {}, {}, std::nullopt};
  return finish(seq, log_space ? euc_sequence<Log>(M, N, order) : euc_sequence<Linear>(M, N, order));
}

double majorant_closed_form_isotropic(double M, double N, double t) {
  const double rad = 1.0 / (4 * N * N) - t * (2 * M * M * M * N + M / N) - t * t * std::pow(M, 4) * N * N;
  if (rad < 0.0) {
    std::ostringstream msg;
    msg << "t = " << t << " is outside the domain of the closed form (radicand " << rad << ")";
    fail(ErrorKind::OutsideRadius, msg.str());
  }
  return (M + t * (M * M * N + 1.0 / (2 * N)) - t * std::sqrt(rad)) / (t * t + 1.0);
}

double isotropic_closed_form_radius(double M, double N) {
  // t^2 A + t B - C = 0 with A, B, C > 0; the positive root.
  const double A = std::pow(M, 4) * N * N, B = 2 * M * M * M * N + M / N, C = 1.0 / (4 * N * N);
  return 2 * C / (B + std::sqrt(B * B + 4 * A * C));
}

double euclidean_t_of_offset(double M, double N, double d) {
  const real R = euc_radicand(M, N, d);
  if (R < 0) {
    std::ostringstream msg;
    msg << "a = M + " << d << " is outside the domain of t(a) (radicand " << static_cast<double>(R)
        << ")";
    fail(ErrorKind::OutsideRadius, msg.str());
  }
  return static_cast<double>(euc_t_plus(M, N, d));
}

double euclidean_t_of_a(double M, double N, double a) {
  return euclidean_t_of_offset(M, N, a - M);
}

double euclidean_quadratic(double M, double N, double a, double t) {
  const real A = a, Mm = M, Nn = N, T = t;
  return static_cast<double>((std::pow(A, 4) * Nn + 15 * std::pow(Mm, 12) * Nn * Nn * Nn) * T * T -
                             T * (A - Mm) * euc_p(Mm, Nn, A - Mm) +
                             Nn * (std::pow(A, 6) - 6 * A * std::pow(Mm, 5) + 5 * std::pow(Mm, 6)));
}

std::optional<double> euclidean_radicand_offset(double M, double N) {
  if (auto d0 = euc_radicand_root(M, N)) return static_cast<double>(*d0);
  return std::nullopt;
}

RadiusEstimate radius_estimate(const MajorantSeq& seq) {
  RadiusEstimate out;
  if (seq.geometry == Geometry::Isotropic) {
    out.closed_form = isotropic_closed_form_radius(seq.M, seq.N);
  } else if (auto d0 = euc_radicand_root(seq.M, seq.N)) {
    // a(t) stops being analytic where t(a) turns back; before the radicand root
    // that is the maximum of t(a).
    const real M = seq.M, N = seq.N;
    auto [dmax, neg_t] = boost::math::tools::brent_find_minima(
        [&](real d) { return -euc_t_plus(M, N, d); }, real(0), *d0, 60);
    (void)dmax;
    out.closed_form = static_cast<double>(-neg_t);
  }
  const int n = seq.order();
  if (n >= 2) {
    // b_{n-1} / b_n from the logs, robust in both modes.
    const double lb1 = seq.log_space ? seq.b[n - 1] : std::log(seq.b[n - 1]);
    const double lb2 = seq.log_space ? seq.b[n] : std::log(seq.b[n]);
    out.ratio_test = std::exp(lb1 - lb2);
  }
  if (out.closed_form && out.ratio_test) {
    out.value = std::min(*out.closed_form, *out.ratio_test);
  } else if (out.closed_form) {
    out.value = out.closed_form;
  } else {
    out.value = out.ratio_test;
  }
  return out;
}

double fit_N(Geometry g, const std::vector<double>& norms, int max_m) {
  if (norms.size() < 2) fail(ErrorKind::ConfigError, "fit_N needs at least two norms");
  std::vector<real> b;
  real fact = 1;
  for (std::size_t m = 0; m < norms.size(); ++m) {
    if (m > 0) fact *= static_cast<real>(m);
    b.push_back(norms[m] / fact);
  }
  double best = 0.0;
  const int top = std::min<int>(max_m, static_cast<int>(norms.size()) - 1);
  for (int m = 1; m <= top; ++m) {
    real rhs = 0;
    if (g == Geometry::Isotropic) {
      for (int r = 0; r <= m - 1; ++r) rhs += b[r] * b[m - 1 - r];
      for (int r = 2; r <= m - 1; ++r) rhs += b[r] * b[m + 1 - r];
    } else {
      const std::vector<real> head(b.begin(), b.begin() + m);
      rhs = power<Linear>(head, 3, m + 1)[m] + power<Linear>(head, 4, m)[m - 1] +
            power<Linear>(head, 6, m + 2)[m + 1];
    }
    if (rhs > 0) best = std::max(best, static_cast<double>(b[m] / rhs));
  }
  return best;
}

}  // namespace crpc
