#include "crpc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "crpc/error.hpp"
#include "grid_operators.hpp"

namespace crpc {
namespace detail {

std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x,
                                                  int max_order) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

RadialStencil make_stencil(int j, int n_r, double h) {
  RadialStencil st;
  if (j <= n_r - 2) {
    for (int s = j - 2; s <= j + 2; ++s) st.nodes.push_back(s);
  } else {
    for (int s = n_r - 5; s <= n_r; ++s) st.nodes.push_back(s);
  }
  std::vector<double> x;
  for (int s : st.nodes) x.push_back(s * h);
  const double x0 = j * h;
  auto w = fornberg_weights(x0, x, 2);
  st.d2 = w[2];
  if (j <= n_r - 2) {
    st.d1 = w[1];
  } else {
    // 4th-order first derivative from the last five nodes only.
    std::vector<double> x5(x.begin() + 1, x.end());
    auto w5 = fornberg_weights(x0, x5, 1);
    st.d1.assign(st.nodes.size(), 0.0);
    for (std::size_t i = 0; i < x5.size(); ++i) st.d1[i + 1] = w5[1][i];
  }
  return st;
}

void build_fourier(GridOperators& g) {
  const int n = g.n_theta;
  const int half = n / 2;
  g.fourier_fwd.setZero(n, n);
  g.fourier_inv.setZero(n, n);
  g.coeff_mode.assign(n, 0);
  for (int l = 0; l < n; ++l) {
    const double th = 2.0 * std::numbers::pi * l / n;
    g.fourier_fwd(0, l) = 1.0 / n;
    g.fourier_inv(l, 0) = 1.0;
    for (int k = 1; k < half; ++k) {
      g.fourier_fwd(2 * k - 1, l) = 2.0 / n * std::cos(k * th);
      g.fourier_fwd(2 * k, l) = 2.0 / n * std::sin(k * th);
      g.fourier_inv(l, 2 * k - 1) = std::cos(k * th);
      g.fourier_inv(l, 2 * k) = std::sin(k * th);
    }
    const double alt = (l % 2 == 0) ? 1.0 : -1.0;
    g.fourier_fwd(n - 1, l) = alt / n;
    g.fourier_inv(l, n - 1) = alt;
  }
  for (int k = 1; k < half; ++k) {
    g.coeff_mode[2 * k - 1] = k;
    g.coeff_mode[2 * k] = k;
  }
  g.coeff_mode[n - 1] = half;

  // Periodic spectral differentiation matrices in closed form (the Nyquist
  // mode has no first derivative on the nodes). Summing the trigonometric
  // products instead loses about n digits' worth of accuracy near the pole.
  g.dtheta.setZero(n, n);
  g.dtheta2.setZero(n, n);
  const double step = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      if (i == l) {
        g.dtheta2(i, l) = -std::numbers::pi * std::numbers::pi / (3.0 * step * step) - 1.0 / 6.0;
        continue;
      }
      const double sign = ((i - l) % 2 == 0) ? 1.0 : -1.0;
      const double half_angle = (i - l) * step / 2.0;
      g.dtheta(i, l) = 0.5 * sign / std::tan(half_angle);
      g.dtheta2(i, l) = -0.5 * sign / (std::sin(half_angle) * std::sin(half_angle));
    }
  }
  // Rows of exact zero sum so constants differentiate to zero bit-exactly.
  for (int i = 0; i < n; ++i) {
    g.dtheta(i, i) = 0.0;
    g.dtheta(i, i) = -g.dtheta.row(i).sum();
    g.dtheta2(i, i) = 0.0;
    g.dtheta2(i, i) = -g.dtheta2.row(i).sum();
  }
}

void build_mode_systems(GridOperators& g) {
  const int n_r = g.n_r;
  const double h = g.h;
  const int half = g.half();
  g.mode_lu.clear();
  g.mode_boundary_weight.clear();
  for (int k = 0; k <= half; ++k) {
    const int offset = (k == 0) ? 0 : 1;  // first unknown ring
    const int size = n_r - offset;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd bw = Eigen::VectorXd::Zero(size);
    const double parity = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0) {
      // Pole: Laplacian 4A of the quartic fit.
      a(0, 0) = -5.0 / (h * h);
      a(0, 1) = 16.0 / (3.0 * h * h);
      a(0, 2) = -1.0 / (3.0 * h * h);
    }
    for (int j = 1; j < n_r; ++j) {
      const int row = j - offset;
      const double r = j * h;
      const auto& st = g.radial[j];
      for (std::size_t i = 0; i < st.nodes.size(); ++i) {
        const int s = st.nodes[i];
        const double w = st.d2[i] + st.d1[i] / r;
        if (s == -1) {
          a(row, 1 - offset) += parity * w;
        } else if (s == 0) {
          if (k == 0) a(row, 0) += w;
        } else if (s == n_r) {
          bw(row) += w;
        } else {
          a(row, s - offset) += w;
        }
      }
      a(row, row) -= g.wavenumber_sq(k) / (r * r);
    }
    g.mode_lu.emplace_back(a);
    const double det_scale = a.cwiseAbs().maxCoeff();
    const auto& lu = g.mode_lu.back();
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(pivot_min > 1e-14 * det_scale)) {
      fail(ErrorKind::SingularMode, "radial system for wavenumber " + std::to_string(k) +
                                        " is singular");
    }
    g.mode_boundary_weight.push_back(bw);
  }
}

}  // namespace
}  // namespace detail

double PolarGrid::theta(int k) const noexcept {
  return 2.0 * std::numbers::pi * k / n_theta_;
}

PolarGrid make_polar_grid(int n_r, int n_theta) {
  if (n_theta % 2 != 0) {
    fail(ErrorKind::OddAngularCount, "n_theta = " + std::to_string(n_theta) + " must be even");
  }
  if (n_r < 8 || n_theta < 8) {
    fail(ErrorKind::GridTooSmall, "grid " + std::to_string(n_r) + "x" + std::to_string(n_theta) +
                                      " is below the 8x8 minimum");
  }
  auto ops = std::make_shared<detail::GridOperators>();
  ops->n_r = n_r;
  ops->n_theta = n_theta;
  ops->h = 1.0 / n_r;
  for (int k = 0; k < n_theta; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_theta;
    ops->cos_t.push_back(std::cos(th));
    ops->sin_t.push_back(std::sin(th));
  }
  detail::build_fourier(*ops);
  ops->radial.resize(n_r + 1);
  for (int j = 1; j <= n_r; ++j) ops->radial[j] = detail::make_stencil(j, n_r, ops->h);
  detail::build_mode_systems(*ops);
  return PolarGrid(n_r, n_theta, std::move(ops));
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(PolarGrid grid, double fill)
    : grid_(std::move(grid)), values_(grid_.storage_size(), fill) {}

ScalarField::ScalarField(PolarGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.storage_size()) {
    fail(ErrorKind::GridMismatch, "field has " + std::to_string(values_.size()) +
                                      " values, grid expects " +
                                      std::to_string(grid_.storage_size()));
  }
  for (int k = 1; k < grid_.n_theta(); ++k) {
    if (values_[k] != values_[0]) {
      fail(ErrorKind::GridMismatch, "pole aliases disagree");
    }
  }
}

ScalarField ScalarField::generate(const PolarGrid& grid,
                                  const std::function<double(int, int)>& fn) {
  ScalarField f(grid);
  const int nt = grid.n_theta();
  const double pole = fn(0, 0);
  std::fill(f.values_.begin(), f.values_.begin() + nt, pole);
  for (int j = 1; j <= grid.n_r(); ++j) {
    for (int k = 0; k < nt; ++k) f.values_[static_cast<std::size_t>(j) * nt + k] = fn(j, k);
  }
  return f;
}

ScalarField ScalarField::from_packed(const PolarGrid& grid, const Eigen::VectorXd& packed) {
  if (static_cast<std::size_t>(packed.size()) != grid.unknown_count()) {
    fail(ErrorKind::GridMismatch, "packed vector size does not match grid");
  }
  return generate(grid, [&](int j, int k) { return packed[grid.unknown_index(j, k)]; });
}

std::vector<double> ScalarField::boundary_values() const {
  auto b = ring(grid_.n_r());
  return {b.begin(), b.end()};
}

Eigen::VectorXd ScalarField::packed() const {
  Eigen::VectorXd v(grid_.unknown_count());
  v[0] = values_[0];
  const std::size_t nt = grid_.n_theta();
  for (std::size_t i = nt; i < values_.size(); ++i) v[i - nt + 1] = values_[i];
  return v;
}

void ScalarField::check_same_grid(const ScalarField& o) const {
  if (!(grid_ == o.grid_)) fail(ErrorKind::GridMismatch, "fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  check_same_grid(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField ScalarField::map(const std::function<double(double)>& fn) const {
  ScalarField out(*this);
  for (double& v : out.values_) v = fn(v);
  return out;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator-(ScalarField a) { return a *= -1.0; }

ScalarField sample(const std::function<double(double, double)>& expr, const PolarGrid& grid) {
  const auto& ops = grid.ops();
  return ScalarField::generate(grid, [&](int j, int k) {
    const double r = grid.r(j);
    const double v = expr(r * ops.cos_t[k], r * ops.sin_t[k]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "expression is not finite at r=" << r << ", theta=" << grid.theta(k);
      fail(ErrorKind::NonFiniteSample, msg.str());
    }
    return v;
  });
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

using detail::GridOperators;
using detail::PoleFit;

// Ring-major matrix view (rows = rings 0..n_r, cols = angles).
using RingMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RingMatrix as_rings(const ScalarField& f) {
  const auto& g = f.grid();
  return Eigen::Map<const RingMatrix>(f.values().data(), g.n_r() + 1, g.n_theta());
}

PoleFit pole_fit(const GridOperators& ops, const RingMatrix& v) {
  const double h = ops.h;
  const Eigen::VectorXd c1 = ops.fourier_fwd * v.row(1).transpose();
  const Eigen::VectorXd c2 = ops.fourier_fwd * v.row(2).transpose();
  const double p = v(0, 0);
  // Ring coefficient of mode k on radius r: r^k (...) + r^(k+2) (...).
  const double a = (16.0 * (c1[0] - p) - (c2[0] - p)) / (12.0 * h * h);
  const double gx = (8.0 * c1[1] - c2[1]) / (6.0 * h);
  const double gy = (8.0 * c1[2] - c2[2]) / (6.0 * h);
  const double qc = (16.0 * c1[3] - c2[3]) / (12.0 * h * h);
  const double qs = (16.0 * c1[4] - c2[4]) / (12.0 * h * h);
  return {gx, gy, 2.0 * a + 2.0 * qc, 2.0 * qs, 2.0 * a - 2.0 * qc};
}

struct PolarDerivs {
  RingMatrix fr, frr, ft, ftt, frt;
};

PolarDerivs polar_derivatives(const GridOperators& ops, const RingMatrix& v, bool need_mixed) {
  const int n_r = ops.n_r;
  const int nt = ops.n_theta;
  PolarDerivs d;
  d.ft = RingMatrix::Zero(n_r + 1, nt);
  d.ftt = RingMatrix::Zero(n_r + 1, nt);
  d.fr = RingMatrix::Zero(n_r + 1, nt);
  d.frr = RingMatrix::Zero(n_r + 1, nt);
  for (int j = 1; j <= n_r; ++j) {
    d.ft.row(j) = (ops.dtheta * v.row(j).transpose()).transpose();
    d.ftt.row(j) = (ops.dtheta2 * v.row(j).transpose()).transpose();
  }
  if (need_mixed) d.frt = RingMatrix::Zero(n_r + 1, nt);
  for (int j = 1; j <= n_r; ++j) {
    const auto& st = ops.radial[j];
    for (int k = 0; k < nt; ++k) {
      double fr = 0.0, frr = 0.0, frt = 0.0;
      for (std::size_t i = 0; i < st.nodes.size(); ++i) {
        const int s = st.nodes[i];
        double val, tval;
        if (s == -1) {
          val = v(1, ops.reflected(k));
          tval = need_mixed ? d.ft(1, ops.reflected(k)) : 0.0;
        } else {
          val = v(s, k);
          tval = need_mixed ? d.ft(s, k) : 0.0;  // ft is zero on the pole row
        }
        fr += st.d1[i] * val;
        frr += st.d2[i] * val;
        frt += st.d1[i] * tval;
      }
      d.fr(j, k) = fr;
      d.frr(j, k) = frr;
      if (need_mixed) d.frt(j, k) = frt;
    }
  }
  return d;
}

ScalarField from_rings(const PolarGrid& grid, const RingMatrix& m) {
  std::vector<double> vals(m.data(), m.data() + m.size());
  return ScalarField(grid, std::move(vals));
}

}  // namespace

DerivativeBundle cartesian_derivatives(const ScalarField& f) {
  const auto& grid = f.grid();
  const auto& ops = grid.ops();
  const int n_r = grid.n_r();
  const int nt = grid.n_theta();
  const RingMatrix v = as_rings(f);
  const PolarDerivs d = polar_derivatives(ops, v, true);

  RingMatrix fx(n_r + 1, nt), fy(n_r + 1, nt), fxx(n_r + 1, nt), fxy(n_r + 1, nt),
      fyy(n_r + 1, nt);
  const PoleFit p = pole_fit(ops, v);
  fx.row(0).setConstant(p.f_x);
  fy.row(0).setConstant(p.f_y);
  fxx.row(0).setConstant(p.f_xx);
  fxy.row(0).setConstant(p.f_xy);
  fyy.row(0).setConstant(p.f_yy);

  for (int j = 1; j <= n_r; ++j) {
    const double r = grid.r(j);
    const double ir = 1.0 / r;
    const double ir2 = ir * ir;
    for (int k = 0; k < nt; ++k) {
      const double c = ops.cos_t[k], s = ops.sin_t[k];
      const double fr = d.fr(j, k), frr = d.frr(j, k), ft = d.ft(j, k), ftt = d.ftt(j, k),
                   frt = d.frt(j, k);
      fx(j, k) = c * fr - s * ir * ft;
      fy(j, k) = s * fr + c * ir * ft;
      fxx(j, k) = c * c * frr + s * s * ir * fr + s * s * ir2 * ftt - 2.0 * s * c * ir * frt +
                  2.0 * s * c * ir2 * ft;
      fyy(j, k) = s * s * frr + c * c * ir * fr + c * c * ir2 * ftt + 2.0 * s * c * ir * frt -
                  2.0 * s * c * ir2 * ft;
      fxy(j, k) = s * c * frr - s * c * ir * fr - s * c * ir2 * ftt +
                  (c * c - s * s) * ir * frt - (c * c - s * s) * ir2 * ft;
    }
  }
  return {from_rings(grid, fx), from_rings(grid, fy), from_rings(grid, fxx), from_rings(grid, fxy),
          from_rings(grid, fyy)};
}

ScalarField laplacian(const ScalarField& f) {
  const auto& grid = f.grid();
  const auto& ops = grid.ops();
  const RingMatrix v = as_rings(f);
  const PolarDerivs d = polar_derivatives(ops, v, false);
  RingMatrix lap(grid.n_r() + 1, grid.n_theta());
  const PoleFit p = pole_fit(ops, v);
  lap.row(0).setConstant(p.f_xx + p.f_yy);
  for (int j = 1; j <= grid.n_r(); ++j) {
    const double r = grid.r(j);
    lap.row(j) = d.frr.row(j) + d.fr.row(j) / r + d.ftt.row(j) / (r * r);
  }
  return from_rings(grid, lap);
}

// ---------------------------------------------------------------------------
// Norms

double boundary_sup(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.ring(f.grid().n_r())) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double interior_sup(const ScalarField& f) {
  const std::size_t n = static_cast<std::size_t>(f.grid().n_r()) * f.grid().n_theta();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(f.values()[i]));
  return m;
}

double min_value(const ScalarField& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

double max_value(const ScalarField& f) {
  return *std::max_element(f.values().begin(), f.values().end());
}

// ---------------------------------------------------------------------------
// CSV

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const auto& g = f.grid();
  os << "r,theta,value\n";
  os << std::setprecision(17);
  for (int j = 0; j <= g.n_r(); ++j) {
    for (int k = 0; k < g.n_theta(); ++k) {
      os << g.r(j) << ',' << g.theta(k) << ',' << f(j, k) << '\n';
    }
  }
}

void write_field_csv(const std::string& path, const ScalarField& f) {
  std::ofstream os(path);
  if (!os) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
  write_field_csv(os, f);
}

ScalarField read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("r,theta,value", 0) != 0) {
    fail(ErrorKind::IoError, "missing `r,theta,value` header");
  }
  std::vector<double> rs, values;
  std::map<double, int> thetas;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double r, th, v;
    char c1, c2;
    if (!(ls >> r >> c1 >> th >> c2 >> v) || c1 != ',' || c2 != ',') {
      fail(ErrorKind::IoError, "malformed CSV row at line " + std::to_string(line_no));
    }
    rs.push_back(r);
    thetas.emplace(th, 0);
    values.push_back(v);
  }
  const int n_theta = static_cast<int>(thetas.size());
  if (n_theta == 0 || values.size() % n_theta != 0) {
    fail(ErrorKind::IoError, "CSV rows do not form a polar grid");
  }
  const int n_r = static_cast<int>(values.size() / n_theta) - 1;
  PolarGrid grid = make_polar_grid(n_r, n_theta);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const int j = static_cast<int>(i / n_theta);
    if (std::abs(rs[i] - grid.r(j)) > 1e-12) {
      fail(ErrorKind::IoError, "CSV radii are not a uniform grid with the pole first");
    }
  }
  return ScalarField(grid, std::move(values));
}

ScalarField read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::IoError, "cannot open " + path);
  return read_field_csv(is);
}

}  // namespace crpc
