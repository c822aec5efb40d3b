#include <cmath>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "crpc/error.hpp"
#include "crpc/poisson.hpp"
#include "grid_operators.hpp"

namespace crpc {
namespace {

class InteriorOperator;
class InteriorPreconditioner;

}  // namespace
}  // namespace crpc

namespace Eigen::internal {
template <>
struct traits<crpc::InteriorOperator> : public traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace crpc {

struct EllipticSolver::Impl {
  PolarGrid grid;
  Eigen::Index n_int = 0;
  ScalarField precond_scale;  // 1 / ((a11 + a22) / 2)
  Eigen::VectorXd diag;
  // Direct path.
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool factored = false;

  explicit Impl(const PolarGrid& g) : grid(g), precond_scale(g) {}
};

namespace {

class InteriorOperator : public Eigen::EigenBase<InteriorOperator> {
public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum {
    ColsAtCompileTime = Eigen::Dynamic,
    MaxColsAtCompileTime = Eigen::Dynamic,
    IsRowMajor = false
  };

  InteriorOperator(const EllipticSolver& s, const EllipticSolver::Impl& impl)
      : solver(&s), impl(&impl) {}

  Eigen::Index rows() const { return impl->n_int; }
  Eigen::Index cols() const { return impl->n_int; }

  template <typename Rhs>
  Eigen::Product<InteriorOperator, Rhs, Eigen::AliasFreeProduct> operator*(
      const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<InteriorOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  const EllipticSolver* solver;
  const EllipticSolver::Impl* impl;
};

class InteriorPreconditioner {
public:
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  InteriorPreconditioner() = default;
  template <typename M>
  explicit InteriorPreconditioner(const M& m) {
    compute(m);
  }
  template <typename M>
  InteriorPreconditioner& analyzePattern(const M&) {
    return *this;
  }
  template <typename M>
  InteriorPreconditioner& factorize(const M&) {
    return *this;
  }
  InteriorPreconditioner& compute(const InteriorOperator& op) {
    impl_ = op.impl;
    return *this;
  }
  void set_kind(Preconditioner kind) { kind_ = kind; }

  Eigen::VectorXd solve(const Eigen::VectorXd& r) const {
    if (kind_ == Preconditioner::Diagonal) return r.cwiseQuotient(impl_->diag);
    const PolarGrid& g = impl_->grid;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(g.unknown_count());
    full.head(impl_->n_int) = r;
    ScalarField rhs = ScalarField::from_packed(g, full) * impl_->precond_scale;
    return solve_poisson(rhs).packed().head(impl_->n_int);
  }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

private:
  const EllipticSolver::Impl* impl_ = nullptr;
  Preconditioner kind_ = Preconditioner::SpectralLaplacian;
};

}  // namespace
}  // namespace crpc

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<crpc::InteriorOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<crpc::InteriorOperator, Rhs,
                                generic_product_impl<crpc::InteriorOperator, Rhs>> {
  using Scalar = typename Product<crpc::InteriorOperator, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const crpc::InteriorOperator& lhs, const Rhs& rhs,
                            const Scalar& alpha) {
    dst.noalias() += alpha * lhs.solver->apply_interior(rhs);
  }
};
}  // namespace Eigen::internal

namespace crpc {

// ---------------------------------------------------------------------------
// EllipticCoefficients

EllipticCoefficients EllipticCoefficients::laplacian(const PolarGrid& grid) {
  return {ScalarField(grid), ScalarField(grid), ScalarField(grid, 1.0), ScalarField(grid),
          ScalarField(grid, 1.0)};
}

ScalarField EllipticCoefficients::apply(const DerivativeBundle& u) const {
  return a11 * u.f_xx + a12 * u.f_xy + a22 * u.f_yy + a1 * u.f_x + a2 * u.f_y;
}

ScalarField EllipticCoefficients::apply(const ScalarField& u) const {
  return apply(cartesian_derivatives(u));
}

void EllipticCoefficients::check_elliptic() const {
  const auto v11 = a11.values();
  const auto v12 = a12.values();
  const auto v22 = a22.values();
  const int nt = a11.grid().n_theta();
  for (std::size_t i = 0; i < v11.size(); ++i) {
    const double disc = 4.0 * v11[i] * v22[i] - v12[i] * v12[i];
    if (!(v11[i] > 0.0) || !(disc > 0.0)) {
      std::ostringstream msg;
      msg << "operator degenerates at node (" << i / nt << ", " << i % nt
          << "): a11 = " << v11[i] << ", 4 a11 a22 - a12^2 = " << disc;
      fail(ErrorKind::NotElliptic, msg.str());
    }
  }
}

// ---------------------------------------------------------------------------
// EllipticSolver

namespace {

// Contribution of the basis function of node (j, k) to its own derivatives.
DerivativeBundle self_weights(const PolarGrid& grid) {
  const auto& ops = grid.ops();
  const int n_r = grid.n_r();
  const int nt = grid.n_theta();
  const double h = grid.h();
  std::vector<double> fx(grid.storage_size()), fy(fx.size()), fxx(fx.size()), fxy(fx.size()),
      fyy(fx.size());
  const double a = -15.0 / (12.0 * h * h);
  for (int k = 0; k < nt; ++k) {
    fxx[k] = 2.0 * a;
    fyy[k] = 2.0 * a;
  }
  for (int j = 1; j <= n_r; ++j) {
    const auto& st = ops.radial[j];
    const double r = grid.r(j);
    for (int k = 0; k < nt; ++k) {
      double fr = 0.0, frr = 0.0, frt = 0.0;
      for (std::size_t i = 0; i < st.nodes.size(); ++i) {
        if (st.nodes[i] == j) {
          fr += st.d1[i];
          frr += st.d2[i];
        } else if (st.nodes[i] == -1 && j == 1) {
          frt += st.d1[i] * ops.dtheta(ops.reflected(k), k);
        }
      }
      const double ft = ops.dtheta(k, k);
      const double ftt = ops.dtheta2(k, k);
      const double c = ops.cos_t[k], s = ops.sin_t[k];
      const double ir = 1.0 / r, ir2 = ir * ir;
      const std::size_t idx = static_cast<std::size_t>(j) * nt + k;
      fx[idx] = c * fr - s * ir * ft;
      fy[idx] = s * fr + c * ir * ft;
      fxx[idx] = c * c * frr + s * s * ir * fr + s * s * ir2 * ftt - 2.0 * s * c * ir * frt +
                 2.0 * s * c * ir2 * ft;
      fyy[idx] = s * s * frr + c * c * ir * fr + c * c * ir2 * ftt + 2.0 * s * c * ir * frt -
                 2.0 * s * c * ir2 * ft;
      fxy[idx] = s * c * frr - s * c * ir * fr - s * c * ir2 * ftt +
                 (c * c - s * s) * ir * frt - (c * c - s * s) * ir2 * ft;
    }
  }
  return {ScalarField(grid, fx), ScalarField(grid, fy), ScalarField(grid, fxx),
          ScalarField(grid, fxy), ScalarField(grid, fyy)};
}

}  // namespace

EllipticSolver::EllipticSolver(EllipticCoefficients coeffs, EllipticOptions options)
    : coeffs_(std::move(coeffs)), options_(options) {
  coeffs_.check_elliptic();
  const PolarGrid& grid = coeffs_.a11.grid();
  impl_ = std::make_unique<Impl>(grid);
  impl_->n_int =
      static_cast<Eigen::Index>(1 + static_cast<std::size_t>(grid.n_r() - 1) * grid.n_theta());
  impl_->precond_scale =
      (coeffs_.a11 + coeffs_.a22).map([](double v) { return 2.0 / v; });
  impl_->diag = coeffs_.apply(self_weights(grid)).packed().head(impl_->n_int);
  if (options_.method == EllipticMethod::Direct) {
    impl_->lu.compute(assemble());
    if (impl_->lu.info() != Eigen::Success) {
      fail(ErrorKind::SingularMode, "sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
    }
    impl_->factored = true;
  }
}

EllipticSolver::~EllipticSolver() = default;
EllipticSolver::EllipticSolver(EllipticSolver&&) noexcept = default;
EllipticSolver& EllipticSolver::operator=(EllipticSolver&&) noexcept = default;

Eigen::VectorXd EllipticSolver::apply_interior(const Eigen::VectorXd& x) const {
  const PolarGrid& g = impl_->grid;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(g.unknown_count());
  full.head(impl_->n_int) = x;
  return coeffs_.apply(ScalarField::from_packed(g, full)).packed().head(impl_->n_int);
}

Eigen::VectorXd EllipticSolver::diagonal() const { return impl_->diag; }

Eigen::SparseMatrix<double> EllipticSolver::assemble() const {
  const Eigen::Index n = impl_->n_int;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    e[c] = 1.0;
    const Eigen::VectorXd col = apply_interior(e);
    e[c] = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (col[r] != 0.0) trip.emplace_back(static_cast<int>(r), static_cast<int>(c), col[r]);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

ScalarField EllipticSolver::solve(const ScalarField& rhs, const BoundaryData& boundary) const {
  const PolarGrid& g = impl_->grid;
  if (!(rhs.grid() == g)) fail(ErrorKind::GridMismatch, "right side on a different grid");
  if (static_cast<int>(boundary.size()) != g.n_theta()) {
    fail(ErrorKind::GridMismatch, "boundary data size does not match grid");
  }
  const Eigen::Index n = impl_->n_int;

  // Move the boundary data to the right side.
  ScalarField lift = ScalarField::generate(g, [&](int j, int k) {
    return j == g.n_r() ? boundary[k] : 0.0;
  });
  const Eigen::VectorXd b =
      rhs.packed().head(n) - coeffs_.apply(lift).packed().head(n);

  Eigen::VectorXd x;
  stats_ = {};
  if (b.norm() == 0.0) {
    x = Eigen::VectorXd::Zero(n);
  } else if (options_.method == EllipticMethod::Direct) {
    x = impl_->lu.solve(b);
    stats_.relative_residual = (apply_interior(x) - b).norm() / b.norm();
  } else {
    InteriorOperator op(*this, *impl_);
    Eigen::BiCGSTAB<InteriorOperator, InteriorPreconditioner> solver;
    solver.preconditioner().set_kind(options_.preconditioner);
    solver.setTolerance(options_.rel_tol);
    const long max_iter = options_.max_iter > 0 ? options_.max_iter : 10 * static_cast<long>(n);
    solver.setMaxIterations(max_iter);
    solver.compute(op);
    x = solver.solve(b);
    stats_.iterations = solver.iterations();
    stats_.relative_residual = solver.error();
    if (solver.info() != Eigen::Success || !(solver.error() <= options_.rel_tol) ||
        !x.allFinite()) {
      std::ostringstream msg;
      msg << "BiCGSTAB stopped after " << solver.iterations()
          << " iterations with relative residual " << solver.error();
      fail(ErrorKind::NoConvergence, msg.str());
    }
  }

  Eigen::VectorXd full(g.unknown_count());
  full.head(n) = x;
  for (int k = 0; k < g.n_theta(); ++k) full[g.unknown_index(g.n_r(), k)] = boundary[k];
  return ScalarField::from_packed(g, full);
}

ScalarField EllipticSolver::solve(const ScalarField& rhs) const {
  return solve(rhs, BoundaryData(rhs.grid().n_theta(), 0.0));
}

ScalarField solve_elliptic(const EllipticCoefficients& coeffs, const ScalarField& rhs,
                           const BoundaryData& boundary, const EllipticOptions& options) {
  return EllipticSolver(coeffs, options).solve(rhs, boundary);
}

}  // namespace crpc
