#pragma once

#include <vector>

#include "crpc/curvature.hpp"
#include "crpc/poisson.hpp"

namespace crpc {

struct RefineOptions {
  double tol = 1e-8;
  int max_iter = 50;
  double relaxation = 0.7;  // used once the residual has increased
  int max_increases = 3;    // consecutive increases before Diverged
  double growth = 2.0;      // ... which must also have grown the residual by this factor
  int stall = 5;            // iterations without a new minimum before giving up
  EllipticOptions elliptic{};
};

struct RefineResult {
  ScalarField field;
  std::vector<double> history;  // sup residual of every iterate, starting with f0
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // residual stuck at the discretization round-off floor
};

/// Frozen-coefficient fixed-point iteration at fixed t keeping the boundary
/// trace of f0. Isotropic: laplacian(f_{k+1}) = t sqrt(-K(f_k)); Euclidean:
/// the quasi-linear operator frozen at f_k with right side t sqrt(W D)(f_k).
/// Throws Diverged after `max_increases` consecutive residual increases that
/// together grow it by `growth`, and NotNegativeK when an iterate loses K < 0.
/// Returns the best iterate.
RefineResult picard_refine(const ScalarField& f0, double t, Geometry geometry,
                           const RefineOptions& options = {});

}  // namespace crpc
