#pragma once

#include <array>
#include <vector>

#include "crpc/curvature.hpp"

namespace crpc {

using Point2 = std::array<double, 2>;
using Polyline2 = std::vector<Point2>;

/// Bilinear interpolation in (r, theta); r <= 1.
double interpolate(const ScalarField& f, double x, double y);

struct AsymptoticNet {
  std::vector<Polyline2> family1, family2;  // top-view polylines
};

struct TraceOptions {
  double step = 0.01;   // top-view arclength per RK4 step
  int max_steps = 400;  // per direction from each seed
};

/// RK4 along both asymptotic direction fields of `report` from every seed,
/// forwards and backwards. Curves stop at the unit circle or where a
/// surrounding node carries no directions (K >= 0).
AsymptoticNet trace_asymptotics(const CurvatureReport& report, const std::vector<Point2>& seeds,
                                const TraceOptions& options = {});

struct Crossing {
  Point2 at{};
  double angle_deg = 0.0;  // in the sector containing the positive principal direction
};

/// Intersections of family-1 with family-2 polylines and the angle between
/// the crossing segments (top-view metric for isotropic, first fundamental
/// form of f for Euclidean).
std::vector<Crossing> measure_crossings(const AsymptoticNet& net, Geometry g,
                                        const DerivativeBundle& d);

}  // namespace crpc
