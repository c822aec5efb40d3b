#pragma once

#include <optional>
#include <vector>

#include "crpc/curvature.hpp"

namespace crpc {

/// Model coefficient sequence a^(m) = m! b_m dominating the Taylor coefficients.
struct MajorantSeq {
  double M = 1.0;
  double N = 1.0;
  Geometry geometry = Geometry::Isotropic;
  bool log_space = false;
  std::vector<double> b;      // a^(m) / m!  (log b_m in log-space mode)
  std::vector<double> a;      // a^(m); empty in log-space mode
  std::vector<double> log_a;  // log a^(m), always filled
  std::optional<double> radius;

  int order() const noexcept { return static_cast<int>(log_a.size()) - 1; }
};

inline constexpr int kMaxLinearOrder = 64;

/// b_m = N sum_{r<m} b_r b_{m-1-r} + N sum_{r=2}^{m-1} b_r b_{m+1-r}.
/// Orders above 64 need log_space (Overflow otherwise).
MajorantSeq majorant_isotropic(double M, double N, int order, bool log_space = false);

/// b_m = N ([b^3]_m + [b^4]_{m-1} + [b^6]_{m+1}), the powers taken of the
/// sequence truncated to indices below m.
MajorantSeq majorant_euclidean(double M, double N, int order, bool log_space = false);

/// Closed-form generating function of the isotropic sequence; OutsideRadius
/// when the radicand is negative.
double majorant_closed_form_isotropic(double M, double N, double t);
/// Positive t where the radicand of the isotropic closed form vanishes.
double isotropic_closed_form_radius(double M, double N);

/// The inverse function t(a) of the Euclidean generating function ('+' branch).
double euclidean_t_of_a(double M, double N, double a);
/// t(M + d). The real domain above M can be narrower than double spacing at M,
/// so slopes at a = M should be taken through this form.
double euclidean_t_of_offset(double M, double N, double d);
/// Smallest d > 0 where the radicand of t(M + d) vanishes.
std::optional<double> euclidean_radicand_offset(double M, double N);
/// Left side of the quadratic relation between a and t (zero on the graph).
double euclidean_quadratic(double M, double N, double a, double t);

struct RadiusEstimate {
  std::optional<double> closed_form;  // from the radicand / turning point of t(a)
  std::optional<double> ratio_test;   // from the last coefficients
  std::optional<double> value;        // min of the two
};

RadiusEstimate radius_estimate(const MajorantSeq& seq);

/// Heuristic N: the largest ratio ||f^(m)|| / (recursion right side with N = 1)
/// over m = 1..max_m, fed with observed sup norms (norms[0] = M).
double fit_N(Geometry g, const std::vector<double>& norms, int max_m = 4);

}  // namespace crpc
