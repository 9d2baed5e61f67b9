#pragma once

#include <utility>
#include <vector>

#include "shadowbench/geometry.hpp"
#include "shadowbench/simplex.hpp"
#include "shadowbench/types.hpp"

namespace shadowbench {

/// One basis together with the angle arc on which it is optimal for the
/// rotating objective c(theta) = u cos(theta) + v sin(theta).
struct ShadowArc {
  double theta_start = 0.0;
  double theta_end = 0.0;  // arc is [theta_start, theta_end)
  VertexBasis basis;
};

struct SweepResult {
  std::vector<ShadowArc> shadow_vertices;  // ordered by angle
  int total_count = 0;                     // distinct optimal bases
  std::vector<std::pair<double, double>> unbounded_arcs;
  bool budget_exhausted = false;
  bool tie_flagged = false;  // two events within 1e-11 rad, or a zero-length arc
};

/// Path of the rotating-objective rule from x0 (optimal for z0) to the
/// optimum of lp.z. Pivot angles are the exact zero crossings of the
/// reduced costs in the rotation parameter. budget 0 means 10 * 2^d.
WalkRecord shadow_path(const LinearProgram& lp, const Vec& z0, const VertexBasis& x0,
                       long long budget = 0);

/// Full rotational sweep of c(theta) over [0, 2pi): every optimal basis with
/// its arc. Angle arcs where the program is unbounded are reported
/// separately and hold no basis. budget 0 means 10 * 2^d pivots overall.
SweepResult shadow_sweep_count(const LinearProgram& lp, const Plane& plane, long long budget = 0);

/// Extreme rays of the recession cone {y : Ay <= 0}, unit length, deduped.
/// Empty for bounded polytopes. Requires pointedness (rank d).
std::vector<Vec> extreme_recession_rays(const Mat& A, long long subset_budget = 2'000'000);

}  // namespace shadowbench
