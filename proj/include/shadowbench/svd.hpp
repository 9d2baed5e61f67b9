#pragma once

#include "shadowbench/types.hpp"

namespace shadowbench {

struct SingularValueReport {
  Vec values;               // descending, length min(m, n)
  double lambda_min = 0.0;  // smallest singular value
  double lambda_max = 0.0;  // largest singular value
  double condition_number = 0.0;  // +inf when lambda_min == 0
  double check_residual = 0.0;    // ||G - V S^2 V^T||_F / max(1, ||G||_F)
};

/// Full set of singular values by one-sided Jacobi rotations on columns.
/// Converged when every off-diagonal column dot product is at most
/// 1e-12 * ||A||_F^2; small singular values come out with good accuracy.
SingularValueReport singular_values(const Mat& A);

}  // namespace shadowbench
