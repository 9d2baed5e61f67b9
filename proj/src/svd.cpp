#include "shadowbench/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace shadowbench {

SingularValueReport singular_values(const Mat& A) {
  if (A.rows() < 1 || A.cols() < 1) throw input_error("singular_values: empty matrix");
  if (!all_finite(A)) throw input_error("singular_values: non-finite entries");
  if (std::min(A.rows(), A.cols()) > 1000)
    throw budget_error("singular_values: min dimension above desk-scale budget of 1000");

  // Work with at least as many rows as columns; rotations act on columns.
  Mat B = (A.rows() >= A.cols()) ? A : Mat(A.transpose());
  const Index k = B.cols();
  const Mat G = B.transpose() * B;  // kept for the internal consistency check

  Mat V = Mat::Identity(k, k);
  const double fnorm2 = B.squaredNorm();
  const double thresh = 1e-12 * fnorm2;

  bool rotated = (fnorm2 > 0.0);
  for (int sweep = 0; sweep < 128 && rotated; ++sweep) {
    rotated = false;
    for (Index p = 0; p + 1 < k; ++p) {
      for (Index q = p + 1; q < k; ++q) {
        const double apq = B.col(p).dot(B.col(q));
        if (std::abs(apq) <= thresh) continue;
        const double app = B.col(p).squaredNorm();
        const double aqq = B.col(q).squaredNorm();
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Vec bp = B.col(p);
        B.col(p) = c * bp - s * B.col(q);
        B.col(q) = s * bp + c * B.col(q);
        const Vec vp = V.col(p);
        V.col(p) = c * vp - s * V.col(q);
        V.col(q) = s * vp + c * V.col(q);
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  Vec norms(k);
  for (Index j = 0; j < k; ++j) norms[j] = B.col(j).norm();
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return norms[a] > norms[b]; });

  SingularValueReport rep;
  rep.values.resize(k);
  Mat Vs(k, k);
  for (Index j = 0; j < k; ++j) {
    rep.values[j] = norms[order[static_cast<std::size_t>(j)]];
    Vs.col(j) = V.col(order[static_cast<std::size_t>(j)]);
  }
  rep.lambda_max = rep.values[0];
  rep.lambda_min = rep.values[k - 1];
  rep.condition_number = (rep.lambda_min > 0.0)
                             ? rep.lambda_max / rep.lambda_min
                             : std::numeric_limits<double>::infinity();

  const Mat R = G - Vs * rep.values.array().square().matrix().asDiagonal() * Vs.transpose();
  rep.check_residual = R.norm() / std::max(1.0, G.norm());
  return rep;
}

}  // namespace shadowbench
