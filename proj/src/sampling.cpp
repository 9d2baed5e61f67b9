#include "shadowbench/sampling.hpp"

namespace shadowbench {

namespace {

void check_dims(Index m, Index n) {
  if (m < 1 || n < 1) throw input_error("matrix sampler: dimensions must be positive");
}

}  // namespace

Mat gaussian_matrix(RngStream& rng, Index m, Index n, const Mat& center, double sigma) {
  check_dims(m, n);
  if (!(sigma > 0.0)) throw input_error("gaussian_matrix: sigma must be positive");
  if (center.rows() != m || center.cols() != n)
    throw input_error("gaussian_matrix: center shape mismatch");
  Mat A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = center(i, j) + sigma * rng.next_normal();
  return A;
}

Mat gaussian_matrix(RngStream& rng, Index m, Index n, double sigma) {
  check_dims(m, n);
  if (!(sigma > 0.0)) throw input_error("gaussian_matrix: sigma must be positive");
  Mat A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = sigma * rng.next_normal();
  return A;
}

Mat rademacher_matrix(RngStream& rng, Index m, Index n) {
  check_dims(m, n);
  Mat A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = static_cast<double>(rng.next_sign());
  return A;
}

Mat uniform_matrix(RngStream& rng, Index m, Index n) {
  check_dims(m, n);
  Mat A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = rng.next_uniform_pm1();
  return A;
}

Vec unit_sphere_point(RngStream& rng, Index d) {
  if (d < 1) throw input_error("unit_sphere_point: dimension must be positive");
  Vec v(d);
  double n2 = 0.0;
  do {
    for (Index i = 0; i < d; ++i) v[i] = rng.next_normal();
    n2 = v.squaredNorm();
  } while (!(n2 > 0.0));
  return v / std::sqrt(n2);
}

}  // namespace shadowbench
