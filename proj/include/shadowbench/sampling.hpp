#pragma once

#include "shadowbench/rng.hpp"
#include "shadowbench/types.hpp"

namespace shadowbench {

/// m x n matrix with independent N(center_ij, sigma^2) entries.
Mat gaussian_matrix(RngStream& rng, Index m, Index n, const Mat& center, double sigma);
Mat gaussian_matrix(RngStream& rng, Index m, Index n, double sigma = 1.0);

/// Independent fair +-1 entries.
Mat rademacher_matrix(RngStream& rng, Index m, Index n);

/// Independent uniform [-1, 1] entries (variance 1/3).
Mat uniform_matrix(RngStream& rng, Index m, Index n);

/// Point drawn uniformly from the unit sphere in R^d.
Vec unit_sphere_point(RngStream& rng, Index d);

}  // namespace shadowbench
