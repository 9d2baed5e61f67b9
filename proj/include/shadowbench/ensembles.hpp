#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shadowbench/geometry.hpp"
#include "shadowbench/rng.hpp"
#include "shadowbench/simplex.hpp"
#include "shadowbench/types.hpp"

namespace shadowbench {

enum class EnsembleKind { gaussian, rademacher, uniform };

EnsembleKind ensemble_kind_from(std::string_view name);  // throws config_error
const char* ensemble_kind_name(EnsembleKind kind);

/// Tail constant B with P(|entry| > t) <= 2 exp(-t^2/B^2): sqrt(2) for the
/// standard normal, 1/sqrt(ln 2) for the bounded kinds. Slack constants for
/// sanity checks, never asserted as sharp.
double subgaussian_B(EnsembleKind kind);

/// One scalar draw of the raw entry law: N(0,1), +-1, or uniform on [-1,1].
/// unit_variance rescales the uniform law by sqrt(3); the others already
/// have variance 1.
double ensemble_entry(EnsembleKind kind, RngStream& rng, bool unit_variance = false);

struct MatrixEnsembleSpec {
  EnsembleKind kind = EnsembleKind::gaussian;
  Index m = 0, n = 0;
  Mat center;  // empty means zero
  double sigma = 1.0;
  bool unit_variance = false;
};

/// center + sigma * (iid entries of the raw law), row-major draw order.
Mat ensemble_matrix(const MatrixEnsembleSpec& spec, RngStream& rng);

/// Empirical (E|entry|^p)^{1/p} over `trials` draws of the raw law.
double subgaussian_moment_probe(EnsembleKind kind, int p, long long trials, RngStream& rng);

struct SmoothedPolytopeSpec {
  int n = 0;
  int d = 0;
  double sigma = 0.0;
  std::vector<Vec> centers;  // n points, norm <= 1
  std::uint64_t seed = 0;

  /// sigma <= 1/(6 sqrt(d ln n)); violating it is a warning carried into
  /// output rows, not an error.
  bool sigma_within_cap() const;
  void validate() const;
};

/// n centers drawn uniformly from the unit sphere, meant to be frozen into a
/// spec once and reused across trials.
std::vector<Vec> unit_sphere_centers(int n, int d, RngStream& rng);

/// Centers from a text file: one point per line, whitespace-separated
/// decimal coordinates. Count, dimension, and norms are checked.
std::vector<Vec> load_centers(const std::string& path, int n, int d);

/// Vertex hull points a_i = center_i + Gaussian noise, origin excluded.
VPolytope sample_smoothed_polytope(const SmoothedPolytopeSpec& spec, RngStream& rng);

enum class PerturbationLaw { sign_cube, solid_cube };

/// Same with coordinates of the noise drawn from {-sigma, +sigma} or
/// uniformly from [-sigma, sigma].
VPolytope sample_bounded_perturbation(const SmoothedPolytopeSpec& spec, PerturbationLaw law,
                                      RngStream& rng);

/// Each row of a canonical (b = 1) program independently kept or replaced by
/// its reversed inequality (-a_i, -1). Exactly n fair bits are consumed;
/// bit true means flip.
LinearProgram haimovich_flip(const LinearProgram& lp, RngStream& rng);
LinearProgram haimovich_flip(const LinearProgram& lp, const std::vector<bool>& flips);

struct KleeMintySpec {
  int d = 0;
  double epsilon = 1.0 / 3.0;  // in (0, 1/2)
  void validate() const;
};

struct KleeMintyInstance {
  LinearProgram lp;    // maximize x_d over the deformed cube, 2d rows
  VertexBasis start;   // x = 0, basis of the d lower-bound rows
};

/// The eps-deformed cube: 0 <= x_1 <= 1, eps x_{j-1} <= x_j <= 1 - eps x_{j-1}.
/// Row 2(j-1) is the lower bound of x_j, row 2(j-1)+1 the upper bound.
/// It has exactly 2^d vertices; the monotone least-gain walk from the start
/// vertex visits every one of them.
KleeMintyInstance klee_minty(const KleeMintySpec& spec);

}  // namespace shadowbench
