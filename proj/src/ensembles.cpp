#include "shadowbench/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shadowbench/sampling.hpp"

namespace shadowbench {

EnsembleKind ensemble_kind_from(std::string_view name) {
  if (name == "gaussian") return EnsembleKind::gaussian;
  if (name == "rademacher") return EnsembleKind::rademacher;
  if (name == "uniform") return EnsembleKind::uniform;
  throw config_error("unknown ensemble kind: " + std::string(name));
}

const char* ensemble_kind_name(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::gaussian: return "gaussian";
    case EnsembleKind::rademacher: return "rademacher";
    case EnsembleKind::uniform: return "uniform";
  }
  return "unknown";
}

double subgaussian_B(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::gaussian: return std::sqrt(2.0);
    case EnsembleKind::rademacher:
    case EnsembleKind::uniform: return 1.0 / std::sqrt(std::log(2.0));
  }
  return 0.0;
}

double ensemble_entry(EnsembleKind kind, RngStream& rng, bool unit_variance) {
  switch (kind) {
    case EnsembleKind::gaussian: return rng.next_normal();
    case EnsembleKind::rademacher: return rng.next_sign();
    case EnsembleKind::uniform: {
      const double x = rng.next_uniform_pm1();
      return unit_variance ? x * std::sqrt(3.0) : x;
    }
  }
  return 0.0;
}

Mat ensemble_matrix(const MatrixEnsembleSpec& spec, RngStream& rng) {
  if (spec.m <= 0 || spec.n <= 0) throw input_error("ensemble matrix needs positive shape");
  if (!(spec.sigma > 0.0)) throw input_error("ensemble sigma must be positive");
  if (spec.center.size() != 0 && (spec.center.rows() != spec.m || spec.center.cols() != spec.n))
    throw input_error("ensemble center shape mismatch");

  Mat A(spec.m, spec.n);
  for (Index i = 0; i < spec.m; ++i)
    for (Index j = 0; j < spec.n; ++j)
      A(i, j) = spec.sigma * ensemble_entry(spec.kind, rng, spec.unit_variance);
  if (spec.center.size() != 0) A += spec.center;
  return A;
}

double subgaussian_moment_probe(EnsembleKind kind, int p, long long trials, RngStream& rng) {
  if (p < 1 || p > 20) throw input_error("moment order must be in [1, 20]");
  if (trials < 1000) throw input_error("moment probe needs at least 10^3 trials");
  double acc = 0.0;
  for (long long t = 0; t < trials; ++t)
    acc += std::pow(std::abs(ensemble_entry(kind, rng)), p);
  return std::pow(acc / static_cast<double>(trials), 1.0 / p);
}

bool SmoothedPolytopeSpec::sigma_within_cap() const {
  if (n < 2 || d < 1) return false;
  return sigma <= 1.0 / (6.0 * std::sqrt(static_cast<double>(d) * std::log(n)));
}

void SmoothedPolytopeSpec::validate() const {
  if (n < 1 || d < 1) throw input_error("smoothed spec needs n >= 1, d >= 1");
  if (!(sigma > 0.0)) throw input_error("smoothed spec needs sigma > 0");
  if (static_cast<int>(centers.size()) != n) throw input_error("smoothed spec center count mismatch");
  for (const Vec& c : centers) {
    if (c.size() != d || !all_finite(c)) throw input_error("bad center coordinates");
    if (c.norm() > 1.0 + 1e-12) throw input_error("center norm exceeds 1");
  }
}

std::vector<Vec> unit_sphere_centers(int n, int d, RngStream& rng) {
  if (n < 1 || d < 1) throw input_error("center set needs n >= 1, d >= 1");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(unit_sphere_point(rng, d));
  return out;
}

std::vector<Vec> load_centers(const std::string& path, int n, int d) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open center file: " + path);
  std::vector<Vec> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<double> vals;
    double v;
    while (row >> v) vals.push_back(v);
    if (vals.empty()) continue;  // blank line
    if (static_cast<int>(vals.size()) != d)
      throw input_error("center file row has wrong dimension: " + path);
    Vec c(d);
    for (int j = 0; j < d; ++j) c[j] = vals[static_cast<std::size_t>(j)];
    if (!all_finite(c) || c.norm() > 1.0 + 1e-12)
      throw input_error("center file point outside the unit ball: " + path);
    out.push_back(std::move(c));
  }
  if (static_cast<int>(out.size()) != n)
    throw input_error("center file holds " + std::to_string(out.size()) + " points, expected " +
                      std::to_string(n));
  return out;
}

VPolytope sample_smoothed_polytope(const SmoothedPolytopeSpec& spec, RngStream& rng) {
  spec.validate();
  Mat pts(spec.n, spec.d);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.d; ++j)
      pts(i, j) = spec.centers[static_cast<std::size_t>(i)][j] + spec.sigma * rng.next_normal();
  return VPolytope{std::move(pts), /*include_origin=*/false};
}

VPolytope sample_bounded_perturbation(const SmoothedPolytopeSpec& spec, PerturbationLaw law,
                                      RngStream& rng) {
  spec.validate();
  Mat pts(spec.n, spec.d);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.d; ++j) {
      const double theta =
          law == PerturbationLaw::sign_cube ? rng.next_sign() : rng.next_uniform_pm1();
      pts(i, j) = spec.centers[static_cast<std::size_t>(i)][j] + spec.sigma * theta;
    }
  return VPolytope{std::move(pts), /*include_origin=*/false};
}

LinearProgram haimovich_flip(const LinearProgram& lp, const std::vector<bool>& flips) {
  if ((lp.b.array() != 1.0).any()) throw unsupported_form_error("flips need the b = 1 form");
  if (static_cast<Index>(flips.size()) != lp.rows()) throw input_error("one flip bit per row");
  LinearProgram out = lp;
  for (Index i = 0; i < lp.rows(); ++i) {
    if (!flips[static_cast<std::size_t>(i)]) continue;
    out.A.row(i) = -lp.A.row(i);
    out.b[i] = -1.0;
  }
  return out;
}

LinearProgram haimovich_flip(const LinearProgram& lp, RngStream& rng) {
  std::vector<bool> flips(static_cast<std::size_t>(lp.rows()));
  for (auto&& f : flips) f = rng.next_bit();
  return haimovich_flip(lp, flips);
}

void KleeMintySpec::validate() const {
  if (d < 2 || d > 12) throw input_error("deformed cube dimension must be in [2, 12]");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw input_error("epsilon must lie in (0, 1/2)");
}

KleeMintyInstance klee_minty(const KleeMintySpec& spec) {
  spec.validate();
  const int d = spec.d;
  const double eps = spec.epsilon;

  LinearProgram lp;
  lp.A = Mat::Zero(2 * d, d);
  lp.b = Vec::Zero(2 * d);
  for (int j = 0; j < d; ++j) {
    // -x_j + eps x_{j-1} <= 0   and   x_j + eps x_{j-1} <= 1.
    lp.A(2 * j, j) = -1.0;
    lp.A(2 * j + 1, j) = 1.0;
    if (j > 0) {
      lp.A(2 * j, j - 1) = eps;
      lp.A(2 * j + 1, j - 1) = eps;
    }
    lp.b[2 * j + 1] = 1.0;
  }
  lp.z = Vec::Zero(d);
  lp.z[d - 1] = 1.0;

  std::vector<int> rows(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) rows[static_cast<std::size_t>(j)] = 2 * j;
  BasisState st = make_basis_state(lp, rows);
  if (st.x.norm() > 1e-12) throw internal_error("deformed cube start vertex is not the origin");
  return KleeMintyInstance{std::move(lp), VertexBasis{std::move(rows), st.x}};
}

}  // namespace shadowbench
