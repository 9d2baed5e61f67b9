#include "shadowbench/simplex.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace shadowbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double feas_tol(double row_norm, double x_norm) {
  return 1e-9 * (1.0 + row_norm * (1.0 + x_norm));
}

void validate_lp(const LinearProgram& lp) {
  if (lp.A.rows() == 0 || lp.A.cols() == 0) throw input_error("empty constraint matrix");
  if (lp.b.size() != lp.A.rows()) throw input_error("rhs size mismatch");
  if (lp.z.size() != lp.A.cols()) throw input_error("objective size mismatch");
  if (!all_finite(lp.A) || !all_finite(lp.b) || !all_finite(lp.z))
    throw input_error("non-finite program data");
}

/// Tightest ratio along direction g from x, rows in `skip` excluded.
/// Ties go to the lowest row index. Returns {step, row} or {inf, -1}.
std::pair<double, int> ratio_limit(const LinearProgram& lp, const Vec& x, const Vec& g,
                                   const std::vector<int>& skip) {
  const double gnorm = g.norm();
  double best_t = kInf;
  int best_j = -1;
  for (Index j = 0; j < lp.rows(); ++j) {
    if (std::binary_search(skip.begin(), skip.end(), static_cast<int>(j))) continue;
    const double den = lp.A.row(j).dot(g);
    const double row_norm = lp.A.row(j).norm();
    if (den <= 1e-12 * (1.0 + row_norm * gnorm)) continue;
    const double slack = std::max(0.0, lp.b[j] - lp.A.row(j).dot(x));
    const double t = slack / den;
    if (best_j < 0 || t < best_t - 1e-12 * (1.0 + std::abs(best_t))) {
      best_t = t;
      best_j = static_cast<int>(j);
    }
  }
  return {best_t, best_j};
}

/// Shared skeleton for greedy and least-improvement: splits candidates into
/// improving bounded pivots and improving rays, with a lowest-index fallback
/// when every improvement is blocked at step zero (degenerate vertex).
struct RuleScan {
  std::vector<PivotCandidate> improving;  // strict objective gain
  std::optional<Vec> improving_ray;
  std::optional<PivotCandidate> bland;  // degenerate fallback, lowest relax row
};

RuleScan scan_candidates(const LinearProgram& lp, const BasisState& st) {
  RuleScan out;
  const double tol_obj = 1e-9 * (1.0 + std::abs(st.obj));
  const double znorm = lp.z.norm();
  for (auto& c : pivot_candidates(lp, st)) {
    const double gain_rate = lp.z.dot(c.direction);
    const bool uphill = gain_rate > 1e-11 * (1.0 + znorm * c.direction.norm());
    if (c.enter_row < 0) {
      if (uphill && !out.improving_ray) out.improving_ray = c.direction;
      continue;
    }
    if (c.obj_new > st.obj + tol_obj) {
      out.improving.push_back(std::move(c));
    } else if (uphill) {
      if (!out.bland || c.relax_row < out.bland->relax_row) out.bland = std::move(c);
    }
  }
  return out;
}

std::optional<PivotRule::Decision> decide(const LinearProgram& lp, const BasisState& st,
                                          bool prefer_small_gain) {
  RuleScan scan = scan_candidates(lp, st);
  if (scan.improving_ray && (!prefer_small_gain || scan.improving.empty())) {
    PivotRule::Decision dec;
    dec.unbounded = true;
    dec.ray = *scan.improving_ray;
    return dec;
  }
  if (!scan.improving.empty()) {
    auto better = [&](const PivotCandidate& a, const PivotCandidate& b) {
      const double tie = 1e-9 * (1.0 + std::abs(a.obj_new));
      if (std::abs(a.obj_new - b.obj_new) > tie)
        return prefer_small_gain ? a.obj_new < b.obj_new : a.obj_new > b.obj_new;
      if (a.enter_row != b.enter_row) return a.enter_row < b.enter_row;
      return a.relax_row < b.relax_row;
    };
    const PivotCandidate* best = &scan.improving.front();
    for (const auto& c : scan.improving)
      if (better(c, *best)) best = &c;
    PivotRule::Decision dec;
    dec.pivot = *best;
    return dec;
  }
  if (scan.bland) {
    PivotRule::Decision dec;
    dec.degenerate = true;
    dec.pivot = std::move(*scan.bland);
    return dec;
  }
  return std::nullopt;
}

Vec normal_vec(RngStream& rng, Index d) {
  Vec g(d);
  for (Index i = 0; i < d; ++i) g[i] = rng.next_normal();
  return g;
}

/// Walks from a feasible point to a vertex by fixing one independent tight
/// row per step. The preference direction is the objective, then stream
/// draws; rows already tight at the start are adopted when independent.
VertexBasis crash_to_vertex(const LinearProgram& lp, Vec x, RngStream& rng) {
  const Index d = lp.dim();
  std::vector<int> tight;

  auto rank_of = [&](const std::vector<int>& rows) {
    Mat At(static_cast<Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) At.row(static_cast<Index>(i)) = lp.A.row(rows[i]);
    Eigen::ColPivHouseholderQR<Mat> qr(At);
    qr.setThreshold(1e-10);
    return qr.rank();
  };

  for (Index j = 0; j < lp.rows(); ++j) {
    if (static_cast<Index>(tight.size()) == d) break;
    const double slack = lp.b[j] - lp.A.row(j).dot(x);
    if (std::abs(slack) > feas_tol(lp.A.row(j).norm(), x.norm())) continue;
    tight.push_back(static_cast<int>(j));
    if (rank_of(tight) != static_cast<Index>(tight.size())) tight.pop_back();
  }

  while (static_cast<Index>(tight.size()) < d) {
    Mat Q;  // orthonormal span of the tight rows
    if (!tight.empty()) {
      Mat At_t(d, static_cast<Index>(tight.size()));
      for (std::size_t i = 0; i < tight.size(); ++i)
        At_t.col(static_cast<Index>(i)) = lp.A.row(tight[i]).transpose();
      Eigen::HouseholderQR<Mat> qr(At_t);
      Q = qr.householderQ() * Mat::Identity(d, static_cast<Index>(tight.size()));
    }

    Vec g;
    bool have_dir = false;
    for (int attempt = 0; attempt < 64 && !have_dir; ++attempt) {
      Vec raw = attempt == 0 ? lp.z : normal_vec(rng, d);
      if (raw.norm() < 1e-14) continue;
      Vec proj = tight.empty() ? raw : Vec(raw - Q * (Q.transpose() * raw));
      if (proj.norm() > 1e-8 * raw.norm()) {
        g = proj.normalized();
        have_dir = true;
      }
    }
    if (!have_dir) throw degeneracy_error("no movement direction off the tight rows");

    auto [t_fwd, j_fwd] = ratio_limit(lp, x, g, tight);
    if (j_fwd < 0) {
      g = -g;
      std::tie(t_fwd, j_fwd) = ratio_limit(lp, x, g, tight);
    }
    if (j_fwd < 0) throw degeneracy_error("feasible set contains a line");
    x += t_fwd * g;
    tight.insert(std::upper_bound(tight.begin(), tight.end(), j_fwd), j_fwd);
  }

  Mat At(d, d);
  Vec bt(d);
  for (Index i = 0; i < d; ++i) {
    At.row(i) = lp.A.row(tight[static_cast<std::size_t>(i)]);
    bt[i] = lp.b[tight[static_cast<std::size_t>(i)]];
  }
  Eigen::FullPivLU<Mat> lu(At);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) throw degeneracy_error("crash basis is singular");
  return VertexBasis{tight, lu.solve(bt)};
}

}  // namespace

LinearProgram LinearProgram::canonical(Mat A, Vec z) {
  LinearProgram lp;
  lp.A = std::move(A);
  lp.b = Vec::Ones(lp.A.rows());
  lp.z = std::move(z);
  validate_lp(lp);
  return lp;
}

bool WalkRecord::validate(Index d) const {
  std::set<std::vector<int>> seen;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const auto& rows = vertices[k].tight_rows;
    if (static_cast<Index>(rows.size()) != d) return false;
    if (!std::is_sorted(rows.begin(), rows.end())) return false;
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) return false;
    if (!seen.insert(rows).second) return false;
    if (k == 0) continue;
    std::vector<int> common;
    const auto& prev = vertices[k - 1].tight_rows;
    std::set_intersection(prev.begin(), prev.end(), rows.begin(), rows.end(),
                          std::back_inserter(common));
    if (static_cast<Index>(common.size()) != d - 1) return false;
  }
  return true;
}

BasisState make_basis_state(const LinearProgram& lp, std::vector<int> rows) {
  validate_lp(lp);
  const Index d = lp.dim();
  if (static_cast<Index>(rows.size()) != d) throw input_error("basis must have d rows");
  std::sort(rows.begin(), rows.end());
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end())
    throw input_error("basis rows must be distinct");
  if (rows.front() < 0 || rows.back() >= lp.rows()) throw input_error("basis row out of range");

  Mat At(d, d);
  Vec bt(d);
  for (Index i = 0; i < d; ++i) {
    At.row(i) = lp.A.row(rows[static_cast<std::size_t>(i)]);
    bt[i] = lp.b[rows[static_cast<std::size_t>(i)]];
  }
  Eigen::FullPivLU<Mat> lu(At);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) throw degeneracy_error("basis rows are dependent");

  BasisState st;
  st.rows = std::move(rows);
  st.x = lu.solve(bt);
  st.Ainv = lu.inverse();
  st.obj = lp.z.dot(st.x);
  return st;
}

Vec reduced_costs(const Vec& objective, const BasisState& st) {
  return -(st.Ainv.transpose() * objective);
}

PivotCandidate pivot_at(const LinearProgram& lp, const BasisState& st, int p) {
  const Index d = lp.dim();
  PivotCandidate c;
  c.relax_pos = p;
  c.relax_row = st.rows[static_cast<std::size_t>(p)];
  c.direction = st.direction(p);

  std::vector<int> skip = st.rows;
  skip.erase(std::find(skip.begin(), skip.end(), c.relax_row));
  auto [t, j] = ratio_limit(lp, st.x, c.direction, skip);
  if (j < 0) {
    c.enter_row = -1;
    return c;
  }
  c.enter_row = j;
  c.step = t;
  c.basis_new = st.rows;
  *std::find(c.basis_new.begin(), c.basis_new.end(), c.relax_row) = j;
  std::sort(c.basis_new.begin(), c.basis_new.end());

  Mat At(d, d);
  Vec bt(d);
  for (Index i = 0; i < d; ++i) {
    At.row(i) = lp.A.row(c.basis_new[static_cast<std::size_t>(i)]);
    bt[i] = lp.b[c.basis_new[static_cast<std::size_t>(i)]];
  }
  c.x_new = At.partialPivLu().solve(bt);
  c.obj_new = lp.z.dot(c.x_new);
  return c;
}

std::vector<PivotCandidate> pivot_candidates(const LinearProgram& lp, const BasisState& st) {
  std::vector<PivotCandidate> out;
  out.reserve(st.rows.size());
  for (int p = 0; p < static_cast<int>(st.rows.size()); ++p)
    out.push_back(pivot_at(lp, st, p));
  return out;
}

std::optional<PivotRule::Decision> GreedyRule::choose(const LinearProgram& lp,
                                                      const BasisState& st) {
  return decide(lp, st, /*prefer_small_gain=*/false);
}

std::optional<PivotRule::Decision> LeastImprovementRule::choose(const LinearProgram& lp,
                                                                const BasisState& st) {
  return decide(lp, st, /*prefer_small_gain=*/true);
}

SolveResult solve_with_rule(const LinearProgram& lp, const VertexBasis& start, PivotRule& rule,
                            long long budget) {
  validate_lp(lp);
  const Index d = lp.dim();
  if (budget <= 0) budget = 10LL * (1LL << std::min<Index>(d, 50));

  BasisState st = make_basis_state(lp, start.tight_rows);
  for (Index j = 0; j < lp.rows(); ++j) {
    const double slack = lp.b[j] - lp.A.row(j).dot(st.x);
    if (slack < -feas_tol(lp.A.row(j).norm(), st.x.norm()))
      throw input_error("start vertex is infeasible");
  }

  SolveResult res;
  res.walk.vertices.push_back(VertexBasis{st.rows, st.x});
  std::set<std::vector<int>> visited;
  visited.insert(st.rows);

  while (res.walk.pivot_count < budget) {
    auto dec = rule.choose(lp, st);
    if (!dec) {
      res.walk.terminated = WalkTermination::optimal;
      res.optimum = res.walk.vertices.back();
      res.objective = st.obj;
      return res;
    }
    if (dec->unbounded) {
      res.walk.terminated = WalkTermination::unbounded;
      res.walk.ray = dec->ray;
      res.ray = dec->ray;
      return res;
    }
    st = make_basis_state(lp, dec->pivot.basis_new);
    if (!visited.insert(st.rows).second) throw internal_error("pivot rule revisited a basis");
    res.walk.vertices.push_back(VertexBasis{st.rows, st.x});
    res.walk.pivot_count += 1;
    if (dec->degenerate) res.walk.degenerate_pivots += 1;
  }
  res.walk.terminated = WalkTermination::budget_exhausted;
  res.objective = st.obj;
  return res;
}

std::vector<VertexBasis> neighbors(const LinearProgram& lp, const VertexBasis& v) {
  BasisState st = make_basis_state(lp, v.tight_rows);
  std::vector<VertexBasis> out;
  for (auto& c : pivot_candidates(lp, st))
    if (c.enter_row >= 0) out.push_back(VertexBasis{std::move(c.basis_new), std::move(c.x_new)});
  return out;
}

InitialVertexResult find_initial_vertex(const LinearProgram& lp, RngStream& rng) {
  validate_lp(lp);
  const Index d = lp.dim();
  const Index n = lp.rows();
  InitialVertexResult out;

  try {
    if (lp.b.minCoeff() >= 0.0) {
      out.basis = crash_to_vertex(lp, Vec::Zero(d), rng);
      return out;
    }

    // Auxiliary program in (x, s): a_i.x - s <= b_i, s >= 0, maximize -s.
    // (0, s0) is strictly feasible for s0 past the worst violation.
    LinearProgram aux;
    aux.A = Mat::Zero(n + 1, d + 1);
    aux.A.topLeftCorner(n, d) = lp.A;
    aux.A.col(d).head(n).setConstant(-1.0);
    aux.A(n, d) = -1.0;
    aux.b = Vec::Zero(n + 1);
    aux.b.head(n) = lp.b;
    aux.z = Vec::Zero(d + 1);
    aux.z[d] = -1.0;

    const double s0 = std::max(0.0, -lp.b.minCoeff()) + 1.0;
    Vec start = Vec::Zero(d + 1);
    start[d] = s0;

    VertexBasis v0 = crash_to_vertex(aux, start, rng);
    GreedyRule greedy;
    SolveResult aux_res = solve_with_rule(aux, v0, greedy, 256LL * (n + d + 8));
    if (aux_res.walk.terminated != WalkTermination::optimal)
      throw internal_error("auxiliary program did not reach an optimum");

    const double gap = aux_res.optimum.x[d];
    if (gap > 1e-8 * (1.0 + lp.b.cwiseAbs().maxCoeff())) {
      out.status = PhaseOneStatus::infeasible;
      out.infeasibility = gap;
      return out;
    }
    out.basis = crash_to_vertex(lp, aux_res.optimum.x.head(d), rng);
    return out;
  } catch (const degeneracy_error&) {
    out.status = PhaseOneStatus::not_pointed;
    return out;
  }
}

bool check_vertex_basis(const LinearProgram& lp, const VertexBasis& v) {
  try {
    BasisState st = make_basis_state(lp, v.tight_rows);
    if ((st.x - v.x).norm() > 1e-7 * (1.0 + st.x.norm())) return false;
    for (Index j = 0; j < lp.rows(); ++j) {
      const double slack = lp.b[j] - lp.A.row(j).dot(st.x);
      if (slack < -feas_tol(lp.A.row(j).norm(), st.x.norm())) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace shadowbench
