#include "shadowbench/shadow.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "shadowbench/combinatorics.hpp"
#include "shadowbench/rng.hpp"

namespace shadowbench {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kAngleTie = 1e-11;

double wrap0(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

long long default_budget(Index d) { return 10LL * (1LL << std::min<Index>(d, 50)); }

struct SweepEvent {
  double angle = 0.0;
  int pos = -1;
  bool tie = false;
};

/// Nearest angle at which some reduced cost r_i = alpha_i cos + beta_i sin
/// turns positive, scanning forward or backward from theta. Rows whose
/// amplitude is below tolerance never fire. A crossing sitting exactly at
/// theta (mod 2pi) is an immediate event: the basis is losing optimality now.
std::optional<SweepEvent> next_event(const Vec& alpha, const Vec& beta, double theta,
                                     bool forward) {
  const double amp = std::max(alpha.cwiseAbs().maxCoeff(), beta.cwiseAbs().maxCoeff());
  const double tol_amp = 1e-12 * (1.0 + amp);
  double best = std::numeric_limits<double>::infinity();
  int pos = -1;
  bool tie = false;
  for (Index i = 0; i < alpha.size(); ++i) {
    const double R = std::hypot(alpha[i], beta[i]);
    if (R <= tol_amp) continue;
    const double phi = std::atan2(beta[i], alpha[i]);
    const double crossing = forward ? phi - kPi / 2.0 : phi + kPi / 2.0;
    double delta = forward ? wrap0(crossing - theta) : wrap0(theta - crossing);
    if (delta > kTwoPi - kAngleTie) delta = 0.0;
    if (delta + kAngleTie < best) {
      best = delta;
      pos = static_cast<int>(i);
      tie = false;
    } else if (delta - best <= kAngleTie) {
      tie = true;
    }
  }
  if (pos < 0) return std::nullopt;
  return SweepEvent{forward ? theta + best : theta - best, pos, tie};
}

void merge_circular_arcs(std::vector<std::pair<double, double>>& arcs, bool& full_circle) {
  full_circle = false;
  if (arcs.empty()) return;
  std::sort(arcs.begin(), arcs.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : arcs) {
    if (!merged.empty() && a.first <= merged.back().second + kAngleTie)
      merged.back().second = std::max(merged.back().second, a.second);
    else
      merged.push_back(a);
  }
  // The last arc may run past 2pi and swallow arcs at the start.
  while (merged.size() > 1 && merged.back().second - kTwoPi >= merged.front().first - kAngleTie) {
    merged.back().second = std::max(merged.back().second, merged.front().second + kTwoPi);
    merged.erase(merged.begin());
  }
  if (merged.size() == 1 && merged.front().second - merged.front().first >= kTwoPi - kAngleTie)
    full_circle = true;
  arcs = std::move(merged);
}

/// Sweeps one direction from (st, theta_from) until theta_stop, appending
/// each basis with its arc. Returns false when the pivot budget ran out.
bool sweep_dir(const LinearProgram& lp, const Vec& u, const Vec& v, BasisState st,
               double theta_from, double theta_stop, bool forward, std::vector<ShadowArc>& out,
               long long& budget, SweepResult& flags) {
  double theta = theta_from;
  double edge = theta_from;  // boundary of the current basis arc nearest theta_from
  int zero_chain = 0;
  const int zero_cap = 4 * static_cast<int>(lp.rows() + lp.dim());

  auto push_arc = [&](double to) {
    const double lo = forward ? edge : to;
    const double hi = forward ? to : edge;
    if (hi > lo + 1e-15)
      out.push_back(ShadowArc{lo, hi, VertexBasis{st.rows, st.x}});
    else
      flags.tie_flagged = true;
  };

  while (true) {
    const Vec alpha = reduced_costs(u, st);
    const Vec beta = reduced_costs(v, st);
    auto ev = next_event(alpha, beta, theta, forward);
    const bool past_stop =
        !ev || (forward ? ev->angle >= theta_stop - 1e-12 : ev->angle <= theta_stop + 1e-12);
    if (past_stop) {
      const double lo = forward ? edge : theta_stop;
      const double hi = forward ? theta_stop : edge;
      if (hi > lo + 1e-15) out.push_back(ShadowArc{lo, hi, VertexBasis{st.rows, st.x}});
      return true;
    }
    if (ev->tie) flags.tie_flagged = true;
    if (budget <= 0) {
      flags.budget_exhausted = true;
      push_arc(ev->angle);
      return false;
    }
    PivotCandidate cand = pivot_at(lp, st, ev->pos);
    if (cand.enter_row < 0) {
      // Ran into an unbounded edge: the boundedness arc ends here. Off the
      // precomputed boundary that is a flagged near-degeneracy.
      push_arc(ev->angle);
      if (std::abs(ev->angle - theta_stop) > 1e-8) flags.tie_flagged = true;
      return true;
    }
    push_arc(ev->angle);
    budget -= 1;
    const bool no_progress = std::abs(ev->angle - theta) <= 1e-15;
    if (no_progress && ++zero_chain > zero_cap) {
      flags.tie_flagged = true;
      return true;
    }
    if (!no_progress) zero_chain = 0;
    st = make_basis_state(lp, cand.basis_new);
    edge = ev->angle;
    theta = ev->angle;
  }
}

}  // namespace

std::vector<Vec> extreme_recession_rays(const Mat& A, long long subset_budget) {
  const Index n = A.rows();
  const Index d = A.cols();
  if (n == 0 || d == 0) throw input_error("empty constraint matrix");
  if (!all_finite(A)) throw input_error("non-finite constraint matrix");

  std::vector<Vec> rays;
  auto try_candidate = [&](const Vec& y) {
    for (Index j = 0; j < n; ++j)
      if (A.row(j).dot(y) > 1e-9 * (1.0 + A.row(j).norm())) return;
    for (const Vec& r : rays)
      if (r.dot(y) > 1.0 - 1e-9) return;
    rays.push_back(y);
  };

  if (d == 1) {
    Vec y(1);
    y[0] = 1.0;
    try_candidate(y);
    y[0] = -1.0;
    try_candidate(y);
    return rays;
  }

  const auto cap = static_cast<std::size_t>(std::max<long long>(subset_budget, 0));
  if (binomial_capped(static_cast<std::size_t>(n), static_cast<std::size_t>(d) - 1, cap) > cap)
    throw budget_error("too many recession ray candidates");

  CombinationIter it(static_cast<int>(n), static_cast<int>(d) - 1);
  if (it.valid()) do {
      Mat M(d - 1, d);
      for (Index r = 0; r < d - 1; ++r) M.row(r) = A.row(it.idx[static_cast<std::size_t>(r)]);
      Eigen::FullPivLU<Mat> lu(M);
      lu.setThreshold(1e-10);
      if (lu.rank() != d - 1) continue;
      Vec y = lu.kernel().col(0).normalized();
      try_candidate(y);
      try_candidate(Vec(-y));
    } while (it.next());
  return rays;
}

WalkRecord shadow_path(const LinearProgram& lp, const Vec& z0, const VertexBasis& x0,
                       long long budget) {
  const Index d = lp.dim();
  if (z0.size() != d || !all_finite(z0)) throw input_error("bad start objective");
  if (z0.norm() == 0.0 || lp.z.norm() == 0.0) throw input_error("zero objective");
  if (budget <= 0) budget = default_budget(d);

  BasisState st = make_basis_state(lp, x0.tight_rows);

  const double obj0 = z0.dot(st.x);
  const double tol0 = 1e-9 * (1.0 + std::abs(obj0));
  for (const auto& cand : pivot_candidates(lp, st)) {
    if (cand.enter_row < 0) {
      if (z0.dot(cand.direction) > 1e-11 * (1.0 + z0.norm() * cand.direction.norm()))
        throw input_error("start vertex is not optimal for the start objective");
    } else if (z0.dot(cand.x_new) > obj0 + tol0) {
      throw input_error("start vertex is not optimal for the start objective");
    }
  }

  WalkRecord walk;
  walk.vertices.push_back(VertexBasis{st.rows, st.x});

  const Vec u = z0.normalized();
  const Vec w = lp.z - lp.z.dot(u) * u;
  if (w.norm() <= 1e-12 * lp.z.norm()) {
    if (lp.z.dot(u) > 0.0) return walk;  // same direction: nothing to sweep
    throw input_error("objectives are opposite, no rotation plane");
  }
  const Vec v = w.normalized();
  const double psi = std::atan2(lp.z.dot(v), lp.z.dot(u));  // in (0, pi)

  double theta = 0.0;
  int zero_chain = 0;
  const int zero_cap = 4 * static_cast<int>(lp.rows() + d);
  while (walk.pivot_count < budget) {
    const Vec alpha = reduced_costs(u, st);
    const Vec beta = reduced_costs(v, st);
    auto ev = next_event(alpha, beta, theta, /*forward=*/true);
    if (!ev || ev->angle > psi + kAngleTie) {
      walk.terminated = WalkTermination::optimal;
      return walk;
    }
    PivotCandidate cand = pivot_at(lp, st, ev->pos);
    if (cand.enter_row < 0) {
      walk.terminated = WalkTermination::unbounded;
      walk.ray = cand.direction;
      return walk;
    }
    st = make_basis_state(lp, cand.basis_new);
    walk.vertices.push_back(VertexBasis{st.rows, st.x});
    walk.pivot_count += 1;
    if (ev->tie) walk.degenerate_pivots += 1;
    if (std::abs(ev->angle - theta) <= 1e-15) {
      if (++zero_chain > zero_cap) throw internal_error("tied rotation events cycle");
    } else {
      zero_chain = 0;
    }
    theta = ev->angle;
  }
  walk.terminated = WalkTermination::budget_exhausted;
  return walk;
}

SweepResult shadow_sweep_count(const LinearProgram& lp, const Plane& plane, long long budget) {
  const Index d = lp.dim();
  if (plane.u.size() != d || plane.v.size() != d) throw input_error("plane dimension mismatch");
  if (std::abs(plane.u.norm() - 1.0) > 1e-8 || std::abs(plane.v.norm() - 1.0) > 1e-8 ||
      std::abs(plane.u.dot(plane.v)) > 1e-8)
    throw input_error("plane basis is not orthonormal");
  {
    Eigen::ColPivHouseholderQR<Mat> qr(lp.A);
    qr.setThreshold(1e-10);
    if (qr.rank() < d) throw degeneracy_error("polytope is not pointed");
  }
  if (budget <= 0) budget = default_budget(d);

  SweepResult res;

  // Angles with an improving recession direction have no optimum. Each ray y
  // with nonzero plane component kills the open half circle around angle(Qy).
  std::vector<std::pair<double, double>> dead;
  for (const Vec& y : extreme_recession_rays(lp.A)) {
    const double qu = plane.u.dot(y);
    const double qv = plane.v.dot(y);
    if (std::hypot(qu, qv) <= 1e-12) continue;
    const double s = wrap0(std::atan2(qv, qu) - kPi / 2.0);
    dead.emplace_back(s, s + kPi);
  }
  bool full_circle = false;
  merge_circular_arcs(dead, full_circle);
  if (full_circle) {
    res.unbounded_arcs.emplace_back(0.0, kTwoPi);
    return res;
  }
  for (const auto& a : dead) {
    const double s = wrap0(a.first);
    res.unbounded_arcs.emplace_back(s, s + (a.second - a.first));
  }

  // Complement of the dead set: arcs on which the sweep runs.
  std::vector<std::pair<double, double>> live;
  if (dead.empty()) {
    live.emplace_back(0.0, kTwoPi);
  } else {
    for (std::size_t i = 0; i < dead.size(); ++i) {
      const double from = dead[i].second;
      const double to = i + 1 < dead.size() ? dead[i + 1].first : dead.front().first + kTwoPi;
      if (to > from + kAngleTie)
        live.emplace_back(from, to);
      else
        res.tie_flagged = true;
    }
  }

  long long budget_left = budget;
  RngStream crash_rng(0x73686164u, "sweep/crash");
  for (const auto& arc : live) {
    const double mid = 0.5 * (arc.first + arc.second);
    LinearProgram lpm = lp;
    lpm.z = std::cos(mid) * plane.u + std::sin(mid) * plane.v;

    auto init = find_initial_vertex(lpm, crash_rng);
    if (init.status == PhaseOneStatus::infeasible) throw input_error("empty polytope");
    if (init.status == PhaseOneStatus::not_pointed)
      throw degeneracy_error("polytope is not pointed");

    GreedyRule greedy;
    SolveResult sol = solve_with_rule(lpm, init.basis, greedy, budget_left);
    budget_left -= sol.walk.pivot_count;
    if (sol.walk.terminated == WalkTermination::budget_exhausted) {
      res.budget_exhausted = true;
      continue;
    }
    if (sol.walk.terminated == WalkTermination::unbounded) {
      res.tie_flagged = true;  // numerically inside the dead set boundary
      continue;
    }

    BasisState st = make_basis_state(lp, sol.optimum.tight_rows);
    std::vector<ShadowArc> down, up;
    const bool ok_down = sweep_dir(lp, plane.u, plane.v, st, mid, arc.first, /*forward=*/false,
                                   down, budget_left, res);
    const bool ok_up =
        ok_down && sweep_dir(lp, plane.u, plane.v, st, mid, arc.second, /*forward=*/true, up,
                             budget_left, res);
    std::reverse(down.begin(), down.end());
    if (!down.empty() && !up.empty() && down.back().basis.tight_rows == up.front().basis.tight_rows) {
      down.back().theta_end = up.front().theta_end;
      up.erase(up.begin());
    }
    const double shift = wrap0(arc.first) - arc.first;
    for (auto* part : {&down, &up}) {
      for (auto& a : *part) {
        a.theta_start += shift;
        a.theta_end += shift;
        res.shadow_vertices.push_back(std::move(a));
      }
    }
    if (!ok_up) break;
  }

  std::set<std::vector<int>> distinct;
  for (const auto& a : res.shadow_vertices) distinct.insert(a.basis.tight_rows);
  res.total_count = static_cast<int>(distinct.size());
  return res;
}

}  // namespace shadowbench
