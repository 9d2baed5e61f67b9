#include "shadowbench/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <type_traits>

#include "shadowbench/combinatorics.hpp"
#include "shadowbench/ensembles.hpp"
#include "shadowbench/exact_det.hpp"
#include "shadowbench/geometry.hpp"
#include "shadowbench/rng.hpp"
#include "shadowbench/sampling.hpp"
#include "shadowbench/shadow.hpp"
#include "shadowbench/simplex.hpp"
#include "shadowbench/svd.hpp"
#include "shadowbench/version.hpp"

namespace shadowbench {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPiLocal = 6.283185307179586476925287;

void require(bool cond, const std::string& msg) {
  if (!cond) throw config_error(msg);
}

std::string fd(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fg(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string fi(long long v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

std::string join_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += fg(xs[i]);
  }
  return s;
}

/// Runs fn(0..count-1) on a small pool; results land at their own index, so
/// output is identical at any thread count. The first exception wins.
template <class Fn>
auto parallel_map(long long count, int threads, Fn&& fn) {
  using Row = std::invoke_result_t<Fn&, long long>;
  std::vector<Row> rows(static_cast<std::size_t>(count));
  if (count == 0) return rows;
  threads = static_cast<int>(std::clamp<long long>(threads, 1, std::min<long long>(count, 128)));

  std::atomic<long long> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto work = [&] {
    while (true) {
      const long long i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        rows[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::scoped_lock lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(count, std::memory_order_relaxed);
        return;
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

RngStream trial_stream(const ExperimentConfig& cfg, const char* name, long long index) {
  return RngStream(cfg.master_seed, std::string(name) + "/trial/" + std::to_string(index));
}

std::vector<Vec> centers_for(const ExperimentConfig& cfg, const char* name) {
  if (!cfg.centers_path.empty()) {
    try {
      return load_centers(cfg.centers_path, cfg.n, cfg.d);
    } catch (const input_error& e) {
      throw config_error(e.what());
    }
  }
  RngStream cs(cfg.master_seed, std::string(name) + "/centers");
  return unit_sphere_centers(cfg.n, cfg.d, cs);
}

Plane axis_plane(int d) {
  Vec e1 = Vec::Zero(d);
  Vec e2 = Vec::Zero(d);
  e1[0] = 1.0;
  e2[1] = 1.0;
  return plane_from_span(e1, e2);
}

Vec normal_vec(RngStream& rng, int d) {
  Vec g(d);
  for (int i = 0; i < d; ++i) g[i] = rng.next_normal();
  return g;
}

bool integral_entries(const Mat& A) {
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      if (A(i, j) != std::floor(A(i, j))) return false;
  return true;
}

}  // namespace

ExperimentReport run_section_size(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 16;
  if (cfg.d == 0) cfg.d = 3;
  if (cfg.sigma == 0.0) cfg.sigma = 0.04;
  if (cfg.trials == 0) cfg.trials = 200;
  require(cfg.d >= 3 && cfg.d <= 6, "section-size needs d in [3, 6]");
  require(cfg.n >= cfg.d + 1, "section-size needs n >= d + 1");
  require(cfg.n <= 512, "section-size needs n <= 512");
  require(cfg.sigma > 0.0, "section-size needs sigma > 0");
  require(cfg.trials >= 1 && cfg.trials <= 1'000'000, "section-size trials out of range");
  require(binomial_capped(cfg.n, cfg.d, static_cast<long long>(kDefaultSubsetBudget)) <=
              static_cast<long long>(kDefaultSubsetBudget),
          "facet subset budget exceeded, shrink n or d");

  SmoothedPolytopeSpec spec{cfg.n, cfg.d, cfg.sigma, centers_for(cfg, "section-size"),
                            cfg.master_seed};
  spec.validate();
  const bool sigma_valid = spec.sigma_within_cap();
  const Plane fixed_plane = axis_plane(cfg.d);

  struct Row {
    double edges = kNan, perim = kNan, maxn = kNan;
    bool empty = false, merged = false, error = false;
  };
  auto rows = parallel_map(cfg.trials, cfg.threads, [&](long long i) {
    RngStream rng = trial_stream(cfg, "section-size", i);
    Row r;
    try {
      VPolytope K = sample_smoothed_polytope(spec, rng);
      r.maxn = K.max_generator_norm();
      Plane E = fixed_plane;
      if (cfg.random_plane) {
        const Vec g1 = normal_vec(rng, cfg.d);
        const Vec g2 = normal_vec(rng, cfg.d);
        E = plane_from_span(g1, g2);
      }
      SectionResult s = section_polygon(K, E);
      r.edges = polygon_edge_count(s.polygon);
      r.empty = s.empty();
      r.perim = perimeter(s.polygon);
      r.merged = s.merged_vertices > 0;
    } catch (const budget_error&) {
      r.error = true;
    } catch (const degeneracy_error&) {
      r.error = true;
    } catch (const input_error&) {
      r.error = true;
    }
    return r;
  });

  std::string csv =
      "trial,seed_index,n,d,sigma,sigma_valid,edges,empty,perimeter,max_norm,degenerate_flags\n";
  std::vector<double> edges, edges_nonempty;
  long long empty_count = 0, error_count = 0, merged_count = 0, violations = 0;
  for (long long i = 0; i < cfg.trials; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    if (!r.error) {
      edges.push_back(r.edges);
      if (r.empty)
        ++empty_count;
      else
        edges_nonempty.push_back(r.edges);
      if (r.perim > kTwoPiLocal * r.maxn * (1.0 + 1e-12) + 1e-12) ++violations;
      if (r.merged) ++merged_count;
    } else {
      ++error_count;
    }
    const int flags = (r.merged ? 1 : 0) | (r.error ? 2 : 0);
    csv += join({fi(i), fi(i), fi(cfg.n), fi(cfg.d), fd(cfg.sigma), fi(sigma_valid ? 1 : 0),
                 fd(r.edges), fi(r.empty ? 1 : 0), fd(r.perim), fd(r.maxn), fi(flags)});
  }

  ExperimentReport rep;
  rep.csv = std::move(csv);
  rep.stats = summarize(edges);
  rep.stats.violation_count = violations;
  rep.stats.flags.degeneracies = merged_count;
  rep.stats.flags.empty_sections = empty_count;
  rep.stats.flags.budget_exhaustions = error_count;
  const TrialStats ne = summarize(edges_nonempty);
  rep.metrics["mean_edges"] = rep.stats.mean;
  rep.metrics["se_edges"] = rep.stats.std_error;
  rep.metrics["mean_edges_nonempty"] = ne.mean;
  rep.metrics["empty_count"] = static_cast<double>(empty_count);
  rep.metrics["error_count"] = static_cast<double>(error_count);
  rep.metrics["perimeter_violations"] = static_cast<double>(violations);
  rep.metrics["sigma_valid"] = sigma_valid ? 1.0 : 0.0;

  std::ostringstream sum;
  sum << "section-size: n=" << cfg.n << " d=" << cfg.d << " sigma=" << fg(cfg.sigma)
      << " trials=" << cfg.trials << " plane=" << (cfg.random_plane ? "random" : "span(e1,e2)")
      << " sigma_within_cap=" << (sigma_valid ? "yes" : "no") << "\n";
  sum << "mean edges (empty counted as 0) = " << fg(rep.stats.mean) << " +- "
      << fg(rep.stats.std_error) << "; nonempty mean = " << fg(ne.mean)
      << "; empty = " << empty_count << "; flagged rows = " << error_count << "\n";
  sum << "perimeter > 2*pi*max_norm violations = " << violations << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_shadow_walk(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 10;
  if (cfg.d == 0) cfg.d = 2;
  if (cfg.sigma == 0.0) cfg.sigma = 0.05;
  if (cfg.trials == 0) cfg.trials = 500;
  require(cfg.d >= 2 && cfg.d <= 4, "shadow-walk needs d in [2, 4]");
  require(cfg.n >= cfg.d + 1, "shadow-walk needs n >= d + 1");
  require(cfg.n <= 30, "shadow-walk needs n <= 30");
  require(cfg.sigma > 0.0, "shadow-walk needs sigma > 0");
  require(cfg.trials >= 1 && cfg.trials <= 100'000, "shadow-walk trials out of range");

  SmoothedPolytopeSpec spec{cfg.n, cfg.d, cfg.sigma, centers_for(cfg, "shadow-walk"),
                            cfg.master_seed};
  spec.validate();

  struct Row {
    bool feasible = false, bounded = false, measured = false, flagged = false;
    double pivots = kNan;
  };
  // Attempts run in fixed blocks until enough attempts were measurable, so
  // the attempt set (and the CSV) does not depend on the thread count.
  const long long block = 512;
  const long long max_attempts = std::max<long long>(1024, 200 * cfg.trials);
  std::vector<Row> rows;
  long long eligible = 0;
  while (static_cast<long long>(rows.size()) < max_attempts && eligible < cfg.trials) {
    const long long start = static_cast<long long>(rows.size());
    const long long count = std::min(block, max_attempts - start);
    auto part = parallel_map(count, cfg.threads, [&](long long k) {
      const long long i = start + k;
      RngStream rng = trial_stream(cfg, "shadow-walk", i);
      Row r;
      try {
        VPolytope K = sample_smoothed_polytope(spec, rng);
        LinearProgram lp = LinearProgram::canonical(K.points, Vec::Zero(cfg.d));
        lp = haimovich_flip(lp, rng);
        const Vec z0 = unit_sphere_point(rng, cfg.d);
        lp.z = unit_sphere_point(rng, cfg.d);

        LinearProgram lp0 = lp;
        lp0.z = z0;
        auto init = find_initial_vertex(lp0, rng);
        if (init.status == PhaseOneStatus::infeasible) return r;
        if (init.status == PhaseOneStatus::not_pointed) {
          r.flagged = true;
          return r;
        }
        r.feasible = true;

        GreedyRule greedy;
        SolveResult opt0 = solve_with_rule(lp0, init.basis, greedy, cfg.budget);
        if (opt0.walk.terminated != WalkTermination::optimal) {
          r.flagged = opt0.walk.terminated == WalkTermination::budget_exhausted;
          return r;
        }
        WalkRecord path = shadow_path(lp, z0, opt0.optimum, cfg.budget);
        if (path.terminated != WalkTermination::optimal) {
          r.flagged = path.terminated == WalkTermination::budget_exhausted;
          return r;
        }
        r.bounded = true;
        r.pivots = path.pivot_count;
      } catch (const degeneracy_error&) {
        r.flagged = true;
      } catch (const input_error&) {
        r.flagged = true;
      }
      return r;
    });
    for (auto& r : part) {
      if (r.feasible && r.bounded) ++eligible;
      rows.push_back(std::move(r));
    }
  }
  if (eligible < cfg.trials)
    throw budget_error("could not reach the requested number of measurable flip trials");

  std::string csv = "trial,seed_index,n,d,sigma,feasible,bounded,pivots,measured,flagged\n";
  std::vector<double> pivots;
  long long infeasible = 0, flagged = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Row& r = rows[i];
    if (r.feasible && r.bounded && static_cast<long long>(pivots.size()) < cfg.trials) {
      r.measured = true;
      pivots.push_back(r.pivots);
    }
    if (!r.feasible) ++infeasible;
    if (r.flagged) ++flagged;
    csv += join({fi(static_cast<long long>(i)), fi(static_cast<long long>(i)), fi(cfg.n),
                 fi(cfg.d), fd(cfg.sigma), fi(r.feasible ? 1 : 0), fi(r.bounded ? 1 : 0),
                 fd(r.pivots), fi(r.measured ? 1 : 0), fi(r.flagged ? 1 : 0)});
  }

  ExperimentReport rep;
  rep.csv = std::move(csv);
  rep.stats = summarize(pivots);
  rep.stats.flags.degeneracies = flagged;
  const double proxy = cfg.d / 2.0;
  rep.metrics["mean_pivots"] = rep.stats.mean;
  rep.metrics["se_pivots"] = rep.stats.std_error;
  rep.metrics["reference_half_d"] = proxy;
  rep.metrics["attempts"] = static_cast<double>(rows.size());
  rep.metrics["measured"] = static_cast<double>(pivots.size());
  rep.metrics["infeasible"] = static_cast<double>(infeasible);

  std::ostringstream sum;
  sum << "shadow-walk: n=" << cfg.n << " d=" << cfg.d << " sigma=" << fg(cfg.sigma)
      << " measured=" << pivots.size() << " of " << rows.size() << " attempts (" << infeasible
      << " infeasible flips)\n";
  sum << "mean rotation-path pivots = " << fg(rep.stats.mean) << " +- " << fg(rep.stats.std_error)
      << "; reference value d/2 = " << fg(proxy) << "\n";
  sum << "caveat: proxy measurement; pivot counts of the rotation path on feasible flipped "
         "instances, which is not the same path convention the d/2 reference counts\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_km(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.d == 0) cfg.d = 8;
  KleeMintySpec spec{cfg.d, cfg.epsilon};
  try {
    spec.validate();
  } catch (const input_error& e) {
    throw config_error(e.what());
  }

  KleeMintyInstance inst = klee_minty(spec);
  LeastImprovementRule rule;
  SolveResult res = solve_with_rule(inst.lp, inst.start, rule, cfg.budget);

  const long long expected_pivots = (1LL << cfg.d) - 1;
  std::set<std::vector<int>> bases;
  for (const auto& v : res.walk.vertices) bases.insert(v.tight_rows);
  const long long distinct = static_cast<long long>(bases.size());

  const bool ok = res.walk.terminated == WalkTermination::optimal &&
                  res.walk.pivot_count == expected_pivots && distinct == expected_pivots + 1 &&
                  std::abs(res.objective - 1.0) <= 1e-9 &&
                  res.walk.validate(cfg.d);

  ExperimentReport rep;
  rep.pass = ok;
  rep.csv =
      "d,epsilon,pivots,distinct_vertices,expected_pivots,expected_vertices,objective,pass\n" +
      join({fi(cfg.d), fd(cfg.epsilon), fi(res.walk.pivot_count), fi(distinct),
            fi(expected_pivots), fi(expected_pivots + 1), fd(res.objective), fi(ok ? 1 : 0)});
  rep.stats = summarize({static_cast<double>(res.walk.pivot_count)});
  rep.metrics["pivots"] = res.walk.pivot_count;
  rep.metrics["distinct_vertices"] = static_cast<double>(distinct);
  rep.metrics["expected_pivots"] = static_cast<double>(expected_pivots);
  rep.metrics["objective"] = res.objective;
  rep.metrics["pass"] = ok ? 1.0 : 0.0;

  std::ostringstream sum;
  sum << "km-cube: d=" << cfg.d << " epsilon=" << fg(cfg.epsilon) << ": "
      << res.walk.pivot_count << " pivots (expected " << expected_pivots << "), " << distinct
      << " distinct vertices (expected " << expected_pivots + 1 << "), objective "
      << fg(res.objective) << " -> " << (ok ? "PASS" : "FAIL") << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_sv_tail(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 50;
  if (cfg.trials == 0) cfg.trials = 20'000;
  if (cfg.sigma == 0.0) cfg.sigma = 1.0;
  if (cfg.eps_list.empty()) cfg.eps_list = {0.05, 0.1, 0.2};
  require(cfg.n >= 2 && cfg.n <= 200, "sv-tail needs n in [2, 200]");
  require(cfg.trials >= 1000, "sv-tail needs at least 10^3 trials");
  require(cfg.sigma > 0.0, "sv-tail needs sigma > 0");
  for (double e : cfg.eps_list) require(e >= 0.0, "sv-tail eps values must be >= 0");
  const EnsembleKind kind = ensemble_kind_from(cfg.ensemble);

  MatrixEnsembleSpec ms;
  ms.kind = kind;
  ms.m = cfg.n;
  ms.n = cfg.n;
  ms.sigma = cfg.sigma;
  if (cfg.center_value != 0.0) ms.center = Mat::Constant(cfg.n, cfg.n, cfg.center_value);

  struct Row {
    double lmin = kNan;
    int exact_singular = 0;  // only meaningful for integer-entry draws
  };
  auto rows = parallel_map(cfg.trials, cfg.threads, [&](long long i) {
    RngStream rng = trial_stream(cfg, "sv-tail", i);
    Row r;
    const Mat A = ensemble_matrix(ms, rng);
    r.lmin = singular_values(A).lambda_min;
    if (cfg.n <= 64 && integral_entries(A)) {
      MatI64 M(cfg.n, cfg.n);
      for (Index a = 0; a < A.rows(); ++a)
        for (Index b = 0; b < A.cols(); ++b) M(a, b) = static_cast<long long>(A(a, b));
      r.exact_singular = exact_integer_is_singular(M) ? 1 : 0;
    }
    return r;
  });

  std::string csv = "trial,seed_index,n,ensemble,sigma,center_value,lambda_min,exact_singular\n";
  std::vector<double> lmin;
  lmin.reserve(rows.size());
  long long exact_singular_count = 0;
  for (long long i = 0; i < cfg.trials; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    lmin.push_back(r.lmin);
    exact_singular_count += r.exact_singular;
    csv += join({fi(i), fi(i), fi(cfg.n), cfg.ensemble, fd(cfg.sigma), fd(cfg.center_value),
                 fd(r.lmin), fi(r.exact_singular)});
  }

  ExperimentReport rep;
  rep.csv = std::move(csv);
  rep.stats = summarize(lmin);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n));
  const bool integer_law = kind == EnsembleKind::rademacher && cfg.center_value == 0.0 &&
                           cfg.sigma == std::floor(cfg.sigma) && cfg.n <= 64;

  std::ostringstream sum;
  sum << "sv-tail: n=" << cfg.n << " ensemble=" << cfg.ensemble << " sigma=" << fg(cfg.sigma)
      << " center=" << fg(cfg.center_value) << " trials=" << cfg.trials << "\n";
  long long violations = 0;
  for (double eps : cfg.eps_list) {
    double freq;
    if (eps == 0.0 && integer_law) {
      freq = static_cast<double>(exact_singular_count) / static_cast<double>(cfg.trials);
    } else {
      long long hits = 0;
      for (double v : lmin) hits += v <= eps * scale ? 1 : 0;
      freq = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    }
    const double se = bernoulli_std_error(freq, cfg.trials);
    const double sst = kind == EnsembleKind::gaussian ? 1.823 * eps / cfg.sigma : kNan;
    if (std::isfinite(sst) && freq > sst + 3.0 * se) ++violations;
    rep.metrics["freq@" + fg(eps)] = freq;
    rep.metrics["se@" + fg(eps)] = se;
    rep.metrics["sst@" + fg(eps)] = sst;
    sum << "P(lambda_min <= " << fg(eps) << " * n^-1/2) = " << fg(freq) << " +- " << fg(se);
    if (std::isfinite(sst)) sum << "; shifted-matrix bound 1.823*eps/sigma = " << fg(sst);
    sum << "\n";
  }
  rep.stats.violation_count = violations;
  rep.metrics["exact_singular_count"] = static_cast<double>(exact_singular_count);
  sum << "bound violations = " << violations << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_sv_bounds(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 400;
  if (cfg.d == 0) cfg.d = 100;
  if (cfg.trials == 0) cfg.trials = 200;
  if (cfg.t_list.empty()) cfg.t_list = {2.0};
  require(cfg.n >= 1 && cfg.d >= 1 && cfg.n >= cfg.d, "sv-bounds needs n >= d >= 1");
  require(cfg.d <= 1000, "sv-bounds needs d <= 1000");
  require(cfg.trials >= 100, "sv-bounds needs at least 100 trials");
  for (double t : cfg.t_list) require(t >= 0.0, "sv-bounds t values must be >= 0");
  const EnsembleKind kind = ensemble_kind_from(cfg.ensemble);

  MatrixEnsembleSpec ms;
  ms.kind = kind;
  ms.m = cfg.n;
  ms.n = cfg.d;
  ms.unit_variance = true;

  struct Row {
    double lmin = kNan, lmax = kNan;
  };
  auto rows = parallel_map(cfg.trials, cfg.threads, [&](long long i) {
    RngStream rng = trial_stream(cfg, "sv-bounds", i);
    const Mat A = ensemble_matrix(ms, rng);
    const SingularValueReport sv = singular_values(A);
    return Row{sv.lambda_min, sv.lambda_max};
  });

  const double sn = std::sqrt(static_cast<double>(cfg.n));
  const double sd = std::sqrt(static_cast<double>(cfg.d));
  std::string csv = "trial,seed_index,n,d,ensemble,lambda_min,lambda_max,sqrt_n_lambda_min,"
                    "ratio_vs_window_floor\n";
  std::vector<double> lmin, lmax, scaled;
  for (long long i = 0; i < cfg.trials; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    lmin.push_back(r.lmin);
    lmax.push_back(r.lmax);
    scaled.push_back(sn * r.lmin);
    const double ratio = cfg.n > cfg.d ? r.lmin / (sn - sd) : kNan;
    csv += join({fi(i), fi(i), fi(cfg.n), fi(cfg.d), cfg.ensemble, fd(r.lmin), fd(r.lmax),
                 fd(sn * r.lmin), fd(ratio)});
  }

  ExperimentReport rep;
  rep.csv = std::move(csv);
  rep.stats = summarize(lmin);
  const TrialStats smax = summarize(lmax);
  const TrialStats sscaled = summarize(scaled);

  std::ostringstream sum;
  sum << "sv-bounds: " << cfg.n << " x " << cfg.d << " " << cfg.ensemble << " (unit variance), "
      << cfg.trials << " trials\n";
  sum << "mean lambda_min = " << fg(rep.stats.mean) << ", mean lambda_max = " << fg(smax.mean)
      << ", window [" << fg(sn - sd) << ", " << fg(sn + sd) << "]\n";
  long long violations = 0;
  for (double t : cfg.t_list) {
    long long ex = 0;
    for (std::size_t i = 0; i < lmin.size(); ++i)
      ex += (lmax[i] > sn + sd + t || lmin[i] < sn - sd - t) ? 1 : 0;
    const double freq = static_cast<double>(ex) / static_cast<double>(cfg.trials);
    const double se = bernoulli_std_error(freq, cfg.trials);
    const double bound = 2.0 * std::exp(-t * t / 2.0);
    if (freq > bound + 3.0 * se) ++violations;
    rep.metrics["exceed@" + fg(t)] = freq;
    rep.metrics["se@" + fg(t)] = se;
    rep.metrics["bound@" + fg(t)] = bound;
    sum << "t=" << fg(t) << ": window exceedance " << fg(freq) << " +- " << fg(se)
        << " vs 2*exp(-t^2/2) = " << fg(bound) << "\n";
  }
  rep.stats.violation_count = violations;
  rep.metrics["mean_lambda_min"] = rep.stats.mean;
  rep.metrics["mean_lambda_max"] = smax.mean;
  rep.metrics["window_lo"] = sn - sd;
  rep.metrics["window_hi"] = sn + sd;
  rep.metrics["median_sqrt_n_lambda_min"] = sscaled.q50;
  sum << "median sqrt(n)*lambda_min = " << fg(sscaled.q50) << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_singularity(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 3;
  std::string mode = cfg.mode;
  if (mode == "auto") mode = cfg.n <= 4 || (cfg.n == 5 && cfg.long_run) ? "exact" : "mc";
  require(mode == "exact" || mode == "mc", "singularity mode must be exact, mc, or auto");

  ExperimentReport rep;
  if (mode == "exact") {
    require(cfg.n >= 1 && (cfg.n <= 4 || (cfg.n == 5 && cfg.long_run)),
            "exact enumeration supports n <= 4 (n = 5 behind --long-run); use mode=mc");
    // Row and column sign flips act freely on sign matrices modulo the global
    // flip and preserve singularity, so it is enough to enumerate matrices
    // with first row and first column fixed to +1: each stands for an orbit
    // of 2^(2n-1) matrices.
    const int m = cfg.n - 1;
    const long long reps = 1LL << (m * m);
    long long singular_reps = 0;
    auto counts = parallel_map(reps, cfg.threads, [&](long long mask) -> long long {
      MatI64 M = MatI64::Constant(cfg.n, cfg.n, 1);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          M(i + 1, j + 1) = (mask >> (i * m + j)) & 1 ? 1 : -1;
      return exact_integer_det(M) == 0 ? 1 : 0;
    });
    for (long long c : counts) singular_reps += c;
    const long long orbit = 1LL << (2 * cfg.n - 1);
    const long long singular = singular_reps * orbit;
    const long long total = 1LL << (cfg.n * cfg.n);
    const double prob = static_cast<double>(singular) / static_cast<double>(total);

    rep.csv = "n,mode,total,singular,probability\n" +
              join({fi(cfg.n), "exact", fi(total), fi(singular), fd(prob)});
    rep.stats = summarize({prob});
    rep.metrics["probability"] = prob;
    rep.metrics["singular"] = static_cast<double>(singular);
    rep.metrics["total"] = static_cast<double>(total);
    std::ostringstream sum;
    sum << "singularity (exact): n=" << cfg.n << ": " << singular << " of " << total
        << " sign matrices are singular, p = " << fg(prob) << "\n";
    rep.summary = sum.str();
    rep.resolved = cfg;
    return rep;
  }

  if (cfg.trials == 0) cfg.trials = 100'000;
  require(cfg.n >= 1 && cfg.n <= 50, "Monte Carlo singularity needs n in [1, 50]");
  require(cfg.trials >= 100, "Monte Carlo singularity needs at least 100 trials");

  auto rows = parallel_map(cfg.trials, cfg.threads, [&](long long i) -> int {
    RngStream rng = trial_stream(cfg, "singularity", i);
    MatI64 M(cfg.n, cfg.n);
    for (Index a = 0; a < cfg.n; ++a)
      for (Index b = 0; b < cfg.n; ++b) M(a, b) = rng.next_bit() ? 1 : -1;
    return exact_integer_is_singular(M) ? 1 : 0;
  });

  std::string csv = "trial,seed_index,n,singular\n";
  std::vector<double> vals;
  vals.reserve(rows.size());
  long long hits = 0;
  for (long long i = 0; i < cfg.trials; ++i) {
    const int s = rows[static_cast<std::size_t>(i)];
    hits += s;
    vals.push_back(s);
    csv += join({fi(i), fi(i), fi(cfg.n), fi(s)});
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(cfg.trials);
  const double se = bernoulli_std_error(freq, cfg.trials);

  rep.csv = std::move(csv);
  rep.stats = summarize(vals);
  rep.metrics["frequency"] = freq;
  rep.metrics["se"] = se;
  rep.metrics["singular"] = static_cast<double>(hits);
  std::ostringstream sum;
  sum << "singularity (Monte Carlo): n=" << cfg.n << " trials=" << cfg.trials
      << ": frequency = " << fg(freq) << " +- " << fg(se) << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_submatrix_min(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 12;
  if (cfg.d == 0) cfg.d = 4;
  if (cfg.trials == 0) cfg.trials = 100;
  require(cfg.n >= cfg.d && cfg.d >= 1, "submatrix-min needs n >= d >= 1");
  require(cfg.trials >= 1 && cfg.trials <= 1000, "submatrix-min trials must be in [1, 1000]");
  require(binomial_capped(cfg.n, cfg.d, 100'000) <= 100'000,
          "submatrix-min needs C(n, d) <= 10^5");
  const EnsembleKind kind = ensemble_kind_from(cfg.ensemble);

  MatrixEnsembleSpec ms;
  ms.kind = kind;
  ms.m = cfg.n;
  ms.n = cfg.d;
  ms.unit_variance = true;

  auto rows = parallel_map(cfg.trials, cfg.threads, [&](long long i) -> double {
    RngStream rng = trial_stream(cfg, "submatrix-min", i);
    const Mat A = ensemble_matrix(ms, rng);
    double best = std::numeric_limits<double>::infinity();
    Mat sub(cfg.d, cfg.d);
    CombinationIter it(cfg.n, cfg.d);
    do {
      for (int r = 0; r < cfg.d; ++r) sub.row(r) = A.row(it.idx[static_cast<std::size_t>(r)]);
      best = std::min(best, singular_values(sub).lambda_min);
    } while (it.next());
    return best;
  });

  const double sn = std::sqrt(static_cast<double>(cfg.n));
  std::string csv = "trial,seed_index,n,d,ensemble,min_lambda_min,sqrt_n_scaled,collapsed\n";
  std::vector<double> scaled;
  long long collapsed = 0;
  for (long long i = 0; i < cfg.trials; ++i) {
    const double v = rows[static_cast<std::size_t>(i)];
    scaled.push_back(sn * v);
    const bool c = v < 1e-12;
    collapsed += c ? 1 : 0;
    csv += join({fi(i), fi(i), fi(cfg.n), fi(cfg.d), cfg.ensemble, fd(v), fd(sn * v),
                 fi(c ? 1 : 0)});
  }

  ExperimentReport rep;
  rep.csv = std::move(csv);
  rep.stats = summarize(scaled);
  rep.stats.violation_count = collapsed;
  rep.stats.flags.degeneracies = collapsed;
  rep.metrics["mean_sqrt_n_scaled"] = rep.stats.mean;
  rep.metrics["collapsed"] = static_cast<double>(collapsed);

  std::ostringstream sum;
  sum << "submatrix-min: " << cfg.n << " x " << cfg.d << " " << cfg.ensemble << ", "
      << cfg.trials << " trials, C(n,d) submatrices each\n";
  sum << "sqrt(n) * min lambda_min: mean = " << fg(rep.stats.mean) << ", q5/q50/q95 = "
      << fg(rep.stats.q5) << "/" << fg(rep.stats.q50) << "/" << fg(rep.stats.q95)
      << ", collapsed (< 1e-12) = " << collapsed << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_diameter(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  if (cfg.n == 0) cfg.n = 8;
  if (cfg.d == 0) cfg.d = 3;
  if (cfg.sigma == 0.0) cfg.sigma = 0.05;
  if (cfg.trials == 0) cfg.trials = 50;
  require(cfg.d >= 3 && cfg.d <= 4, "diameter needs d in [3, 4]");
  require(cfg.n >= cfg.d + 1, "diameter needs n >= d + 1");
  require(cfg.n <= 14, "diameter needs n <= 14");
  require(cfg.sigma > 0.0, "diameter needs sigma > 0");
  require(cfg.trials >= 1 && cfg.trials <= 100'000, "diameter trials out of range");

  SmoothedPolytopeSpec spec{cfg.n, cfg.d, cfg.sigma, centers_for(cfg, "diameter"),
                            cfg.master_seed};
  spec.validate();

  struct Row {
    bool ok = false;
    double diam = kNan;
  };
  auto rows = parallel_map(cfg.trials, cfg.threads, [&](long long i) {
    RngStream rng = trial_stream(cfg, "diameter", i);
    Row r;
    try {
      VPolytope K = sample_smoothed_polytope(spec, rng);
      const FacetList facets = enumerate_facets(K);
      const double tol = 1e-9 * (1.0 + K.max_generator_norm());
      bool interior = !facets.facets.empty();
      for (const Facet& f : facets.facets)
        if (f.offset < tol) interior = false;
      if (!interior) return r;  // 0 outside the hull: the dual is unbounded
      HPolytope P{K.points, Vec::Ones(cfg.n)};
      r.diam = graph_diameter(vertex_edge_graph(P));
      r.ok = true;
    } catch (const budget_error&) {
    } catch (const degeneracy_error&) {
    } catch (const unbounded_error&) {
    }
    return r;
  });

  const double hirsch = cfg.n - cfg.d;
  const double kalai = std::pow(cfg.n, std::log2(static_cast<double>(cfg.d)) + 2.0);
  std::string csv = "trial,seed_index,n,d,sigma,ok,diameter,hirsch_ref,kalai_ref\n";
  std::vector<double> diams;
  long long skipped = 0, violations = 0;
  for (long long i = 0; i < cfg.trials; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    if (r.ok) {
      diams.push_back(r.diam);
      if (r.diam > hirsch) ++violations;
    } else {
      ++skipped;
    }
    csv += join({fi(i), fi(i), fi(cfg.n), fi(cfg.d), fd(cfg.sigma), fi(r.ok ? 1 : 0), fd(r.diam),
                 fd(hirsch), fd(kalai)});
  }

  ExperimentReport rep;
  rep.csv = std::move(csv);
  rep.stats = summarize(diams);
  rep.stats.violation_count = violations;
  rep.stats.flags.degeneracies = skipped;
  rep.metrics["mean_diameter"] = rep.stats.mean;
  rep.metrics["measured"] = static_cast<double>(diams.size());
  rep.metrics["skipped"] = static_cast<double>(skipped);
  rep.metrics["hirsch_ref"] = hirsch;
  rep.metrics["kalai_ref"] = kalai;

  std::ostringstream sum;
  sum << "diameter: n=" << cfg.n << " d=" << cfg.d << " sigma=" << fg(cfg.sigma) << ": measured "
      << diams.size() << " of " << cfg.trials << " (skipped " << skipped
      << " without 0 strictly inside the hull)\n";
  sum << "mean diameter = " << fg(rep.stats.mean) << "; n - d = " << fg(hirsch)
      << "; n^(log2 d + 2) = " << fg(kalai) << "; diameters above n - d: " << violations << "\n";
  rep.summary = sum.str();
  rep.resolved = cfg;
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "section-size") return run_section_size(cfg);
  if (cfg.experiment == "shadow-walk") return run_shadow_walk(cfg);
  if (cfg.experiment == "km-cube") return run_km(cfg);
  if (cfg.experiment == "sv-tail") return run_sv_tail(cfg);
  if (cfg.experiment == "sv-bounds") return run_sv_bounds(cfg);
  if (cfg.experiment == "singularity") return run_singularity(cfg);
  if (cfg.experiment == "submatrix-min") return run_submatrix_min(cfg);
  if (cfg.experiment == "diameter") return run_diameter(cfg);
  throw config_error("unknown experiment: " + cfg.experiment);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(lineno) + " has no key");
    out[key] = val;
  }
  return out;
}

std::string manifest_text(const ExperimentConfig& cfg_in, const ExperimentReport& rep,
                          double duration_seconds) {
  // Echo the resolved config when the runner recorded one, so a manifest
  // never shows a 0 that actually meant "default".
  const ExperimentConfig& cfg = rep.resolved.experiment.empty() ? cfg_in : rep.resolved;
  std::ostringstream m;
  m << "experiment=" << cfg.experiment << "\n";
  m << "version=" << kVersion << "\n";
  m << "master_seed=" << cfg.master_seed << "\n";
  m << "n=" << cfg.n << "\nd=" << cfg.d << "\nsigma=" << fg(cfg.sigma)
    << "\ntrials=" << cfg.trials << "\nensemble=" << cfg.ensemble
    << "\nrandom_plane=" << (cfg.random_plane ? 1 : 0) << "\neps=" << join_list(cfg.eps_list)
    << "\nt=" << join_list(cfg.t_list) << "\nepsilon=" << fg(cfg.epsilon)
    << "\ncenter_value=" << fg(cfg.center_value) << "\nmode=" << cfg.mode
    << "\nlong_run=" << (cfg.long_run ? 1 : 0) << "\nbudget=" << cfg.budget
    << "\nthreads=" << cfg.threads << "\ncenters=" << cfg.centers_path
    << "\nout=" << cfg.out_path << "\n";
  m << "derivation=per-trial stream RngStream(master_seed, \"<experiment>/trial/<index>\"); "
       "center stream RngStream(master_seed, \"<experiment>/centers\")\n";
  std::istringstream lines(rep.summary);
  std::string line;
  while (std::getline(lines, line)) m << "# " << line << "\n";
  m << "duration_seconds=" << fg(duration_seconds) << "\n";
  return m.str();
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentReport& rep,
                   double duration_seconds) {
  if (cfg.out_path.empty()) return;
  {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw input_error("cannot write output file: " + cfg.out_path);
    out << rep.csv;
  }
  std::ofstream man(cfg.out_path + ".manifest", std::ios::binary);
  if (!man) throw input_error("cannot write manifest: " + cfg.out_path + ".manifest");
  man << manifest_text(cfg, rep, duration_seconds);
}

}  // namespace shadowbench
