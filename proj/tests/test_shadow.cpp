#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "shadowbench/geometry.hpp"
#include "shadowbench/rng.hpp"
#include "shadowbench/sampling.hpp"
#include "shadowbench/shadow.hpp"

using namespace shadowbench;

namespace {

constexpr double kTau = 6.283185307179586476925287;

LinearProgram box_lp(int d) {
  Mat A(2 * d, d);
  A << Mat::Identity(d, d), -Mat::Identity(d, d);
  return LinearProgram{A, Vec::Ones(2 * d), Vec::Zero(d)};
}

Plane first_two_axes(int d) {
  Vec e1 = Vec::Zero(d), e2 = Vec::Zero(d);
  e1[0] = 1.0;
  e2[1] = 1.0;
  return plane_from_span(e1, e2);
}

double arc_measure(const std::vector<std::pair<double, double>>& arcs) {
  double s = 0.0;
  for (const auto& [a, b] : arcs) s += b - a;
  return s;
}

}  // namespace

TEST_CASE("sweeping the square finds its four corners") {
  const auto res = shadow_sweep_count(box_lp(2), first_two_axes(2));
  CHECK(res.total_count == 4);
  CHECK(res.unbounded_arcs.empty());
  CHECK_FALSE(res.budget_exhausted);
  REQUIRE(res.shadow_vertices.size() >= 4);
  double covered = 0.0;
  for (const auto& arc : res.shadow_vertices) {
    CHECK(arc.theta_end >= arc.theta_start);
    covered += arc.theta_end - arc.theta_start;
  }
  CHECK(covered == doctest::Approx(kTau).epsilon(1e-9));
}

TEST_CASE("the cube shadow on an axis plane is the square") {
  const auto res = shadow_sweep_count(box_lp(3), first_two_axes(3));
  CHECK(res.total_count == 4);
  CHECK(res.unbounded_arcs.empty());
}

TEST_CASE("sweep count equals the section edge count on random instances") {
  RngStream master(53, "duality");
  int compared = 0;
  for (int t = 0; t < 40; ++t) {
    auto rng = master.derive(static_cast<std::uint64_t>(t));
    const int d = 3;
    const int n = 8;
    Mat P(n, d);
    for (Index i = 0; i < n; ++i) {
      Vec c = unit_sphere_point(rng, d);
      for (Index j = 0; j < d; ++j) P(i, j) = c[j] + 0.1 * rng.next_normal();
    }
    const VPolytope K{P, false};

    // need 0 strictly inside K so that the dual program is bounded
    bool interior = true;
    try {
      const auto fl = enumerate_facets(K);
      for (const auto& f : fl.facets) interior = interior && f.offset > 1e-7;
    } catch (const degeneracy_error&) {
      interior = false;
    }
    if (!interior) continue;

    Vec g1(d), g2(d);
    for (Index j = 0; j < d; ++j) g1[j] = rng.next_normal();
    for (Index j = 0; j < d; ++j) g2[j] = rng.next_normal();
    const Plane E = plane_from_span(g1, g2);

    const auto section = section_polygon(K, E);
    const LinearProgram lp = LinearProgram::canonical(P, Vec::Ones(d));
    const auto sweep = shadow_sweep_count(lp, E);
    if (sweep.tie_flagged || sweep.budget_exhausted || section.merged_vertices > 0) continue;
    CHECK(sweep.total_count == polygon_edge_count(section.polygon));
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("rotation path walks the cube between two objectives") {
  LinearProgram lp = box_lp(3);
  Vec z0(3), z(3);
  z0 << 1, 1, 1;
  z << -1.0, -0.8, 0.9;
  lp.z = z;
  const auto path = shadow_path(lp, z0, VertexBasis{{0, 1, 2}, Vec::Ones(3)});
  CHECK(path.terminated == WalkTermination::optimal);
  Vec want(3);
  want << -1, -1, 1;
  CHECK((path.vertices.back().x - want).norm() < 1e-9);
  CHECK(path.validate(3));
  CHECK(path.pivot_count == 2);  // sign flips of coordinates 1 and 2, in that order
  CHECK(path.vertices.size() == 3);
}

TEST_CASE("a start vertex that is not optimal for the start objective is rejected") {
  LinearProgram lp = box_lp(3);
  lp.z = Vec::Ones(3);
  Vec z0(3);
  z0 << -1, -1, -1;  // optimal vertex for z0 is -ones, not +ones
  CHECK_THROWS_AS(shadow_path(lp, z0, VertexBasis{{0, 1, 2}, Vec::Ones(3)}), input_error);
}

TEST_CASE("aligned objectives need no pivots") {
  LinearProgram lp = box_lp(3);
  lp.z = Vec::Ones(3) * 2.5;
  const auto path = shadow_path(lp, Vec::Ones(3), VertexBasis{{0, 1, 2}, Vec::Ones(3)});
  CHECK(path.terminated == WalkTermination::optimal);
  CHECK(path.pivot_count == 0);
  CHECK(path.vertices.size() == 1);
}

TEST_CASE("rotation path ends where greedy ends on random instances") {
  RngStream master(59, "path");
  int done = 0;
  for (int t = 0; t < 60 && done < 25; ++t) {
    auto rng = master.derive(static_cast<std::uint64_t>(t));
    const int d = 3;
    const int n = 9;
    const Mat A = gaussian_matrix(rng, n, d);
    const Vec z0 = unit_sphere_point(rng, d);
    const Vec z = unit_sphere_point(rng, d);
    LinearProgram lp = LinearProgram::canonical(A, z0);

    auto crash = rng.derive("crash");
    const auto init = find_initial_vertex(lp, crash);
    REQUIRE(init.status == PhaseOneStatus::found);
    GreedyRule greedy;
    const auto start = solve_with_rule(lp, init.basis, greedy, 100000);
    if (start.walk.terminated != WalkTermination::optimal) continue;

    lp.z = z;
    const auto target = solve_with_rule(lp, start.optimum, greedy, 100000);
    const auto path = shadow_path(lp, z0, start.optimum, 100000);
    if (target.walk.terminated == WalkTermination::unbounded) {
      CHECK(path.terminated == WalkTermination::unbounded);
      continue;
    }
    REQUIRE(path.terminated == WalkTermination::optimal);
    CHECK(std::abs(z.dot(path.vertices.back().x) - target.objective) <=
          1e-8 * (1.0 + std::abs(target.objective)));
    CHECK(path.validate(d));
    ++done;
  }
  CHECK(done >= 15);
}

TEST_CASE("recession rays of a translated orthant") {
  Mat A = Mat::Identity(3, 3);  // x <= b is recession-wise the negative orthant
  const auto rays = extreme_recession_rays(A);
  REQUIRE(rays.size() == 3);
  for (const auto& y : rays) {
    CHECK(y.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((A * y).maxCoeff() <= 1e-12);
    CHECK(y.minCoeff() == doctest::Approx(-1.0).epsilon(1e-12));  // each is -e_i
  }
  CHECK(extreme_recession_rays(Mat(box_lp(3).A)).empty());
}

TEST_CASE("sweep of an unbounded wedge reports dead arcs") {
  Mat A(2, 2);
  A << 1, 0, 0, 1;  // x1 <= 1, x2 <= 1
  const LinearProgram lp{A, Vec::Ones(2), Vec::Zero(2)};
  const auto res = shadow_sweep_count(lp, first_two_axes(2));
  CHECK(res.total_count == 1);  // only the corner (1, 1)
  CHECK(arc_measure(res.unbounded_arcs) == doctest::Approx(0.75 * kTau).epsilon(1e-9));
  double live = 0.0;
  for (const auto& arc : res.shadow_vertices) live += arc.theta_end - arc.theta_start;
  CHECK(live == doctest::Approx(kTau / 4.0).epsilon(1e-9));
}

TEST_CASE("sweep rejects a non-orthonormal plane") {
  Plane E;
  E.u = Vec::Zero(2);
  E.v = Vec::Zero(2);
  E.u[0] = 1.0;
  E.v[0] = 0.9;
  E.v[1] = 0.1;
  CHECK_THROWS_AS(shadow_sweep_count(box_lp(2), E), input_error);
}
