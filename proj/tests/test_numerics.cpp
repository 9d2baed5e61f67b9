#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "shadowbench/exact_det.hpp"
#include "shadowbench/rng.hpp"
#include "shadowbench/sampling.hpp"
#include "shadowbench/svd.hpp"

using namespace shadowbench;

TEST_CASE("streams replay exactly and separate by label and seed") {
  RngStream a(42, "alpha");
  RngStream a2(42, "alpha");
  for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == a2.next_u64());

  RngStream b(42, "beta");
  RngStream c(43, "alpha");
  RngStream a3(42, "alpha");
  int same_label = 0, same_seed = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = a3.next_u64();
    same_label += x == b.next_u64() ? 1 : 0;
    same_seed += x == c.next_u64() ? 1 : 0;
  }
  CHECK(same_label <= 1);
  CHECK(same_seed <= 1);
}

TEST_CASE("derived streams do not depend on the parent position") {
  RngStream parent(7, "root");
  const auto d1 = RngStream(7, "root").derive("x");
  parent.next_u64();
  parent.next_u64();
  auto d2 = parent.derive("x");
  auto d1c = d1;
  for (int i = 0; i < 32; ++i) CHECK(d1c.next_u64() == d2.next_u64());

  auto by_index = parent.derive(std::uint64_t{3});
  auto by_index2 = RngStream(7, "root").derive(std::uint64_t{3});
  for (int i = 0; i < 32; ++i) CHECK(by_index.next_u64() == by_index2.next_u64());
}

TEST_CASE("normal and uniform draws pass crude moment checks") {
  RngStream r(1, "moments");
  const int N = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = r.next_normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / N) < 0.02);
  CHECK(s2 / N == doctest::Approx(1.0).epsilon(0.03));

  double u = 0.0;
  long long pos = 0;
  for (int i = 0; i < N; ++i) {
    const double x = r.next_uniform_pm1();
    CHECK(x >= -1.0);
    CHECK(x <= 1.0);
    u += x * x;
    pos += r.next_sign() > 0 ? 1 : 0;
  }
  CHECK(u / N == doctest::Approx(1.0 / 3.0).epsilon(0.03));
  CHECK(std::abs(static_cast<double>(pos) / N - 0.5) < 0.01);
}

TEST_CASE("unit sphere points are unit and not axis-locked") {
  RngStream r(3, "sphere");
  Vec accum = Vec::Zero(5);
  for (int i = 0; i < 500; ++i) {
    const Vec p = unit_sphere_point(r, 5);
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
    accum += p;
  }
  CHECK(accum.norm() / 500.0 < 0.2);  // means shrink like 1/sqrt(count)
}

TEST_CASE("golden ratio singular values come out exactly") {
  Mat A(2, 2);
  A << 1, 1, 1, 0;
  const auto rep = singular_values(A);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(rep.lambda_max == doctest::Approx(phi).epsilon(1e-13));
  CHECK(rep.lambda_min == doctest::Approx(phi - 1.0).epsilon(1e-13));
  CHECK(rep.condition_number == doctest::Approx(phi / (phi - 1.0)).epsilon(1e-12));
  CHECK(rep.check_residual <= 1e-10);
}

TEST_CASE("singular values agree with an independent eigensolver") {
  RngStream r(5, "svd-x");
  const std::pair<int, int> shapes[] = {{5, 5}, {8, 3}, {3, 8}, {20, 20}, {40, 7}};
  for (const auto& [m, n] : shapes) {
    const Mat A = gaussian_matrix(r, m, n);
    const auto mine = singular_values(A);
    const Vec ref = sbtest::oracle_singular_values(A);
    REQUIRE(mine.values.size() == ref.size());
    for (Index i = 0; i < ref.size(); ++i)
      CHECK(mine.values[i] == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0 + ref[0]));
    CHECK(mine.lambda_max ==
          doctest::Approx(sbtest::oracle_power_lambda_max(A)).epsilon(1e-7));
    CHECK(mine.check_residual <= 1e-10);
  }
}

TEST_CASE("singular values are invariant under orthogonal maps") {
  RngStream r(11, "orth");
  const Mat A = gaussian_matrix(r, 7, 7);
  const Mat Q = Eigen::HouseholderQR<Mat>(gaussian_matrix(r, 7, 7)).householderQ();
  const auto sa = singular_values(A);
  const auto sqa = singular_values(Q * A);
  for (Index i = 0; i < sa.values.size(); ++i)
    CHECK(sa.values[i] == doctest::Approx(sqa.values[i]).epsilon(1e-8).scale(1.0 + sa.lambda_max));
}

TEST_CASE("tiny singular values survive bad conditioning") {
  Mat A = Mat::Identity(3, 3);
  A(2, 2) = 1e-13;
  A(0, 1) = 1.0;  // break the diagonal structure a little
  const auto rep = singular_values(A);
  const Vec ref = sbtest::oracle_singular_values(A);
  CHECK(rep.lambda_min == doctest::Approx(ref[2]).epsilon(1e-4).scale(1e-13));
  CHECK(rep.lambda_min > 0.0);
  CHECK(rep.lambda_min < 1e-12);
}

TEST_CASE("integer determinants match cofactor expansion on all 3x3 sign matrices") {
  long long singular = 0;
  for (int mask = 0; mask < 512; ++mask) {
    MatI64 M(3, 3);
    for (int i = 0; i < 9; ++i) M(i / 3, i % 3) = (mask >> i) & 1 ? 1 : -1;
    const long long want = sbtest::oracle_det_int(M);
    CHECK(exact_integer_det(M) == want);
    CHECK(exact_integer_is_singular(M) == (want == 0));
    singular += want == 0 ? 1 : 0;
  }
  CHECK(singular == 320);  // matches the exhaustive count
}

TEST_CASE("integer determinants match cofactor expansion on random 5x5 matrices") {
  RngStream r(17, "det5");
  for (int t = 0; t < 200; ++t) {
    MatI64 M(5, 5);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j)
        M(i, j) = static_cast<long long>(r.next_u64() % 19) - 9;
    CHECK(exact_integer_det(M) == sbtest::oracle_det_int(M));
  }
}

TEST_CASE("huge intermediate values fall back to exact wide arithmetic") {
  const long long big = 1'000'000'000;  // within the 2^30 entry bound
  MatI64 M = MatI64::Identity(16, 16) * big;
  M.array() += 1;  // diag big+1, off-diag 1: eigenvalues big (15x) and big+16
  CHECK_FALSE(exact_integer_is_singular(M));

  MatI64 S(16, 16);
  for (Index i = 0; i < 16; ++i)
    for (Index j = 0; j < 16; ++j) S(i, j) = ((i * 7 + j * 13) % 2 ? big : -big) + (i == j);
  S.row(15) = S.row(0);  // exact duplicate row
  CHECK(exact_integer_is_singular(S));
}

TEST_CASE("determinants too wide for the return type are reported") {
  MatI64 M = MatI64::Identity(3, 3) * (1LL << 30);  // det = 2^90
  CHECK_THROWS_AS(exact_integer_det(M), exact_overflow_error);
  CHECK_FALSE(exact_integer_is_singular(M));
}

TEST_CASE("real-entry determinant front end rejects non-integers") {
  Mat A(2, 2);
  A << 1.0, 2.0, 3.0, 4.5;
  CHECK_THROWS_AS(exact_integer_det(A), input_error);
  A(1, 1) = 4.0;
  CHECK(exact_integer_det(A) == -2);
}

TEST_CASE("sampling shapes and ranges") {
  RngStream r(23, "shapes");
  const Mat G = gaussian_matrix(r, 4, 6);
  CHECK(G.rows() == 4);
  CHECK(G.cols() == 6);
  const Mat R = rademacher_matrix(r, 5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) CHECK(std::abs(R(i, j)) == 1.0);
  const Mat U = uniform_matrix(r, 5, 5);
  CHECK((U.array().abs() <= 1.0).all());
}
