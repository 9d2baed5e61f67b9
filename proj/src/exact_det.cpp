#include "shadowbench/exact_det.hpp"

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace shadowbench {

namespace {

using i128 = __int128;

// Bareiss on a copy; every division is exact. Returns false when a product
// leaves the 128-bit range, in which case the caller retries in big integers.
bool bareiss_i128(std::vector<i128> a, int n, i128& det_out) {
  int sign = 1;
  i128 prev = 1;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int r = k; r < n; ++r) {
      if (a[static_cast<std::size_t>(r) * n + k] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) {
      det_out = 0;
      return true;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * n + j],
                  a[static_cast<std::size_t>(k) * n + j]);
      sign = -sign;
    }
    const i128 akk = a[static_cast<std::size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const i128 aik = a[static_cast<std::size_t>(i) * n + k];
      for (int j = k + 1; j < n; ++j) {
        i128 t1 = 0;
        i128 t2 = 0;
        if (__builtin_mul_overflow(a[static_cast<std::size_t>(i) * n + j], akk, &t1))
          return false;
        if (__builtin_mul_overflow(aik, a[static_cast<std::size_t>(k) * n + j], &t2))
          return false;
        i128 num = 0;
        if (__builtin_sub_overflow(t1, t2, &num)) return false;
        a[static_cast<std::size_t>(i) * n + j] = num / prev;
      }
      a[static_cast<std::size_t>(i) * n + k] = 0;
    }
    prev = akk;
  }
  det_out = sign * a[static_cast<std::size_t>(n - 1) * n + (n - 1)];
  return true;
}

mpz_class bareiss_mpz(const MatI64& A) {
  const int n = static_cast<int>(A.rows());
  std::vector<mpz_class> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i) * n + j] = static_cast<long>(A(i, j));
  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int r = k; r < n; ++r) {
      if (a[static_cast<std::size_t>(r) * n + k] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(piv) * n + j],
                  a[static_cast<std::size_t>(k) * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class num = a[static_cast<std::size_t>(i) * n + j] *
                            a[static_cast<std::size_t>(k) * n + k] -
                        a[static_cast<std::size_t>(i) * n + k] *
                            a[static_cast<std::size_t>(k) * n + j];
        mpz_divexact(a[static_cast<std::size_t>(i) * n + j].get_mpz_t(),
                     num.get_mpz_t(), prev.get_mpz_t());
      }
      a[static_cast<std::size_t>(i) * n + k] = 0;
    }
    prev = a[static_cast<std::size_t>(k) * n + k];
  }
  mpz_class det = a[static_cast<std::size_t>(n - 1) * n + (n - 1)];
  if (sign < 0) det = -det;
  return det;
}

void check_shape(Index rows, Index cols) {
  if (rows != cols) throw input_error("exact_integer_det: matrix is not square");
  if (rows < 1) throw input_error("exact_integer_det: empty matrix");
}

constexpr long long kEntryBound = 1LL << 30;

}  // namespace

long long exact_integer_det(const MatI64& A) {
  check_shape(A.rows(), A.cols());
  const int n = static_cast<int>(A.rows());
  if (n > 12) throw budget_error("exact_integer_det: dimension above the desk-scale cap of 12");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (A(i, j) > kEntryBound || A(i, j) < -kEntryBound)
        throw input_error("exact_integer_det: entry magnitude above 2^30");

  std::vector<i128> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = A(i, j);
  i128 det = 0;
  mpz_class big;
  bool have_big = false;
  if (!bareiss_i128(std::move(a), n, det)) {
    big = bareiss_mpz(A);
    have_big = true;
  }
  if (have_big) {
    if (!big.fits_slong_p())
      throw exact_overflow_error("exact_integer_det: determinant exceeds 64-bit range");
    return static_cast<long long>(big.get_si());
  }
  constexpr i128 lo = std::numeric_limits<long long>::min();
  constexpr i128 hi = std::numeric_limits<long long>::max();
  if (det < lo || det > hi)
    throw exact_overflow_error("exact_integer_det: determinant exceeds 64-bit range");
  return static_cast<long long>(det);
}

long long exact_integer_det(const Mat& A) {
  check_shape(A.rows(), A.cols());
  if (!all_finite(A)) throw input_error("exact_integer_det: non-finite entries");
  MatI64 Z(A.rows(), A.cols());
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      const double e = A(i, j);
      if (e != std::floor(e)) throw input_error("exact_integer_det: non-integer entry");
      Z(i, j) = static_cast<long long>(e);
    }
  }
  return exact_integer_det(Z);
}

bool exact_integer_is_singular(const MatI64& A) {
  check_shape(A.rows(), A.cols());
  const int n = static_cast<int>(A.rows());
  if (n > 64) throw budget_error("exact_integer_is_singular: dimension above 64");
  std::vector<i128> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = A(i, j);
  i128 det = 0;
  if (bareiss_i128(std::move(a), n, det)) return det == 0;
  return bareiss_mpz(A) == 0;
}

}  // namespace shadowbench
