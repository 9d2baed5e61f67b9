#pragma once

#include "shadowbench/types.hpp"

namespace shadowbench {

/// Exact determinant of a small integer matrix (entries |e| <= 2^30, n <= 12)
/// by fraction-free Bareiss elimination. Intermediate values that outgrow
/// 128-bit arithmetic fall back to arbitrary precision; a result that does not
/// fit the 64-bit return width raises exact_overflow_error.
long long exact_integer_det(const Mat& A);
long long exact_integer_det(const MatI64& A);

/// Exact singularity test; same arithmetic, no width restriction on the value.
bool exact_integer_is_singular(const MatI64& A);

}  // namespace shadowbench
