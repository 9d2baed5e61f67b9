#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace shadowbench {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using MatI64 = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

/// Input violates an operation's contract.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A run-time configuration problem (CLI / config file level).
struct config_error : input_error {
  using input_error::input_error;
};

/// Combinatorial or iteration budget exceeded.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometric degeneracy the caller asked us to treat as fatal.
struct degeneracy_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unbounded_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_form_error : input_error {
  using input_error::input_error;
};

struct degenerate_span_error : input_error {
  using input_error::input_error;
};

/// Exact-arithmetic result does not fit the requested width.
struct exact_overflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invariant that must not fail did; indicates a bug, not bad input.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace shadowbench
