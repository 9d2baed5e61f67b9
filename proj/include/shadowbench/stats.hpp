#pragma once

#include <vector>

#include "shadowbench/types.hpp"

namespace shadowbench {

struct StatFlags {
  long long degeneracies = 0;
  long long empty_sections = 0;
  long long budget_exhaustions = 0;
};

struct TrialStats {
  long long count = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample std (ddof 1) / sqrt(count)
  double min = 0.0;
  double max = 0.0;
  double q5 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  long long violation_count = 0;  // experiment-specific
  StatFlags flags;
};

/// Quantile by linear interpolation at rank q*(N-1); input must be sorted.
double quantile_sorted(const std::vector<double>& sorted, double q);

/// count/mean/std_error/min/max/quantiles of xs. violation_count and flags
/// stay zero for the caller to fill. Empty input gives count 0 and NaNs.
TrialStats summarize(std::vector<double> xs);

/// Standard error of an empirical frequency phat over n Bernoulli trials.
double bernoulli_std_error(double phat, long long n);

}  // namespace shadowbench
