#include "shadowbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowbench {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (!(q >= 0.0 && q <= 1.0)) throw input_error("quantile level must be in [0, 1]");
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

TrialStats summarize(std::vector<double> xs) {
  TrialStats s;
  s.count = static_cast<long long>(xs.size());
  if (xs.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean = s.std_error = s.min = s.max = s.q5 = s.q50 = s.q95 = nan;
    return s;
  }
  for (double x : xs)
    if (!std::isfinite(x)) throw input_error("non-finite sample in summary");

  double acc = 0.0;
  for (double x : xs) acc += x;
  s.mean = acc / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std_error = xs.size() > 1
                    ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
                          std::sqrt(static_cast<double>(xs.size()))
                    : 0.0;

  std::sort(xs.begin(), xs.end());
  s.min = xs.front();
  s.max = xs.back();
  s.q5 = quantile_sorted(xs, 0.05);
  s.q50 = quantile_sorted(xs, 0.50);
  s.q95 = quantile_sorted(xs, 0.95);
  return s;
}

double bernoulli_std_error(double phat, long long n) {
  if (n <= 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(std::max(0.0, phat * (1.0 - phat)) / static_cast<double>(n));
}

}  // namespace shadowbench
