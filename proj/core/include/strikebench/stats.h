#ifndef STRIKEBENCH_STATS_H_
#define STRIKEBENCH_STATS_H_

#include <optional>
#include <span>

namespace strikebench {

/// One-sided comparison of two independent samples under the alternative
/// that group A is larger than group B.
struct SignificanceResult {
  /// Welch's t with Welch-Satterthwaite degrees of freedom. Empty when the
  /// standard error is zero or either group has fewer than two values.
  std::optional<double> welch_t;
  std::optional<double> welch_df;
  std::optional<double> welch_p;
  /// U statistic of group A: pairs (a, b) with a > b, plus half the ties.
  double mannwhitney_u = 0.0;
  /// Normal approximation with tie correction and continuity correction.
  /// Empty when every value is tied.
  std::optional<double> mannwhitney_p;
};

/// Throws ConfigError when either group is empty.
SignificanceResult group_significance(std::span<const double> a,
                                      std::span<const double> b);

}  // namespace strikebench

#endif  // STRIKEBENCH_STATS_H_
