#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace arcscale {

struct Correlation {
  double value = 0.0;
  double p_value = 1.0;
};

/// Product-moment correlation; two-sided p from Student's t with n-2 df.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of mid-ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b with tie correction (Knight's O(n log n) counting);
/// p from the normal approximation with the tie-adjusted variance.
Correlation kendall_tau(std::span<const double> x, std::span<const double> y);

/// Original (biased, V-statistic) sample distance correlation in [0,1].
/// Returns 0 when either distance variance is zero.
double distance_correlation(std::span<const double> x, std::span<const double> y);

/// Permutation p-value for distance correlation: the fraction of
/// `permutations` shuffles of y (plus the observed arrangement) whose
/// statistic is at least the observed one.
double distance_correlation_pvalue(std::span<const double> x, std::span<const double> y,
                                   std::size_t permutations = 9999, std::uint64_t seed = 1);

/// Average ranks, 1-based, ties sharing the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

}  // namespace arcscale
