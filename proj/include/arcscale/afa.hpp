#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace arcscale {

enum class OrderSelection {
  kFixed,     // every segment uses AfaConfig::poly_order
  kAdaptive,  // experimental: per segment, the order in 1..3 with best adjusted R^2
};

struct AfaConfig {
  unsigned poly_order = 1;
  OrderSelection order_selection = OrderSelection::kFixed;
  // Odd, ascending, each >= 5. Empty means default_window_sizes(N).
  std::vector<std::size_t> window_sizes;
  std::size_t min_windows_for_fit = 5;
};

inline constexpr std::size_t kMinHurstSeriesLength = 60;
inline constexpr std::size_t kMinWindowSize = 5;
inline constexpr std::size_t kDefaultWindowCount = 15;

struct ScalingPoint {
  double log2_w = 0.0;
  double log2_f = 0.0;
};

struct AfaResult {
  double hurst = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<ScalingPoint> points;

  [[nodiscard]] std::size_t n_points() const noexcept { return points.size(); }
};

/// Cumulative sum of the mean-centered series.
std::vector<double> profile(std::span<const double> series);

/// Log-spaced odd window sizes covering [5, N/4], rounded to the nearest
/// odd integer and deduplicated.
std::vector<std::size_t> default_window_sizes(std::size_t n,
                                              std::size_t count = kDefaultWindowCount);

/// Start offsets of the length-w segments: 0, n, 2n, ... with a final
/// segment right-anchored at the last sample when (N-1) is not a multiple
/// of n = (w-1)/2.
std::vector<std::size_t> segment_starts(std::size_t length, std::size_t w);

struct BlendWeights {
  double w1 = 1.0;  // weight of the left segment's fit
  double w2 = 0.0;  // weight of the right segment's fit
};

/// Linear blend weights at `offset` points past the left center, for
/// centers `gap` apart: w1 = 1 - offset/gap, w2 = offset/gap.
BlendWeights blend_weights(std::size_t gap, std::size_t offset);

/// Smooth global trend of `u` for window size w = 2n+1: per-segment
/// least-squares polynomials blended linearly between neighbouring segment
/// centers, so the weights fall off as 1 - d/n with distance d from each
/// center. Before the first center and after the last only one fit applies.
std::vector<double> global_trend(std::span<const double> u, std::size_t w, unsigned order,
                                 OrderSelection selection = OrderSelection::kFixed);

/// Root mean square of u - v.
double fluctuation(std::span<const double> u, std::span<const double> v);

/// Ordinary least-squares line through the scaling points.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(std::span<const ScalingPoint> points);

/// Hurst exponent as the slope of log2 F(w) against log2 w. Window sizes
/// whose fluctuation is exactly zero are discarded before the fit.
AfaResult estimate_hurst(std::span<const double> series, const AfaConfig& config = {});

}  // namespace arcscale
