#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arcscale/lexicon.hpp"

namespace arcscale {

inline constexpr std::size_t kDefaultSummaryWindow = 30;
inline constexpr double kDefaultSmoothingFraction = 0.05;

/// Per-token valence series for one story. `smooth` always has the same
/// length as `raw`; it equals `raw` until smooth() is applied.
struct SentimentArc {
  std::string story_id;
  std::vector<double> raw;
  std::vector<double> smooth;
  double coverage = 0.0;  // fraction of tokens found in the lexicon

  [[nodiscard]] std::size_t n_tokens() const noexcept { return raw.size(); }
};

struct WindowSummary {
  std::size_t window_size = kDefaultSummaryWindow;
  std::vector<double> means;
  std::vector<double> stds;  // population standard deviation
};

SentimentArc sentiment_series(std::span<const std::string> tokens, const Lexicon& lexicon,
                              std::string story_id = {});

/// Mean and spread over consecutive non-overlapping windows; the trailing
/// partial window is summarized over its actual length.
WindowSummary window_summary(const SentimentArc& arc,
                             std::size_t window_size = kDefaultSummaryWindow);

/// Width of the centered moving average used by smooth(): the nearest
/// integer to fraction * n, at least 3, bumped to the next odd number.
std::size_t smoothing_width(std::size_t n_tokens, double fraction);

/// Fills `smooth` with a centered moving average of `raw`. Near the ends the
/// window is clipped to the samples that exist.
SentimentArc smooth(SentimentArc arc, double fraction = kDefaultSmoothingFraction);

inline constexpr std::size_t kClusterResampleLength = 100;

struct MergeStep {
  std::size_t left = 0;   // node ids: 0..n-1 are leaves, n+i is the i-th merge
  std::size_t right = 0;
  double height = 0.0;    // Ward distance (square root of twice the ESS increase)
  std::size_t size = 0;
};

struct ClusterResult {
  std::map<std::string, std::size_t> labels;
  std::vector<MergeStep> merges;  // the full tree, n-1 steps
  std::vector<std::string> leaf_ids;
};

/// Linear resampling onto `length` evenly spaced points spanning the series.
std::vector<double> resample_linear(std::span<const double> series, std::size_t length);

/// Shifts to zero mean and unit population standard deviation; a constant
/// input becomes all zeros.
std::vector<double> z_normalize(std::span<const double> series);

/// Ward-linkage agglomerative clustering of the smoothed arcs, each
/// resampled to kClusterResampleLength points and z-normalized. The tree is
/// cut at `k` clusters; labels are numbered by the smallest story id in each
/// cluster. Exact distance ties merge the pair with the lexicographically
/// smallest ids first.
ClusterResult cluster_arcs(std::span<const SentimentArc> arcs, std::size_t k);

}  // namespace arcscale
