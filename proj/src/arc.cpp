#include "arcscale/arc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "arcscale/error.hpp"

namespace arcscale {

SentimentArc sentiment_series(std::span<const std::string> tokens, const Lexicon& lexicon,
                              std::string story_id) {
  SentimentArc arc;
  arc.story_id = std::move(story_id);
  arc.raw.reserve(tokens.size());
  std::size_t hits = 0;
  for (const auto& token : tokens) {
    if (lexicon.contains(token)) ++hits;
    arc.raw.push_back(lexicon.valence(token));
  }
  arc.smooth = arc.raw;
  arc.coverage = tokens.empty() ? 0.0
                                : static_cast<double>(hits) / static_cast<double>(tokens.size());
  return arc;
}

WindowSummary window_summary(const SentimentArc& arc, std::size_t window_size) {
  if (window_size == 0) throw ParameterError("summary window size must be at least 1");
  WindowSummary summary;
  summary.window_size = window_size;
  const auto& raw = arc.raw;
  for (std::size_t start = 0; start < raw.size(); start += window_size) {
    const std::size_t end = std::min(raw.size(), start + window_size);
    const auto len = static_cast<double>(end - start);
    const double mean = std::accumulate(raw.begin() + start, raw.begin() + end, 0.0) / len;
    double ss = 0.0;
    for (std::size_t i = start; i < end; ++i) ss += (raw[i] - mean) * (raw[i] - mean);
    summary.means.push_back(mean);
    summary.stds.push_back(std::sqrt(ss / len));
  }
  return summary;
}

std::size_t smoothing_width(std::size_t n_tokens, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ParameterError(fmt::format("smoothing fraction {} is outside (0,1]", fraction));
  }
  auto width = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n_tokens)));
  width = std::max<std::size_t>(3, width);
  if (width % 2 == 0) ++width;
  return width;
}

SentimentArc smooth(SentimentArc arc, double fraction) {
  const std::size_t n = arc.raw.size();
  if (n == 0) throw ParameterError("cannot smooth an empty arc");
  const std::size_t half = smoothing_width(n, fraction) / 2;
  const auto [lowest, highest] = std::minmax_element(arc.raw.begin(), arc.raw.end());

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + arc.raw[i];

  arc.smooth.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    // prefix-sum rounding can land a few ulps outside the data range
    arc.smooth[i] = std::clamp(mean, *lowest, *highest);
  }
  return arc;
}

std::vector<double> resample_linear(std::span<const double> series, std::size_t length) {
  if (series.size() < 2) throw ParameterError("resampling needs at least 2 samples");
  if (length < 2) throw ParameterError("resample length must be at least 2");
  std::vector<double> out(length);
  const double step =
      static_cast<double>(series.size() - 1) / static_cast<double>(length - 1);
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) * step;
    const auto i = std::min(static_cast<std::size_t>(t), series.size() - 2);
    const double frac = t - static_cast<double>(i);
    out[k] = series[i] + frac * (series[i + 1] - series[i]);
  }
  return out;
}

std::vector<double> z_normalize(std::span<const double> series) {
  std::vector<double> out(series.begin(), series.end());
  if (out.empty()) return out;
  const double n = static_cast<double>(out.size());
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : out) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  for (double& v : out) v = sd > 0.0 ? (v - mean) / sd : 0.0;
  return out;
}

ClusterResult cluster_arcs(std::span<const SentimentArc> arcs, std::size_t k) {
  const std::size_t n = arcs.size();
  if (k == 0) throw ParameterError("cluster count must be at least 1");
  if (n < k) {
    throw ParameterError(fmt::format("cannot form {} clusters from {} arcs", k, n));
  }

  ClusterResult result;
  std::vector<std::vector<double>> points;
  points.reserve(n);
  {
    std::set<std::string> seen;
    for (const auto& arc : arcs) {
      if (!seen.insert(arc.story_id).second) {
        throw ParameterError(fmt::format("duplicate story id '{}'", arc.story_id));
      }
      if (arc.smooth.size() < 2) {
        throw ParameterError(
            fmt::format("arc '{}' is too short to resample ({} tokens)", arc.story_id,
                        arc.smooth.size()));
      }
      points.push_back(z_normalize(resample_linear(arc.smooth, kClusterResampleLength)));
      result.leaf_ids.push_back(arc.story_id);
    }
  }

  // Squared Euclidean dissimilarities; the Lance-Williams Ward update on
  // squared distances keeps D(a,b) equal to twice the ESS increase of a
  // merge.
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t t = 0; t < kClusterResampleLength; ++t) {
        const double diff = points[i][t] - points[j][t];
        d += diff * diff;
      }
      dist[i][j] = dist[j][i] = d;
    }
  }

  struct Cluster {
    std::size_t node;
    std::size_t size;
    std::string key;  // smallest member id
    std::vector<std::size_t> members;
  };
  std::vector<Cluster> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) active.push_back({i, 1, arcs[i].story_id, {i}});

  const auto ordered_keys = [](const Cluster& a, const Cluster& b) {
    return a.key < b.key ? std::pair{a.key, b.key} : std::pair{b.key, a.key};
  };

  std::vector<Cluster> cut = n == k ? active : std::vector<Cluster>{};

  while (active.size() > 1) {
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = dist[a][b];
        if (d < best ||
            (d == best && ordered_keys(active[a], active[b]) <
                              ordered_keys(active[best_a], active[best_b]))) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }

    Cluster& ca = active[best_a];
    Cluster& cb = active[best_b];
    const bool a_first = ca.key < cb.key;
    MergeStep step;
    step.left = a_first ? ca.node : cb.node;
    step.right = a_first ? cb.node : ca.node;
    step.height = std::sqrt(std::max(0.0, best));
    step.size = ca.size + cb.size;
    result.merges.push_back(step);

    // Lance-Williams update into slot best_a; slot best_b is removed.
    const auto na = static_cast<double>(ca.size);
    const auto nb = static_cast<double>(cb.size);
    for (std::size_t c = 0; c < active.size(); ++c) {
      if (c == best_a || c == best_b) continue;
      const auto nc = static_cast<double>(active[c].size);
      const double updated =
          ((na + nc) * dist[best_a][c] + (nb + nc) * dist[best_b][c] - nc * best) /
          (na + nb + nc);
      dist[best_a][c] = dist[c][best_a] = updated;
    }
    ca.node = n + result.merges.size() - 1;
    ca.size += cb.size;
    ca.key = std::min(ca.key, cb.key);
    ca.members.insert(ca.members.end(), cb.members.begin(), cb.members.end());

    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(best_b));
    for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));

    if (active.size() == k) cut = active;
  }

  std::sort(cut.begin(), cut.end(),
            [](const Cluster& a, const Cluster& b) { return a.key < b.key; });
  for (std::size_t label = 0; label < cut.size(); ++label) {
    for (const std::size_t member : cut[label].members) {
      result.labels[arcs[member].story_id] = label;
    }
  }
  return result;
}

}  // namespace arcscale
