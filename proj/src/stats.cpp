#include "arcscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "arcscale/error.hpp"

namespace arcscale {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) {
    throw ParameterError(
        fmt::format("{}: length mismatch ({} vs {})", what, x.size(), y.size()));
  }
  if (x.size() < 3) {
    throw ParameterError(fmt::format("{}: needs at least 3 pairs, got {}", what, x.size()));
  }
}

double two_sided_t_pvalue(double r, std::size_t n) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / ((1.0 - r) * (1.0 + r)));
  const boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0,
                    1.0);
}

Correlation pearson_unchecked(std::span<const double> x, std::span<const double> y,
                              const char* what) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw UndefinedCorrelationError(fmt::format("{}: undefined for constant input", what));
  }
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {r, two_sided_t_pvalue(r, x.size())};
}

// Tie-group statistics of an already sorted sequence, as sums over groups
// of size t of t(t-1)/2, t(t-1)(t-2) and t(t-1)(2t+5).
struct TieSums {
  double pairs = 0.0;
  double cubic = 0.0;
  double variance = 0.0;
};

TieSums tie_sums(std::span<const double> sorted) {
  TieSums sums;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    sums.pairs += t * (t - 1.0) / 2.0;
    sums.cubic += t * (t - 1.0) * (t - 2.0);
    sums.variance += t * (t - 1.0) * (2.0 * t + 5.0);
    i = j;
  }
  return sums;
}

// Stable merge sort that counts the exchanges needed, i.e. the number of
// pairs (i < j) with values[i] > values[j].
std::uint64_t count_inversions(std::vector<double>& values) {
  std::vector<double> buffer(values.size());
  std::uint64_t swaps = 0;
  for (std::size_t width = 1; width < values.size(); width *= 2) {
    for (std::size_t lo = 0; lo < values.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, values.size());
      const std::size_t hi = std::min(lo + 2 * width, values.size());
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (values[i] <= values[j]) {
          buffer[k++] = values[i++];
        } else {
          swaps += mid - i;
          buffer[k++] = values[j++];
        }
      }
      while (i < mid) buffer[k++] = values[i++];
      while (j < hi) buffer[k++] = values[j++];
    }
    values.swap(buffer);
  }
  return swaps;
}

// Double-centered distance matrix, row-major n x n.
std::vector<double> centered_distances(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> a(n * n);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = std::abs(v[i] - v[j]);
      row_mean[i] += a[i * n + j];
    }
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] += grand - row_mean[i] - row_mean[j];
  }
  return a;
}

// Mean over i, j of a_ij * b_ij minus the centering corrections, without
// materializing the centered matrices.
double distance_covariance_sq(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double nn = static_cast<double>(n);
  std::vector<double> ra(n, 0.0);
  std::vector<double> rb(n, 0.0);
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = std::abs(x[i] - x[j]);
      const double b = std::abs(y[i] - y[j]);
      ra[i] += a;
      rb[i] += b;
      cross += a * b;
    }
  }
  double ga = 0.0;
  double gb = 0.0;
  double rows = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ga += ra[i];
    gb += rb[i];
    rows += ra[i] * rb[i];
  }
  return cross / (nn * nn) - 2.0 * rows / (nn * nn * nn) + (ga * gb) / (nn * nn * nn * nn);
}

}  // namespace

std::vector<double> mid_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "pearson");
  return pearson_unchecked(x, y, "pearson");
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "spearman");
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  return pearson_unchecked(rx, ry, "spearman");
}

Correlation kendall_tau(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "kendall_tau");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[order[i]];
    ys[i] = y[order[i]];
  }
  const TieSums x_ties = tie_sums(xs);

  // pairs tied in both coordinates
  double joint = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
    const auto t = static_cast<double>(j - i);
    joint += t * (t - 1.0) / 2.0;
    i = j;
  }

  const auto discordant = static_cast<double>(count_inversions(ys));
  const TieSums y_ties = tie_sums(ys);  // ys is sorted now

  const double nd = static_cast<double>(n);
  const double total = nd * (nd - 1.0) / 2.0;
  if (total - x_ties.pairs <= 0.0 || total - y_ties.pairs <= 0.0) {
    throw UndefinedCorrelationError("kendall_tau: undefined when either input is all ties");
  }
  const double score = total - x_ties.pairs - y_ties.pairs + joint - 2.0 * discordant;
  // Pair counts are integers, so the product is exact and tau is exactly
  // +-1 for perfectly (anti-)concordant data.
  const double tau = std::clamp(
      score / std::sqrt((total - x_ties.pairs) * (total - y_ties.pairs)), -1.0, 1.0);

  const double m = nd * (nd - 1.0);
  const double var = (m * (2.0 * nd + 5.0) - x_ties.variance - y_ties.variance) / 18.0 +
                     (2.0 * x_ties.pairs * y_ties.pairs) / m +
                     x_ties.cubic * y_ties.cubic / (9.0 * m * (nd - 2.0));
  const double p = var > 0.0 ? std::erfc(std::abs(score) / std::sqrt(var) / std::sqrt(2.0)) : 1.0;
  return {tau, std::clamp(p, 0.0, 1.0)};
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "distance_correlation");
  const double vx = distance_covariance_sq(x, x);
  const double vy = distance_covariance_sq(y, y);
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  const double cxy = std::max(0.0, distance_covariance_sq(x, y));
  return std::clamp(std::sqrt(cxy / std::sqrt(vx * vy)), 0.0, 1.0);
}

double distance_correlation_pvalue(std::span<const double> x, std::span<const double> y,
                                   std::size_t permutations, std::uint64_t seed) {
  check_pair(x, y, "distance_correlation_pvalue");
  if (permutations == 0) throw ParameterError("permutation count must be at least 1");
  const std::size_t n = x.size();
  const auto a = centered_distances(x);
  const auto b = centered_distances(y);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const auto statistic = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * b[perm[i] * n + perm[j]];
    }
    return s;
  };

  // dVar terms are permutation invariant, so comparing the raw cross sums
  // orders the permuted correlations the same way.
  const double observed = statistic();
  // rearrangements equal to the observed one up to summation order count too
  const double threshold = observed - 1e-12 * std::abs(observed);
  std::mt19937_64 rng(seed);
  std::size_t at_least = 0;
  for (std::size_t k = 0; k < permutations; ++k) {
    std::shuffle(perm.begin(), perm.end(), rng);
    if (statistic() >= threshold) ++at_least;
  }
  return static_cast<double>(at_least + 1) / static_cast<double>(permutations + 1);
}

}  // namespace arcscale
