#include "arcscale/afa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "arcscale/error.hpp"

namespace arcscale {
namespace {

constexpr unsigned kAdaptiveMinOrder = 1;
constexpr unsigned kAdaptiveMaxOrder = 3;

// Least-squares polynomial fits on a fixed grid of w points. The abscissa is
// centered on the segment midpoint and scaled to [-1, 1]; the thin Q factor
// of the Vandermonde matrix turns each fit into two small products.
class SegmentFitter {
 public:
  SegmentFitter(std::size_t w, unsigned order) : w_(w) {
    const auto cols = static_cast<Eigen::Index>(order) + 1;
    const auto rows = static_cast<Eigen::Index>(w);
    const double half = static_cast<double>(w - 1) / 2.0;
    Eigen::MatrixXd vandermonde(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double x = (static_cast<double>(i) - half) / half;
      double power = 1.0;
      for (Eigen::Index j = 0; j < cols; ++j) {
        vandermonde(i, j) = power;
        power *= x;
      }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(vandermonde);
    q_ = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    order_ = order;
  }

  [[nodiscard]] unsigned order() const noexcept { return order_; }

  /// Fitted values of the segment and the residual sum of squares.
  double fit(std::span<const double> segment, std::vector<double>& fitted) const {
    const Eigen::Map<const Eigen::VectorXd> y(segment.data(), static_cast<Eigen::Index>(w_));
    const Eigen::VectorXd coeffs = q_.transpose() * y;
    const Eigen::VectorXd values = q_ * coeffs;
    fitted.assign(values.data(), values.data() + values.size());
    return (y - values).squaredNorm();
  }

 private:
  std::size_t w_;
  unsigned order_ = 0;
  Eigen::MatrixXd q_;
};

double adjusted_r_squared(double rss, double tss, std::size_t n, unsigned order) {
  const double dof = static_cast<double>(n) - static_cast<double>(order) - 1.0;
  if (tss <= 0.0 || dof <= 0.0) return 1.0;
  return 1.0 - (rss / dof) / (tss / (static_cast<double>(n) - 1.0));
}

void validate_window(std::size_t length, std::size_t w) {
  if (w < 3 || w % 2 == 0) {
    throw ParameterError(fmt::format("window size {} must be odd and at least 3", w));
  }
  if (w > length) {
    throw ParameterError(fmt::format("window size {} exceeds series length {}", w, length));
  }
}

std::vector<std::size_t> resolve_windows(std::size_t length, const AfaConfig& config) {
  if (config.window_sizes.empty()) return default_window_sizes(length);
  const auto& ws = config.window_sizes;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (ws[i] < kMinWindowSize || ws[i] % 2 == 0) {
      throw ParameterError(
          fmt::format("window size {} must be odd and at least {}", ws[i], kMinWindowSize));
    }
    if (i > 0 && ws[i] <= ws[i - 1]) {
      throw ParameterError("window sizes must be strictly ascending");
    }
  }
  if (ws.back() > length) {
    throw SeriesTooShortError(fmt::format("series of length {} is shorter than window size {}",
                                          length, ws.back()));
  }
  return ws;
}

}  // namespace

std::vector<double> profile(std::span<const double> series) {
  if (series.size() < 2) {
    throw SeriesTooShortError(
        fmt::format("profile needs at least 2 samples, got {}", series.size()));
  }
  std::vector<double> u(series.size(), 0.0);
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi) return u;

  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  double running = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    running += series[i] - mean;
    u[i] = running;
  }
  return u;
}

std::vector<std::size_t> default_window_sizes(std::size_t n, std::size_t count) {
  const std::size_t top = n / 4;
  if (top < kMinWindowSize || count < 2) return {kMinWindowSize};
  const double lo = std::log(static_cast<double>(kMinWindowSize));
  const double hi = std::log(static_cast<double>(top));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double x =
        std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    auto w = static_cast<std::size_t>(2 * std::llround((x - 1.0) / 2.0) + 1);
    w = std::max(w, kMinWindowSize);
    if (w > top) w -= 2;  // stay within N/4 after rounding up
    if (out.empty() || w > out.back()) out.push_back(w);
  }
  return out;
}

std::vector<std::size_t> segment_starts(std::size_t length, std::size_t w) {
  validate_window(length, w);
  const std::size_t step = (w - 1) / 2;
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + w <= length; s += step) starts.push_back(s);
  if (starts.back() + w != length) starts.push_back(length - w);
  return starts;
}

BlendWeights blend_weights(std::size_t gap, std::size_t offset) {
  const double t = static_cast<double>(offset) / static_cast<double>(gap);
  return {1.0 - t, t};
}

std::vector<double> global_trend(std::span<const double> u, std::size_t w, unsigned order,
                                 OrderSelection selection) {
  const auto starts = segment_starts(u.size(), w);
  const std::size_t half = (w - 1) / 2;

  std::vector<SegmentFitter> fitters;
  if (selection == OrderSelection::kFixed) {
    if (order + 1 > w) {
      throw ParameterError(
          fmt::format("polynomial order {} needs more than {} points per segment", order, w));
    }
    fitters.emplace_back(w, order);
  } else {
    for (unsigned m = kAdaptiveMinOrder; m <= kAdaptiveMaxOrder && m + 1 <= w; ++m) {
      fitters.emplace_back(w, m);
    }
  }

  std::vector<std::vector<double>> fits(starts.size());
  std::vector<double> candidate;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const auto segment = u.subspan(starts[k], w);
    if (fitters.size() == 1) {
      fitters.front().fit(segment, fits[k]);
      continue;
    }
    const double mean = std::accumulate(segment.begin(), segment.end(), 0.0) /
                        static_cast<double>(w);
    double tss = 0.0;
    for (const double y : segment) tss += (y - mean) * (y - mean);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& fitter : fitters) {
      const double rss = fitter.fit(segment, candidate);
      const double score = adjusted_r_squared(rss, tss, w, fitter.order());
      if (score > best) {
        best = score;
        fits[k] = candidate;
      }
    }
  }

  std::vector<double> v(u.size());
  const std::size_t first_center = starts.front() + half;
  for (std::size_t p = 0; p <= first_center; ++p) v[p] = fits.front()[p];
  for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
    const std::size_t c0 = starts[k] + half;
    const std::size_t c1 = starts[k + 1] + half;
    for (std::size_t p = c0; p <= c1; ++p) {
      const auto [w1, w2] = blend_weights(c1 - c0, p - c0);
      v[p] = w1 * fits[k][p - starts[k]] + w2 * fits[k + 1][p - starts[k + 1]];
    }
  }
  const std::size_t last_center = starts.back() + half;
  for (std::size_t p = last_center; p < u.size(); ++p) v[p] = fits.back()[p - starts.back()];
  return v;
}

double fluctuation(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ParameterError(
        fmt::format("profile and trend lengths differ ({} vs {})", u.size(), v.size()));
  }
  if (u.empty()) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) ss += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(ss / static_cast<double>(u.size()));
}

LineFit fit_line(std::span<const ScalingPoint> points) {
  if (points.size() < 2) throw ParameterError("line fit needs at least 2 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.log2_w;
    my += p.log2_f;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points) {
    sxx += (p.log2_w - mx) * (p.log2_w - mx);
    sxy += (p.log2_w - mx) * (p.log2_f - my);
    syy += (p.log2_f - my) * (p.log2_f - my);
  }
  if (sxx <= 0.0) throw ParameterError("line fit needs at least 2 distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

AfaResult estimate_hurst(std::span<const double> series, const AfaConfig& config) {
  if (series.size() < kMinHurstSeriesLength) {
    throw SeriesTooShortError(fmt::format("series of length {} is shorter than the minimum {}",
                                          series.size(), kMinHurstSeriesLength));
  }
  const auto windows = resolve_windows(series.size(), config);
  if (windows.size() < config.min_windows_for_fit || config.min_windows_for_fit < 2) {
    throw ParameterError(fmt::format("{} window sizes cannot support a fit needing {}",
                                     windows.size(), config.min_windows_for_fit));
  }

  const auto u = profile(series);
  AfaResult result;
  for (const std::size_t w : windows) {
    const auto v = global_trend(u, w, config.poly_order, config.order_selection);
    const double f = fluctuation(u, v);
    if (f > 0.0) result.points.push_back({std::log2(static_cast<double>(w)), std::log2(f)});
  }
  if (result.points.size() < config.min_windows_for_fit) {
    throw DegenerateSeriesError(
        fmt::format("only {} of {} window sizes have nonzero fluctuation (need {})",
                    result.points.size(), windows.size(), config.min_windows_for_fit));
  }
  const auto line = fit_line(result.points);
  result.hurst = line.slope;
  result.intercept = line.intercept;
  result.r_squared = line.r_squared;
  return result;
}

}  // namespace arcscale
