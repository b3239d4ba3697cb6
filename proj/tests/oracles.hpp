#pragma once

// Independent reference implementations used only by the tests. Each one
// follows the textbook definition as literally as possible and shares no
// code with the library route it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline double mean(const std::vector<double>& v) {
  long double s = 0;
  for (const double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

// cov(x,y) / sqrt(var(x) var(y)) with sample (n-1) normalization.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x);
  const double my = mean(y);
  long double cov = 0;
  long double vx = 0;
  long double vy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += static_cast<long double>(x[i] - mx) * (y[i] - my);
    vx += static_cast<long double>(x[i] - mx) * (x[i] - mx);
    vy += static_cast<long double>(y[i] - my) * (y[i] - my);
  }
  const long double n1 = static_cast<long double>(x.size()) - 1;
  return static_cast<double>((cov / n1) / std::sqrt((vx / n1) * (vy / n1)));
}

// Rank of x[i] = 1 + #(smaller) + (#(equal) - 1) / 2.
inline std::vector<double> mid_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0;
    double equal = 0;
    for (const double other : v) {
      if (other < v[i]) ++less;
      if (other == v[i]) ++equal;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(mid_ranks(x), mid_ranks(y));
}

// Tau-b from explicit pair enumeration.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long long concordant = 0;
  long long discordant = 0;
  long long tied_x_only = 0;
  long long tied_y_only = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++tied_x_only;
      } else if (dy == 0) {
        ++tied_y_only;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double a = static_cast<double>(concordant + discordant + tied_y_only);
  const double b = static_cast<double>(concordant + discordant + tied_x_only);
  return static_cast<double>(concordant - discordant) / std::sqrt(a * b);
}

inline std::vector<std::vector<double>> double_centered(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = std::abs(v[i] - v[j]);
  std::vector<double> row(n, 0.0);
  std::vector<double> col(n, 0.0);
  double grand = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      row[i] += a[i][j] / static_cast<double>(n);
      col[j] += a[i][j] / static_cast<double>(n);
      grand += a[i][j] / static_cast<double>(n * n);
    }
  std::vector<std::vector<double>> centered(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) centered[i][j] = a[i][j] - row[i] - col[j] + grand;
  return centered;
}

inline double distance_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const auto a = double_centered(x);
  const auto b = double_centered(y);
  const std::size_t n = x.size();
  double vxy = 0;
  double vxx = 0;
  double vyy = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      vxy += a[i][j] * b[i][j];
      vxx += a[i][j] * a[i][j];
      vyy += b[i][j] * b[i][j];
    }
  if (vxx == 0 || vyy == 0) return 0.0;
  return std::sqrt(std::max(0.0, vxy) / std::sqrt(vxx * vyy));
}

inline double rms(const std::vector<double>& u, const std::vector<double>& v) {
  long double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long double d = static_cast<long double>(u[i]) - v[i];
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s / static_cast<long double>(u.size())));
}

// Closed-form straight-line least squares over index positions.
inline std::pair<double, double> line_fit(const std::vector<double>& y, std::size_t start,
                                          std::size_t len) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const double x = static_cast<double>(start + i);
    sx += x;
    sy += y[start + i];
    sxx += x * x;
    sxy += x * y[start + i];
  }
  const double n = static_cast<double>(len);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

// Overlapping straight-line fits combined with the 1-based blend rule
//   y_c(l) = (1 - (l-1)/n) y_i(l+n) + ((l-1)/n) y_{i+1}(l),  l = 1..n+1.
// Only valid when (N-1) is a multiple of n.
inline std::vector<double> linear_afa_trend(const std::vector<double>& u, std::size_t w) {
  const std::size_t n = (w - 1) / 2;
  const std::size_t segments = (u.size() - 1) / n - 1;
  std::vector<std::pair<double, double>> fits;
  for (std::size_t i = 0; i < segments; ++i) fits.push_back(line_fit(u, i * n, w));
  const auto y = [&](std::size_t seg, std::size_t l) {  // l is 1-based within the segment
    const double x = static_cast<double>(seg * n + l - 1);
    return fits[seg].first * x + fits[seg].second;
  };
  std::vector<double> v(u.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t l = 1; l <= n; ++l) v[l - 1] = y(0, l);
  for (std::size_t i = 0; i + 1 < segments; ++i) {
    for (std::size_t l = 1; l <= n + 1; ++l) {
      const double w1 = 1.0 - static_cast<double>(l - 1) / static_cast<double>(n);
      const double w2 = static_cast<double>(l - 1) / static_cast<double>(n);
      v[(i + 1) * n + l - 1] = w1 * y(i, l + n) + w2 * y(i + 1, l);
    }
  }
  const std::size_t last = segments - 1;
  for (std::size_t l = n + 1; l <= w; ++l) v[last * n + l - 1] = y(last, l);
  return v;
}

// DFA-1: non-overlapping boxes, linear detrending, slope of log2 F(s).
inline double dfa1_hurst(const std::vector<double>& series, const std::vector<std::size_t>& sizes) {
  const double m = mean(series);
  std::vector<double> profile(series.size());
  double run = 0;
  for (std::size_t i = 0; i < series.size(); ++i) profile[i] = run += series[i] - m;
  std::vector<double> lx, ly;
  for (const std::size_t s : sizes) {
    const std::size_t boxes = profile.size() / s;
    double ss = 0;
    for (std::size_t b = 0; b < boxes; ++b) {
      const auto [slope, icpt] = line_fit(profile, b * s, s);
      for (std::size_t i = b * s; i < (b + 1) * s; ++i) {
        const double r = profile[i] - (slope * static_cast<double>(i) + icpt);
        ss += r * r;
      }
    }
    lx.push_back(std::log2(static_cast<double>(s)));
    ly.push_back(0.5 * std::log2(ss / static_cast<double>(boxes * s)));
  }
  const double mx = mean(lx), my = mean(ly);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

// Centered moving average, window clipped at the ends, computed directly.
inline std::vector<double> moving_average(const std::vector<double>& x, std::size_t width) {
  const std::size_t h = width / 2;
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0;
    std::size_t c = 0;
    for (std::size_t j = (i >= h ? i - h : 0); j <= std::min(x.size() - 1, i + h); ++j) {
      s += x[j];
      ++c;
    }
    out[i] = s / static_cast<double>(c);
  }
  return out;
}

// Ward agglomeration by brute force: at each step merge the pair whose union
// increases the total within-cluster sum of squares the least, recomputing
// centroids from the raw points. Returns clusters (as point index lists)
// when `k` remain.
inline std::vector<std::vector<std::size_t>> ward_clusters(
    const std::vector<std::vector<double>>& points, std::size_t k) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < points.size(); ++i) clusters.push_back({i});
  const auto ess = [&](const std::vector<std::size_t>& members) {
    const std::size_t dim = points[0].size();
    std::vector<double> c(dim, 0.0);
    for (const auto m : members)
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[m][d] / static_cast<double>(members.size());
    double s = 0;
    for (const auto m : members)
      for (std::size_t d = 0; d < dim; ++d) s += (points[m][d] - c[d]) * (points[m][d] - c[d]);
    return s;
  };
  while (clusters.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 1;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        auto merged = clusters[a];
        merged.insert(merged.end(), clusters[b].begin(), clusters[b].end());
        const double inc = ess(merged) - ess(clusters[a]) - ess(clusters[b]);
        if (inc < best) {
          best = inc;
          ba = a;
          bb = b;
        }
      }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  return clusters;
}

}  // namespace oracle
