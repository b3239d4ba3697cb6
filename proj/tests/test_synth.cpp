#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "arcscale/error.hpp"
#include "arcscale/synth.hpp"

using namespace arcscale;

namespace {

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0;
  for (const double a : v) s += (a - m) * (a - m);
  return s / static_cast<double>(v.size());
}

double lag1_autocorrelation(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double num = 0;
  double den = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    den += (v[i] - m) * (v[i] - m);
    if (i + 1 < v.size()) num += (v[i] - m) * (v[i + 1] - m);
  }
  return num / den;
}

}  // namespace

TEST(FgnAutocovariance, KnownValues) {
  EXPECT_DOUBLE_EQ(fgn_autocovariance(0.7, 0), 1.0);
  EXPECT_NEAR(fgn_autocovariance(0.5, 1), 0.0, 1e-15);
  EXPECT_NEAR(fgn_autocovariance(0.5, 7), 0.0, 1e-15);
  EXPECT_NEAR(fgn_autocovariance(0.9, 1), 0.5 * (std::pow(2.0, 1.8) - 2.0), 1e-15);
  EXPECT_LT(fgn_autocovariance(0.2, 1), 0.0);
}

TEST(Fgn, HalfIsUncorrelated) {
  const auto x = fgn({0.5, 8192, 4});
  EXPECT_LT(std::abs(lag1_autocorrelation(x)), 3.0 / std::sqrt(8192.0));
}

TEST(Fgn, PersistentLagOneCorrelation) {
  const auto x = fgn({0.9, 8192, 4});
  EXPECT_NEAR(lag1_autocorrelation(x), 0.5 * (std::pow(2.0, 1.8) - 2.0), 0.1);
}

TEST(Fgn, UnitVariance) {
  for (const double h : {0.2, 0.5, 0.8}) {
    double total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) total += sample_variance(fgn({h, 4096, seed}));
    EXPECT_NEAR(total / 10.0, 1.0, 0.2) << h;
  }
}

TEST(Fgn, DeterministicPerSeed) {
  EXPECT_EQ(fgn({0.7, 1024, 11}), fgn({0.7, 1024, 11}));
  EXPECT_NE(fgn({0.7, 1024, 11}), fgn({0.7, 1024, 12}));
  EXPECT_EQ(fgn({0.3, 64, 1}).size(), 64u);
}

TEST(Fgn, Errors) {
  EXPECT_THROW(fgn({0.0, 1024, 1}), ParameterError);
  EXPECT_THROW(fgn({1.0, 1024, 1}), ParameterError);
  EXPECT_THROW(fgn({0.5, 1000, 1}), ParameterError);
  EXPECT_THROW(fgn({0.5, 32, 1}), ParameterError);
}

TEST(WhiteNoise, Moments) {
  const auto x = white_noise(100000, 1);
  EXPECT_NEAR(sample_mean(x), 0.0, 0.02);
  EXPECT_NEAR(sample_variance(x), 1.0, 0.02);
  EXPECT_EQ(x, white_noise(100000, 1));
  EXPECT_NE(x, white_noise(100000, 2));
}
