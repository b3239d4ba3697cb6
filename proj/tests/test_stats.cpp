#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "arcscale/error.hpp"
#include "arcscale/stats.hpp"
#include "oracles.hpp"

using namespace arcscale;

namespace {

struct Dataset {
  std::vector<double> x;
  std::vector<double> y;
};

// Values drawn from a small grid so ties are common in both variables.
Dataset random_dataset(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(3, 50);
  std::uniform_int_distribution<int> grid(0, 7);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset d;
  const int n = size(rng);
  const bool tied = rng() % 2 == 0;
  for (int i = 0; i < n; ++i) {
    const double a = tied ? grid(rng) : normal(rng);
    d.x.push_back(a);
    d.y.push_back(tied ? grid(rng) + 0.3 * a : 0.5 * a + normal(rng));
  }
  return d;
}

bool degenerate(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

}  // namespace

TEST(Pearson, SmallExample) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 5, 4, 5};
  const auto r = pearson(x, y);
  EXPECT_NEAR(r.value, 0.7745966692414834, 1e-14);
  EXPECT_NEAR(r.p_value, 0.1240270626575546, 1e-10);
}

TEST(Spearman, SmallExampleWithTies) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 5, 4, 5};
  EXPECT_NEAR(spearman(x, y).value, 0.7378647873726218, 1e-14);
}

TEST(Kendall, SmallExampleWithTies) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 5, 4, 5};
  const auto t = kendall_tau(x, y);
  EXPECT_NEAR(t.value, 0.6708203932499369, 1e-14);
  EXPECT_NEAR(t.p_value, 0.11718508719813801, 1e-10);
}

TEST(MidRanks, Ties) {
  EXPECT_EQ(mid_ranks(std::vector<double>{10, 20, 20, 5, 20}),
            (std::vector<double>{2, 4, 4, 1, 4}));
}

TEST(Stats, RandomDatasetsMatchOracles) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 200) {
    const auto d = random_dataset(rng);
    if (degenerate(d.x) || degenerate(d.y)) continue;
    ++checked;
    EXPECT_NEAR(pearson(d.x, d.y).value, oracle::pearson(d.x, d.y), 1e-12);
    EXPECT_NEAR(spearman(d.x, d.y).value, oracle::spearman(d.x, d.y), 1e-12);
    EXPECT_NEAR(kendall_tau(d.x, d.y).value, oracle::kendall_tau_b(d.x, d.y), 1e-12);
    EXPECT_NEAR(distance_correlation(d.x, d.y), oracle::distance_correlation(d.x, d.y), 1e-12);
    EXPECT_EQ(mid_ranks(d.x), oracle::mid_ranks(d.x));
  }
}

TEST(Stats, PerfectMonotoneIdentities) {
  std::vector<double> x, y, z;
  for (int i = 0; i < 40; ++i) {
    x.push_back(i);
    y.push_back(3.0 * i - 7.0);
    z.push_back(std::exp(0.1 * i));
  }
  EXPECT_NEAR(pearson(x, y).value, 1.0, 1e-15);
  EXPECT_EQ(spearman(x, z).value, 1.0);
  EXPECT_EQ(kendall_tau(x, z).value, 1.0);
  std::vector<double> neg(x.rbegin(), x.rend());
  EXPECT_EQ(spearman(x, neg).value, -1.0);
  EXPECT_EQ(kendall_tau(x, neg).value, -1.0);
  EXPECT_NEAR(distance_correlation(x, y), 1.0, 1e-12);
}

TEST(Stats, Symmetry) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto d = random_dataset(rng);
    if (degenerate(d.x) || degenerate(d.y)) continue;
    EXPECT_NEAR(pearson(d.x, d.y).value, pearson(d.y, d.x).value, 1e-14);
    EXPECT_NEAR(spearman(d.x, d.y).value, spearman(d.y, d.x).value, 1e-14);
    EXPECT_NEAR(kendall_tau(d.x, d.y).value, kendall_tau(d.y, d.x).value, 1e-14);
    EXPECT_NEAR(distance_correlation(d.x, d.y), distance_correlation(d.y, d.x), 1e-14);
  }
}

TEST(Stats, AffineInvariance) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto d = random_dataset(rng);
    if (degenerate(d.x) || degenerate(d.y)) continue;
    std::vector<double> x2(d.x), x3(d.x);
    for (double& v : x2) v = 4.0 * v + 2.0;
    for (double& v : x3) v = -0.5 * v + 1.0;
    EXPECT_NEAR(pearson(x2, d.y).value, pearson(d.x, d.y).value, 1e-12);
    EXPECT_NEAR(pearson(x3, d.y).value, -pearson(d.x, d.y).value, 1e-12);
    EXPECT_NEAR(spearman(x2, d.y).value, spearman(d.x, d.y).value, 1e-12);
    EXPECT_NEAR(kendall_tau(x2, d.y).value, kendall_tau(d.x, d.y).value, 1e-12);
    EXPECT_NEAR(distance_correlation(x2, d.y), distance_correlation(d.x, d.y), 1e-12);
    EXPECT_NEAR(distance_correlation(x3, d.y), distance_correlation(d.x, d.y), 1e-12);
  }
}

TEST(Stats, PValuesInUnitInterval) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto d = random_dataset(rng);
    if (degenerate(d.x) || degenerate(d.y)) continue;
    for (const auto c : {pearson(d.x, d.y), spearman(d.x, d.y), kendall_tau(d.x, d.y)}) {
      EXPECT_GE(c.p_value, 0.0);
      EXPECT_LE(c.p_value, 1.0);
      EXPECT_GE(c.value, -1.0);
      EXPECT_LE(c.value, 1.0);
    }
    const double dc = distance_correlation(d.x, d.y);
    EXPECT_GE(dc, 0.0);
    EXPECT_LE(dc, 1.0);
  }
}

TEST(Stats, Errors) {
  const std::vector<double> two{1, 2};
  const std::vector<double> three{1, 2, 3};
  const std::vector<double> four{1, 2, 3, 4};
  const std::vector<double> flat{2, 2, 2};
  EXPECT_THROW(pearson(three, four), ParameterError);
  EXPECT_THROW(pearson(two, two), ParameterError);
  EXPECT_THROW(spearman(two, two), ParameterError);
  EXPECT_THROW(kendall_tau(two, two), ParameterError);
  EXPECT_THROW(distance_correlation(two, two), ParameterError);
  EXPECT_THROW(pearson(flat, three), UndefinedCorrelationError);
  EXPECT_THROW(spearman(three, flat), UndefinedCorrelationError);
  EXPECT_THROW(kendall_tau(flat, three), UndefinedCorrelationError);
  EXPECT_EQ(distance_correlation(flat, three), 0.0);
}

TEST(DistanceCorrelationPValue, DeterministicAndInRange) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(60), y(60), noise(60);
  for (int i = 0; i < 60; ++i) {
    x[i] = normal(rng);
    y[i] = x[i] * x[i] + 0.1 * normal(rng);
    noise[i] = normal(rng);
  }
  const double p1 = distance_correlation_pvalue(x, y, 999, 3);
  EXPECT_EQ(p1, distance_correlation_pvalue(x, y, 999, 3));
  EXPECT_GE(p1, 1.0 / 1000.0);
  EXPECT_LT(p1, 0.01);
  const double p2 = distance_correlation_pvalue(x, noise, 999, 3);
  EXPECT_GT(p2, 0.01);
  EXPECT_LE(p2, 1.0);
}
