#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "granular/poisson.hpp"
#include "granular/random.hpp"
#include "granular/stats.hpp"

using namespace granular;

namespace {

RunningStats draw_stats(double lambda, int n, std::uint64_t seed, bool normal = false) {
  Xoshiro256 rng(seed);
  RunningStats acc;
  for (int i = 0; i < n; ++i) {
    acc.push(static_cast<double>(normal ? sample_poisson_normal(lambda, rng)
                                        : sample_poisson(lambda, rng)));
  }
  return acc;
}

// Brute-force pmf e^-lambda lambda^k / k!, evaluated by log-gamma.
double poisson_pmf(double lambda, int k) {
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

void expect_pmf_match(double lambda, int k_lo, int k_hi, int n, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  std::vector<int> counts(k_hi - k_lo + 1, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = sample_poisson(lambda, rng);
    if (k >= k_lo && k <= k_hi) ++counts[k - k_lo];
  }
  for (int k = k_lo; k <= k_hi; ++k) {
    const double p = poisson_pmf(lambda, k);
    const double sigma = std::sqrt(n * p * (1.0 - p));
    EXPECT_LE(std::abs(counts[k - k_lo] - n * p), 5.0 * sigma + 1e-9)
        << "lambda=" << lambda << " k=" << k;
  }
}

}  // namespace

TEST(SamplePoisson, ZeroLambda) {
  Xoshiro256 rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_poisson(0.0, rng), 0);
}

TEST(SamplePoisson, DomainAndGuard) {
  Xoshiro256 rng(1);
  EXPECT_THROW(sample_poisson(-1.0, rng), DomainError);
  EXPECT_THROW(sample_poisson(std::nan(""), rng), DomainError);
  EXPECT_THROW(sample_poisson(2e9, rng), GuardError);
  EXPECT_NO_THROW(sample_poisson(1e9, rng));
}

TEST(SamplePoisson, MomentsAtHundred) {
  const auto acc = draw_stats(100.0, 1000000, 2024);
  EXPECT_NEAR(acc.mean(), 100.0, 0.05);
  EXPECT_NEAR(acc.stddev(), 10.0, 0.05);
}

TEST(SamplePoisson, PmfInversionRegime) { expect_pmf_match(4.0, 0, 12, 1000000, 99); }

TEST(SamplePoisson, PmfRejectionRegime) { expect_pmf_match(57.5, 35, 85, 1000000, 17); }

TEST(SamplePoisson, PmfAtRegimeBoundary) {
  expect_pmf_match(30.0, 15, 45, 400000, 5);
  expect_pmf_match(30.0001, 15, 45, 400000, 6);
}

TEST(SamplePoisson, LargeLambdaMoments) {
  for (double lambda : {1e4, 1e8, 1e9}) {
    const auto acc = draw_stats(lambda, 100000, 31);
    const double sd = std::sqrt(lambda);
    EXPECT_NEAR(acc.mean(), lambda, 5.0 * sd / std::sqrt(1e5)) << lambda;
    EXPECT_NEAR(acc.stddev(), sd, 5.0 * sd / std::sqrt(2e5)) << lambda;
  }
}

TEST(SamplePoisson, DeterministicGivenState) {
  Xoshiro256 a(123, 7), b(123, 7), c(123, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_poisson(75.0, a);
    EXPECT_EQ(x, sample_poisson(75.0, b));
    differs = differs || x != sample_poisson(75.0, c);
  }
  EXPECT_TRUE(differs);
}

TEST(SamplePoissonNormal, Moments) {
  const auto acc = draw_stats(1e6, 100000, 8, true);
  EXPECT_NEAR(acc.mean(), 1e6, 50.0);
  EXPECT_NEAR(acc.stddev(), 1e3, 25.0);
}

TEST(SamplePoissonNormal, AgreesWithExact) {
  const auto exact = draw_stats(1e6, 100000, 41);
  const auto approx = draw_stats(1e6, 100000, 42, true);
  EXPECT_LT(std::abs(exact.mean() / approx.mean() - 1.0), 1e-3);
}

TEST(SamplePoissonNormal, FloorAndClamp) {
  Xoshiro256 rng(3);
  EXPECT_THROW(sample_poisson_normal(999.0, rng), DomainError);
  for (int i = 0; i < 100000; ++i) EXPECT_GE(sample_poisson_normal(1e3, rng), 0);
}

TEST(Xoshiro256, UniformInUnitInterval) {
  Xoshiro256 rng(0);
  RunningStats acc;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    acc.push(u);
  }
  EXPECT_NEAR(acc.mean(), 0.5, 5.0 * std::sqrt(1.0 / 12.0 / 2e5));
}
