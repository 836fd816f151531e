#include <gtest/gtest.h>

#include <random>

#include "dave/analysis.hpp"
#include "dave/bounds.hpp"

using namespace dave;

TEST(Bounds, ConvolutionAlgebra) {
  auto x = make_sequence(-1, {1.0, 2.0, 3.0});
  EXPECT_EQ(convolve(x, delta(0)).values, x.values);
  EXPECT_EQ(convolve(x, delta(0)).offset, -1);
  auto shifted = convolve(x, delta(3));
  EXPECT_EQ(shifted.offset, 2);
  EXPECT_DOUBLE_EQ(shifted[4], 3.0);
  // step * step = ramp on the common support
  auto r = convolve(unit_step(0, 10), unit_step(0, 10));
  auto ramp = unit_ramp(0, 10);
  for (std::int64_t k = 0; k <= 10; ++k) EXPECT_DOUBLE_EQ(r[k], ramp[k]);
  auto s = add(x, scale(-1.0, x));
  EXPECT_TRUE(s.empty());
  EXPECT_DOUBLE_EQ(add(delta(0), delta(5))[5], 1.0);
  EXPECT_TRUE(convolve(x, sequence{}).empty());
}

TEST(Bounds, AutoConvolutionMatchesIteration) {
  for (std::uint32_t G : {2u, 3u, 8u}) {
    sequence b = delta(0);
    for (std::uint64_t j = 1; j <= 60; ++j) {
      b = convolve(b, binomial_kernel(G));
      double sum = 0;
      for (std::int64_t k = -1; k <= static_cast<std::int64_t>(j) + 1; ++k) {
        EXPECT_NEAR(auto_convolution(G, j, k), b[k], 1e-12) << G << " " << j << " " << k;
        sum += b[k];
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(Bounds, RecurrenceOnMaxDelayRounds) {
  for (std::uint32_t K : {3u, 6u, 12u}) {
    for (std::uint32_t G : {2u, 3u, 4u}) {
      auto t = max_delay_trace(K, G, 500);
      for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        EXPECT_TRUE(recurrence_check(t[j], t[j + 1], G));
        EXPECT_TRUE(ramp_bound_check(t[j + 1], 500, j + 1, G));
      }
    }
  }
}

TEST(Bounds, RecurrenceRejectsJumps) {
  // A round cannot keep more than a 1/G share of claims at count 0.
  EXPECT_FALSE(recurrence_check(distribution{100, 0, 0}, distribution{90, 10, 0}, 2));
  EXPECT_TRUE(recurrence_check(distribution{100, 0, 0}, distribution{50, 50, 0}, 2));
}

TEST(Bounds, RampCatchesFabricatedViolation) {
  distribution d{64, 0, 0, 0};
  EXPECT_TRUE(ramp_bound_check(d, 64, 0, 2));
  EXPECT_FALSE(ramp_bound_check(d, 64, 10, 2));
  EXPECT_TRUE(under_ramp(distribution{1, 5, 9, 13}));
  EXPECT_FALSE(under_ramp(distribution{2, 0, 0}));
  EXPECT_DOUBLE_EQ(ramp_offset(-1), 0.0);
  EXPECT_DOUBLE_EQ(ramp_offset(3), 13.0);
}

TEST(Bounds, JThreshold) {
  // alpha = ln(1/2) / (2e), worked by hand.
  EXPECT_EQ(j_threshold(1, 2, 2), 6u);  // j = 5.0717
  for (std::uint32_t K : {2u, 5u, 20u}) {
    for (std::uint32_t G : {2u, 4u, 8u}) {
      for (std::uint64_t N : {4ull, 1000ull, 1ull << 20}) {
        auto J = j_threshold(K, G, N);
        EXPECT_LE(static_cast<double>(J), big_j_bound(K, G, N) + 1e-9);
        for (std::uint32_t k = 0; k < K; ++k) {
          EXPECT_LT(static_cast<double>(N) * auto_convolution(G, J, k), 1.0 + 1e-9) << K << " " << G << " " << N;
        }
        auto t = max_delay_trace(K, G, N);
        if (J < t.size()) {
          EXPECT_TRUE(under_ramp(t[J]));
        }
      }
    }
  }
  EXPECT_THROW(j_threshold(1, 2, 1), error);
}

TEST(Bounds, SettlementBoundDominates) {
  for (std::uint32_t K : {2u, 9u, 30u}) {
    for (std::uint32_t G : {2u, 4u, 8u}) {
      EXPECT_LT(static_cast<double>(max_delay_rounds(K, G, 1000)), settlement_bound(K, G, 1000));
    }
  }
}

TEST(Bounds, BinomialPmf) {
  double s = 0;
  for (std::uint64_t i = 0; i <= 30; ++i) s += binomial_pmf(30, 0.3, i);
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(binomial_pmf(4, 0.5, 2), 0.375, 1e-14);
  EXPECT_EQ(binomial_pmf(4, 0.0, 0), 1.0);
  EXPECT_EQ(binomial_pmf(4, 1.0, 3), 0.0);
  EXPECT_EQ(binomial_pmf(4, 0.5, 5), 0.0);
}

TEST(Bounds, Hoeffding) {
  EXPECT_TRUE(hoeffding_tail_check(100, 0.5, 30));
  EXPECT_TRUE(hoeffding_tail_check(10, 0.5, 5));
  EXPECT_TRUE(hoeffding_tail_check(1000, 0.75, 700));
  EXPECT_THROW(hoeffding_tail_check(10, 0.3, 4), error);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t n = 1 + rng() % 400;
    double p = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
    auto k = static_cast<std::uint64_t>(std::floor(n * p * std::uniform_real_distribution<double>(0, 1)(rng)));
    EXPECT_TRUE(hoeffding_tail_check(n, p, k));
  }
}
