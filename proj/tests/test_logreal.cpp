#include "unitals/log_real.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

using unitals::LogReal;

namespace {

TEST(LogReal, ZeroAndOne) {
  LogReal z;
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.to_double(), 0.0);
  EXPECT_EQ(LogReal::one().to_double(), 1.0);
  EXPECT_EQ((z + LogReal::one()).to_double(), 1.0);
  EXPECT_TRUE((z * LogReal::one()).is_zero());
}

TEST(LogReal, MulIsExactInLogSpace) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 1000; ++i) {
    double la = (gen() % 2'000'000) / 1000.0 - 1000.0;
    double lb = (gen() % 2'000'000) / 1000.0 - 1000.0;
    LogReal a = LogReal::exp_of(la), b = LogReal::exp_of(lb);
    EXPECT_DOUBLE_EQ((a * b).log_magnitude(), la + lb);
    EXPECT_DOUBLE_EQ((a / b).log_magnitude(), la - lb);
    EXPECT_DOUBLE_EQ(a.pow(3.0).log_magnitude(), 3.0 * la);
  }
}

TEST(LogReal, HandlesHugeMagnitudes) {
  LogReal big = LogReal::pow2(1e7);  // far beyond double range
  LogReal bigger = big * big;
  EXPECT_GT(bigger, big);
  EXPECT_DOUBLE_EQ(bigger.log_magnitude(), 2e7 * std::log(2.0));
  EXPECT_TRUE((big / bigger) < LogReal::one());
}

TEST(LogReal, AdditionMatchesNativeTo12Digits) {
  std::mt19937_64 gen(2);
  auto rnd = [&](double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  };
  for (int i = 0; i < 5000; ++i) {
    double lx = rnd(-700, 700), ly = rnd(-700, 700);
    double x = std::exp(lx) * (gen() % 2 ? 1 : -1);
    double y = std::exp(ly) * (gen() % 2 ? 1 : -1);
    double want = x + y;
    LogReal got = LogReal::from_double(x) + LogReal::from_double(y);
    if (want == 0.0) {
      EXPECT_TRUE(got.is_zero());
      continue;
    }
    // Skip near-total cancellation, where no log representation keeps
    // relative accuracy.
    if (std::abs(want) < 1e-6 * std::max(std::abs(x), std::abs(y))) continue;
    EXPECT_NEAR(got.log_magnitude(), std::log(std::abs(want)), 1e-12)
        << "x=" << x << " y=" << y;
    EXPECT_EQ(got.sign(), want > 0 ? 1 : -1);
  }
}

TEST(LogReal, ExactCancellation) {
  LogReal a = LogReal::exp_of(123.456);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_TRUE((a + (-a)).is_zero());
}

TEST(LogReal, Comparisons) {
  LogReal z;
  LogReal small = LogReal::from_double(0.5);
  LogReal one = LogReal::one();
  LogReal neg = LogReal::from_double(-3.0);
  EXPECT_TRUE(neg < z);
  EXPECT_TRUE(z < small);
  EXPECT_TRUE(small < one);
  EXPECT_TRUE(neg < one);
  EXPECT_TRUE(LogReal::from_double(-10) < LogReal::from_double(-2));
  EXPECT_TRUE(one <= one);
  EXPECT_TRUE(one >= small);
}

TEST(LogReal, PowiSigns) {
  LogReal neg = LogReal::from_double(-2.0);
  EXPECT_DOUBLE_EQ(neg.powi(2).to_double(), 4.0);
  EXPECT_DOUBLE_EQ(neg.powi(3).to_double(), -8.0);
  EXPECT_EQ(neg.powi(0).to_double(), 1.0);
}

TEST(LogReal, LogChoose) {
  EXPECT_DOUBLE_EQ(LogReal::lchoose(5, 2).to_double(), 10.0);
  EXPECT_NEAR(LogReal::lchoose(10, 5).to_double(), 252.0, 1e-9);
  EXPECT_TRUE(LogReal::lchoose(5, 6).is_zero());
  EXPECT_TRUE(LogReal::lchoose(5, -1).is_zero());
  EXPECT_DOUBLE_EQ(LogReal::lchoose(5, 0).to_double(), 1.0);
  // Far outside native range: C(1e20, 1e10) has log around 1e10 ln(1e10).
  LogReal huge = LogReal::lchoose(1e20, 1e10);
  EXPECT_GT(huge.log_magnitude(), 1e10);
}

}  // namespace
