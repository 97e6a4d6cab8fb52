#include "unitals/sampler.hpp"

#include <random>

#include "gtest/gtest.h"
#include "test_helpers.hpp"
#include "unitals/unital.hpp"

using unitals::Lemma5Options;
using unitals::LineId;
using unitals::PartialLinearSpace;
using unitals::sample_points;
using unitals::SampleParams;

namespace {

TEST(Sampler, FullProbabilityKeepsEverything) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  PartialLinearSpace s = sample_points(h3, 1.0, 42);
  EXPECT_EQ(s, h3);
}

TEST(Sampler, ZeroProbabilityDropsEverything) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  PartialLinearSpace s = sample_points(h3, 0.0, 42);
  EXPECT_EQ(s.point_count(), 0u);
  EXPECT_EQ(s.line_count(), 63u);
  for (LineId l = 0; l < s.line_count(); ++l) EXPECT_TRUE(s.line(l).empty());
}

TEST(Sampler, DeterministicPerSeed) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  EXPECT_EQ(sample_points(h3, 0.6, 7), sample_points(h3, 0.6, 7));
  EXPECT_FALSE(sample_points(h3, 0.6, 7) == sample_points(h3, 0.6, 8));
}

TEST(Sampler, PointCountConcentratesAtDeskScale) {
  PartialLinearSpace h7 = unitals::build_hermitian_unital(7);
  SampleParams params;
  params.a = 4;
  params.q = 7;
  double pi = params.pi();
  double q2logq = 49.0 * std::log(7.0);
  int in_range = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto s = sample_points(h7, pi, seed);
    double n = static_cast<double>(s.point_count());
    if (n >= 4 * q2logq / 2 && n <= 2 * 4 * q2logq) ++in_range;
  }
  EXPECT_GE(in_range, 95);
}

TEST(Lemma5, FullSampleAtQ3) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  SampleParams params;
  params.a = 4;
  params.q = 3;
  params.s = 3;
  params.seed = 1;
  auto h = sample_points(h3, 1.0, params.seed);
  auto rep = unitals::verify_lemma5(h, params, 6.0);
  EXPECT_TRUE(rep.i_ok);
  EXPECT_EQ(rep.line_count, 63u);
  EXPECT_TRUE(rep.ii_ok);   // 28 within [9.88, 79.1]
  EXPECT_TRUE(rep.iii_ok);  // 4 >= 2.197
  EXPECT_TRUE(rep.iv_ok_k);
  EXPECT_TRUE(rep.iv_exhaustive);
  EXPECT_EQ(rep.iv_pairs_checked, 28u * 36u);  // 28 points, C(9,2) pairs
  EXPECT_TRUE(rep.v_ok);
  EXPECT_GT(rep.spot_checks_run, 0u);
  // Desk parameters: the regime flags must say so.
  EXPECT_FALSE(rep.regime_violations.empty());
}

TEST(Lemma5, MaxFansMatchesPairOracle) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  SampleParams params;
  params.a = 4;
  params.q = 3;
  params.s = 3;
  auto rep = unitals::verify_lemma5(h3, params, 6.0);
  EXPECT_EQ(unitals::count_fans_on_pair(h3, rep.iv_argmax_a, rep.iv_argmax_b,
                                        4),
            rep.max_fans);
  // In the full unital every crossing pair carries the same fan count, so
  // spot-check one pair against the subset oracle.
  auto m = h3.meet(0, 1);
  if (m) {
    EXPECT_EQ(unitals::count_fans_on_pair(h3, 0, 1, 4),
              testhelpers::fan_count_by_subsets(h3, 0, 1, 4));
  }
}

TEST(Lemma5, EmptySampleFailsIIandIII) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  SampleParams params;
  params.a = 4;
  params.q = 3;
  params.s = 3;
  auto h = sample_points(h3, 0.0, 5);
  auto rep = unitals::verify_lemma5(h, params, 6.0);
  EXPECT_TRUE(rep.i_ok);
  EXPECT_FALSE(rep.ii_ok);
  EXPECT_FALSE(rep.iii_ok);
  EXPECT_FALSE(rep.pass_ii_iii_iv());
}

TEST(Lemma5, SampledPairModeIsDeterministic) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  SampleParams params;
  params.a = 4;
  params.q = 3;
  params.s = 3;
  params.seed = 11;
  Lemma5Options opts;
  opts.iv_exhaustive_limit = 10;  // force sampling
  opts.iv_sample = 500;
  auto r1 = unitals::verify_lemma5(h3, params, 6.0, opts);
  auto r2 = unitals::verify_lemma5(h3, params, 6.0, opts);
  EXPECT_FALSE(r1.iv_exhaustive);
  EXPECT_EQ(r1.iv_pairs_checked, 500u);
  EXPECT_EQ(r1.max_fans, r2.max_fans);
  auto exhaustive = unitals::verify_lemma5(h3, params, 6.0);
  EXPECT_LE(r1.max_fans, exhaustive.max_fans);
}

TEST(Lemma5, JsonShape) {
  PartialLinearSpace h2 = unitals::build_hermitian_unital(2);
  SampleParams params;
  params.a = 4;
  params.q = 2;
  params.s = 3;
  auto rep = unitals::verify_lemma5(h2, params, 6.0);
  auto j = rep.to_json();
  EXPECT_TRUE(j.contains("i"));
  EXPECT_TRUE(j.contains("ii"));
  EXPECT_TRUE(j["ii"].contains("ok"));
  EXPECT_TRUE(j.contains("iii"));
  EXPECT_TRUE(j.contains("iv"));
  EXPECT_TRUE(j.contains("v"));
  EXPECT_TRUE(j.contains("stats"));
  EXPECT_TRUE(j["i"].is_boolean());
  EXPECT_TRUE(j["v"].is_boolean());
}

TEST(SampleUntilGood, DeterministicConfigurationSucceedsFirstTry) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  SampleParams params;
  params.a = 4;
  params.q = 3;
  params.s = 3;
  params.seed = 9;
  params.pi_override = 1.0;
  auto result = unitals::sample_until_good(h3, params, 6.0);
  EXPECT_EQ(result.attempts, 1u);
  EXPECT_TRUE(result.report.pass_ii_iii_iv());
}

TEST(SampleUntilGood, ExhaustsRetries) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  SampleParams params;
  params.a = 4;
  params.q = 3;
  params.s = 3;
  params.max_retries = 3;
  params.pi_override = 0.0;
  try {
    unitals::sample_until_good(h3, params, 6.0);
    FAIL() << "expected retries_exhausted_error";
  } catch (const unitals::retries_exhausted_error& e) {
    EXPECT_FALSE(e.last_report().ii_ok);
  }
}

TEST(SampleUntilGood, DeskScaleQ7SucceedsQuickly) {
  PartialLinearSpace h7 = unitals::build_hermitian_unital(7);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    SampleParams params;
    params.a = 4;
    params.q = 7;
    params.s = 3;
    params.seed = seed;
    params.max_retries = 10;
    auto result = unitals::sample_until_good(h7, params, 6.0);
    EXPECT_LE(result.attempts, 10u);
    EXPECT_TRUE(result.report.pass_ii_iii_iv());
  }
}

TEST(BBound, EmptySetHolds) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  auto r = unitals::verify_b_bound(h3, std::vector<LineId>{}, 4.0, 2, 3);
  EXPECT_EQ(r.lhs, 0u);
  EXPECT_LT(r.rhs, 0);
  EXPECT_TRUE(r.holds);
}

TEST(BBound, FullLineSetDoubleCount) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  std::vector<LineId> all(h3.line_count());
  for (LineId l = 0; l < all.size(); ++l) all[l] = l;
  auto r = unitals::verify_b_bound(h3, all, 4.0, 1, 3);
  // b = 1: the heavy sum is the full incidence count, 63 lines x 4 points.
  EXPECT_EQ(r.lhs, 252u);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.heavy_points, 28u);
}

TEST(BBound, HeavyPointsShrinkWithB) {
  PartialLinearSpace h7 = unitals::build_hermitian_unital(7);
  auto h = sample_points(h7, 0.8, 3);
  std::vector<LineId> x;
  for (LineId l = 0; l < 200; ++l) x.push_back(l);
  std::size_t prev = ~std::size_t{0};
  for (unsigned b = 1; b <= 6; ++b) {
    auto r = unitals::verify_b_bound(h, x, 4.0, b, 7);
    EXPECT_LE(r.heavy_points, prev);
    prev = r.heavy_points;
  }
}

TEST(BBound, RandomSubsetsAtDeskScale) {
  PartialLinearSpace h7 = unitals::build_hermitian_unital(7);
  SampleParams params;
  params.a = 4;
  params.q = 7;
  params.s = 3;
  params.seed = 77;
  auto result = unitals::sample_until_good(h7, params, 2.0);
  const unsigned b = 2;
  const std::size_t x_size = 8 * b * 49;  // 784 of 2107 lines
  std::mt19937_64 gen(123);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LineId> all(result.space.line_count());
    for (LineId l = 0; l < all.size(); ++l) all[l] = l;
    for (std::size_t i = 0; i < x_size; ++i)
      std::swap(all[i], all[i + gen() % (all.size() - i)]);
    all.resize(x_size);
    auto r = unitals::verify_b_bound(result.space, all, params.a, b, params.q);
    EXPECT_TRUE(r.holds) << "trial " << trial;
  }
}

TEST(BBound, DoubleCountingIdentity) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  auto h = sample_points(h3, 0.7, 21);
  std::vector<LineId> x{0, 5, 9, 17, 30, 44, 62};
  // b = 1 makes the heavy sum equal the incidence double count.
  auto r = unitals::verify_b_bound(h, x, 4.0, 1, 3);
  std::uint64_t incidences = 0;
  for (LineId l : x) incidences += h.line(l).size();
  EXPECT_EQ(r.lhs, incidences);
}

}  // namespace
