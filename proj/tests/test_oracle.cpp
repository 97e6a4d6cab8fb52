#include "unitals/oracle.hpp"

#include "gtest/gtest.h"
#include "unitals/bounds.hpp"

namespace {

TEST(TinyGraphs, Basics) {
  auto c5 = unitals::TinyGraph::cycle(5);
  EXPECT_TRUE(c5.adjacent(0, 1));
  EXPECT_TRUE(c5.adjacent(4, 0));
  EXPECT_FALSE(c5.adjacent(0, 2));
  auto m = c5.to_mask_graph();
  EXPECT_EQ(unitals::max_ksfree_induced(m, 2), 2u);  // independence number
}

TEST(BruteForceF, SmallerThanSMeansWholeGraph) {
  for (unsigned s = 3; s <= 5; ++s)
    for (unsigned n = 1; n < s && n <= 4; ++n)
      EXPECT_EQ(unitals::brute_force_f(n, s), n) << "n=" << n << " s=" << s;
}

TEST(BruteForceF, CompleteGraphCases) {
  EXPECT_EQ(unitals::brute_force_f(2, 2), 1u);
  EXPECT_EQ(unitals::brute_force_f(3, 3), 2u);
  EXPECT_EQ(unitals::brute_force_f(4, 4), 3u);
}

TEST(BruteForceF, TriangleFreeValues) {
  // On 3 vertices only K_3 has independence number 1, and it is excluded.
  EXPECT_EQ(unitals::brute_force_f(3, 2), 2u);
  EXPECT_EQ(unitals::brute_force_f(5, 2), 2u);  // attained by C_5
  EXPECT_EQ(unitals::brute_force_f(6, 2), 3u);  // r(3,3) = 6 forces 3
}

TEST(BruteForceF, K4FreeSmall) {
  EXPECT_EQ(unitals::brute_force_f(3, 3), 2u);
  EXPECT_EQ(unitals::brute_force_f(4, 3), 3u);
}

TEST(BruteForceF, SizeGuards) {
  EXPECT_THROW(unitals::brute_force_f(9, 3), unitals::too_large_error);
  EXPECT_THROW(unitals::brute_force_f(8, 3), unitals::too_large_error);
  EXPECT_THROW(unitals::brute_force_f(5, 1), std::invalid_argument);
}

TEST(BruteForceF, DegreeSortFilterIsSound) {
  // Every graph has a relabeling with non-decreasing degrees.
  for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
    auto g = unitals::detail::graph_from_mask(5, mask);
    unsigned degs[5];
    for (unsigned i = 0; i < 5; ++i)
      degs[i] = static_cast<unsigned>(std::popcount(g.adj[i]));
    std::sort(degs, degs + 5);
    // The sorted-representative exists: check by explicit search.
    bool found = false;
    unsigned perm[5] = {0, 1, 2, 3, 4};
    std::sort(perm, perm + 5,
              [&](unsigned a, unsigned b) {
                return std::popcount(g.adj[a]) < std::popcount(g.adj[b]);
              });
    unitals::MaskGraph relabeled;
    relabeled.n = 5;
    for (unsigned i = 0; i < 5; ++i)
      for (unsigned j = i + 1; j < 5; ++j)
        if (g.adjacent(perm[i], perm[j])) relabeled.add_edge(i, j);
    found = unitals::detail::degrees_sorted(relabeled);
    EXPECT_TRUE(found) << "mask " << mask;
  }
}

TEST(BruteMu, PinnedValues) {
  std::vector<std::uint64_t> sizes{2, 2, 2};
  EXPECT_DOUBLE_EQ(unitals::brute_expected_ks(sizes, 1.0), 8.0);
  std::vector<std::uint64_t> ones{1, 1, 1};
  EXPECT_DOUBLE_EQ(unitals::brute_expected_ks(ones, 0.5), 0.125);
  std::vector<std::uint64_t> big{100, 100, 100};
  EXPECT_THROW(unitals::brute_expected_ks(big, 0.5),
               unitals::too_large_error);
}

TEST(BruteDelta, PinnedValues) {
  std::vector<std::uint64_t> sizes{2, 2, 2};
  EXPECT_NEAR(unitals::brute_delta(sizes, 1.0), 24.0, 1e-12);
  EXPECT_DOUBLE_EQ(unitals::brute_delta(sizes, 0.0), 0.0);
}

TEST(OracleEquivalence, MuAcrossConfigurations) {
  std::vector<std::vector<std::uint64_t>> configs{
      {2, 2, 2}, {3, 4, 5}, {1, 2, 3}, {4, 4, 4}, {2, 2, 2, 2}, {3, 3, 3, 3}};
  for (const auto& sizes : configs)
    for (double rho : {0.0, 0.3, 0.5, 1.0}) {
      double brute = unitals::brute_expected_ks(sizes, rho);
      double formula = unitals::janson_mu(sizes, rho).to_double();
      EXPECT_NEAR(brute, formula, 1e-12 * std::max(1.0, std::abs(brute)))
          << "rho " << rho;
    }
}

TEST(OracleEquivalence, DeltaAcrossConfigurations) {
  std::vector<std::vector<std::uint64_t>> configs{
      {2, 2, 2}, {3, 4, 5}, {2, 3, 4}, {2, 2, 2, 2}, {3, 3, 3, 3}};
  for (const auto& sizes : configs)
    for (double rho : {0.3, 0.5, 1.0}) {
      double brute = unitals::brute_delta(sizes, rho);
      double formula = unitals::janson_delta(sizes, rho).to_double();
      double tol = 1e-9 * std::max(1.0, std::abs(brute));
      EXPECT_NEAR(brute, formula, tol) << "rho " << rho;
    }
}

TEST(MonteCarlo, KsCountMeanNearExpectation) {
  std::vector<std::uint64_t> sizes{3, 4, 5};
  double rho = 0.3;
  auto stats = unitals::mc_ks_count_mean(sizes, rho, 20'000, 2024);
  double mu = unitals::brute_expected_ks(sizes, rho);
  EXPECT_NEAR(stats.mean, mu, 4 * stats.std_error);
}

TEST(MonteCarlo, KsFreeFrequencyEndpoints) {
  std::vector<std::uint64_t> sizes{2, 2, 2};
  EXPECT_EQ(unitals::mc_ks_free_frequency(sizes, 1.0, 50, 1), 0.0);
  EXPECT_EQ(unitals::mc_ks_free_frequency(sizes, 0.0, 50, 1), 1.0);
}

TEST(MonteCarlo, BinomialTailMatchesSetup) {
  // With eps = 1 the upper tail event Z > 2 mu is impossible for p = 0.5.
  EXPECT_EQ(unitals::mc_binomial_tail(100, 0.5, 1.0, true, 200, 3), 0.0);
}

}  // namespace
