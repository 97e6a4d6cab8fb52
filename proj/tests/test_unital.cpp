#include "unitals/unital.hpp"

#include <set>

#include "gtest/gtest.h"
#include "test_helpers.hpp"

using unitals::build_hermitian_unital;
using unitals::classify_crossing;
using unitals::count_fans_on_pair;
using unitals::CrossingClass;
using unitals::find_onan;
using unitals::LineId;
using unitals::PartialLinearSpace;
using unitals::verify_design;

namespace {

TEST(Unital, PointCounts) {
  EXPECT_EQ(build_hermitian_unital(2).point_count(), 9u);
  EXPECT_EQ(build_hermitian_unital(3).point_count(), 28u);
  EXPECT_EQ(build_hermitian_unital(4).point_count(), 65u);
}

TEST(Unital, LineCountsAndSizes) {
  PartialLinearSpace h3 = build_hermitian_unital(3);
  EXPECT_EQ(h3.line_count(), 63u);
  for (LineId l = 0; l < h3.line_count(); ++l)
    EXPECT_EQ(h3.line(l).size(), 4u);
  EXPECT_EQ(build_hermitian_unital(4).line_count(), 208u);
}

TEST(Unital, DesignVerifiesExhaustively) {
  for (unsigned q : {2u, 3u, 4u}) {
    auto report = verify_design(build_hermitian_unital(q), q);
    EXPECT_TRUE(report.ok()) << "q = " << q;
    EXPECT_EQ(report.pairs_uncovered, 0u);
    EXPECT_EQ(report.pairs_multi, 0u);
  }
}

TEST(Unital, DesignReportFlagsDuplicatedLine) {
  PartialLinearSpace h2 = build_hermitian_unital(2);
  auto lines = h2.lines();
  lines.push_back(lines.front());  // pair on two lines now
  PartialLinearSpace broken(h2.point_count(), std::move(lines));
  auto report = verify_design(broken, 2);
  EXPECT_FALSE(report.ok());
  EXPECT_GT(report.pairs_multi, 0u);
  EXPECT_FALSE(report.line_count_ok);
}

TEST(Unital, NoOnanInSmallHermitianUnitals) {
  EXPECT_FALSE(find_onan(build_hermitian_unital(2)).has_value());
  EXPECT_FALSE(find_onan(build_hermitian_unital(3)).has_value());
}

TEST(Unital, OnanSubsetOracleAgreesOnH2) {
  PartialLinearSpace h2 = build_hermitian_unital(2);
  EXPECT_FALSE(testhelpers::onan_by_subsets(h2).has_value());
}

TEST(Unital, CanonicalOnanIsFound) {
  PartialLinearSpace s = testhelpers::canonical_onan();
  auto w = find_onan(s);
  ASSERT_TRUE(w.has_value());
  std::set<unitals::PointId> pts(w->points.begin(), w->points.end());
  EXPECT_EQ(pts.size(), 6u);
  EXPECT_EQ(w->lines, (std::array<LineId, 4>{0, 1, 2, 3}));
  EXPECT_TRUE(testhelpers::onan_by_subsets(s).has_value());
}

TEST(Unital, OnanBudgetIsEnforced) {
  PartialLinearSpace h3 = build_hermitian_unital(3);
  EXPECT_THROW(find_onan(h3, 5), unitals::budget_exceeded_error);
}

TEST(Unital, ClassifyConcurrent) {
  PartialLinearSpace h3 = build_hermitian_unital(3);
  const auto& pencil = h3.lines_through(0);
  ASSERT_GE(pencil.size(), 3u);
  std::vector<LineId> lines(pencil.begin(), pencil.begin() + 3);
  auto c = classify_crossing(h3, lines);
  EXPECT_TRUE(c.is_concurrent());
  EXPECT_EQ(c.point, std::optional<unitals::PointId>{0});
}

TEST(Unital, ClassifyTriangle) {
  PartialLinearSpace h3 = build_hermitian_unital(3);
  // Find any triangle: two crossing lines plus a third crossing both away
  // from their meet.
  for (LineId a = 0; a < h3.line_count(); ++a)
    for (LineId b = a + 1; b < h3.line_count(); ++b) {
      auto m = h3.meet(a, b);
      if (!m) continue;
      for (LineId c = b + 1; c < h3.line_count(); ++c) {
        auto ma = h3.meet(a, c), mb = h3.meet(b, c);
        if (!ma || !mb || *ma == *m || *mb == *m) continue;
        auto cls = classify_crossing(h3, std::vector<LineId>{a, b, c});
        ASSERT_TRUE(cls.is_fan());
        EXPECT_TRUE(cls.triangle);
        EXPECT_FALSE(cls.point.has_value());
        return;
      }
    }
  FAIL() << "no triangle found in H_3";
}

TEST(Unital, ClassifyDisjointInvalid) {
  PartialLinearSpace s(6, {{0, 1}, {2, 3}, {4, 5}});
  auto c = classify_crossing(s, std::vector<LineId>{0, 1, 2});
  EXPECT_TRUE(c.is_invalid());
  EXPECT_NE(c.reason.find("disjoint"), std::string::npos);
}

TEST(Unital, ClassifyFourLineFan) {
  // Three lines through point 0, one line crossing all three elsewhere.
  PartialLinearSpace s(7,
                       {{0, 1, 4}, {0, 2, 5}, {0, 3, 6}, {1, 2, 3}});
  auto c = classify_crossing(s, std::vector<LineId>{0, 1, 2, 3});
  ASSERT_TRUE(c.is_fan());
  EXPECT_FALSE(c.triangle);
  EXPECT_EQ(c.point, std::optional<unitals::PointId>{0});
}

TEST(Unital, ClassifyValidatesInput) {
  PartialLinearSpace h2 = build_hermitian_unital(2);
  EXPECT_THROW(classify_crossing(h2, std::vector<LineId>{0, 1}),
               std::invalid_argument);
  EXPECT_THROW(classify_crossing(h2, std::vector<LineId>{0, 1, 99}),
               unitals::unknown_line_error);
  EXPECT_THROW(classify_crossing(h2, std::vector<LineId>{0, 1, 1}),
               std::invalid_argument);
}

// Lemma: pairwise-crossing sets in a Hermitian unital classify as concurrent
// or fan, never "neither". Exhaustive for sizes 3 and 4 at q = 2 (the q = 3
// run lives in the acceptance suite).
TEST(Unital, NoNeitherClassificationsH2) {
  PartialLinearSpace h2 = build_hermitian_unital(2);
  const std::size_t n = h2.line_count();
  auto crossing = [&](LineId a, LineId b) { return h2.meet(a, b).has_value(); };
  for (LineId a = 0; a < n; ++a)
    for (LineId b = a + 1; b < n; ++b) {
      if (!crossing(a, b)) continue;
      for (LineId c = b + 1; c < n; ++c) {
        if (!crossing(a, c) || !crossing(b, c)) continue;
        auto c3 = classify_crossing(h2, std::vector<LineId>{a, b, c});
        ASSERT_FALSE(c3.is_invalid());
        for (LineId d = c + 1; d < n; ++d) {
          if (!crossing(a, d) || !crossing(b, d) || !crossing(c, d)) continue;
          auto c4 = classify_crossing(h2, std::vector<LineId>{a, b, c, d});
          ASSERT_FALSE(c4.is_invalid());
        }
      }
    }
}

TEST(Unital, FanCountZeroWhenNoRoom) {
  // Two crossing lines alone: no fan of size 4 exists.
  PartialLinearSpace s(5, {{0, 1, 2}, {0, 3, 4}});
  EXPECT_EQ(count_fans_on_pair(s, 0, 1, 4), 0u);
}

TEST(Unital, FanCountSevenLineSpace) {
  // l0 = {p,x1,x2}, l1 = {p,y1,y2}, l2 = {p,z}, l3 = {x1,y1,z} plus three
  // fillers that each cross only one of the core lines. Exactly one 4-fan
  // contains l0 and l1.
  //
  // points: p=0 x1=1 x2=2 y1=3 y2=4 z=5 w1=6 w2=7 w3=8
  PartialLinearSpace s(9, {{0, 1, 2},
                           {0, 3, 4},
                           {0, 5},
                           {1, 3, 5},
                           {2, 6},
                           {4, 7},
                           {5, 8}});
  EXPECT_EQ(count_fans_on_pair(s, 0, 1, 4), 1u);
  EXPECT_EQ(testhelpers::fan_count_by_subsets(s, 0, 1, 4), 1u);
}

TEST(Unital, FanCountMatchesSubsetOracleOnH2) {
  PartialLinearSpace h2 = build_hermitian_unital(2);
  // A handful of crossing pairs, both code paths.
  int checked = 0;
  for (LineId a = 0; a < h2.line_count() && checked < 4; ++a)
    for (LineId b = a + 1; b < h2.line_count() && checked < 4; ++b) {
      if (!h2.meet(a, b)) continue;
      EXPECT_EQ(count_fans_on_pair(h2, a, b, 4),
                testhelpers::fan_count_by_subsets(h2, a, b, 4))
          << "pair " << a << "," << b;
      ++checked;
    }
  EXPECT_EQ(checked, 4);
}

TEST(Unital, FanCountDisjointThrows) {
  PartialLinearSpace s(4, {{0, 1}, {2, 3}});
  EXPECT_THROW(count_fans_on_pair(s, 0, 1, 4), unitals::lines_disjoint_error);
  EXPECT_THROW(count_fans_on_pair(s, 0, 7, 4), unitals::unknown_line_error);
}

TEST(Unital, FanCounterPairEnumeration) {
  PartialLinearSpace h2 = build_hermitian_unital(2);
  unitals::FanCounter fc(h2);
  // Every point lies on q^2 = 4 lines, so pairs = 9 * C(4,2).
  EXPECT_EQ(fc.intersecting_pair_count(), 9u * 6u);
  std::uint64_t seen = 0;
  fc.for_each_intersecting_pair([&](LineId a, LineId b, unitals::PointId p) {
    EXPECT_EQ(h2.meet(a, b), std::optional<unitals::PointId>{p});
    std::pair<LineId, LineId> at = fc.pair_at(seen);
    EXPECT_EQ(at.first, a);
    EXPECT_EQ(at.second, b);
    ++seen;
  });
  EXPECT_EQ(seen, fc.intersecting_pair_count());
}

}  // namespace
