#include "unitals/line_graph.hpp"

#include <sstream>

#include "gtest/gtest.h"
#include "unitals/sampler.hpp"
#include "unitals/unital.hpp"

using unitals::apply_pencil_filter;
using unitals::build_intersection_graph;
using unitals::LineGraph;
using unitals::LineId;
using unitals::PartialLinearSpace;
using unitals::PencilColoring;
using unitals::PointId;
using unitals::random_pencil_coloring;
using unitals::sample_edges;

namespace {

TEST(LineGraphBuild, DisjointLinesGiveEdgelessGraph) {
  PartialLinearSpace s(6, {{0, 1}, {2, 3}, {4, 5}});
  LineGraph g = build_intersection_graph(s);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_FALSE(g.adjacent(0, 1));
}

TEST(LineGraphBuild, PencilCliquesInFullUnital) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  EXPECT_EQ(g.vertex_count(), 63u);
  // Pencils are edge-disjoint cliques of size q^2 = 9; 28 points each
  // contribute C(9,2) edges.
  EXPECT_EQ(g.edge_count(), 28u * 36u);
  for (PointId p = 0; p < h3.point_count(); ++p) {
    const auto& pen = h3.lines_through(p);
    EXPECT_EQ(pen.size(), 9u);
    for (std::size_t i = 0; i < pen.size(); ++i)
      for (std::size_t j = i + 1; j < pen.size(); ++j)
        EXPECT_TRUE(g.adjacent(pen[i], pen[j]));
  }
  for (LineId l = 0; l < g.vertex_count(); ++l) {
    EXPECT_FALSE(g.adjacent(l, l));
    EXPECT_GE(g.degree(l), 8u);
  }
}

TEST(LineGraphBuild, MeetPointsMatchGeometry) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  ASSERT_TRUE(g.has_meets());
  std::size_t checked = 0;
  g.for_each_edge([&](LineId u, LineId v, PointId meet) {
    if (checked++ % 17) return;  // spot check
    EXPECT_EQ(h3.meet(u, v), std::optional<PointId>{meet});
    EXPECT_EQ(g.meet_point(u, v), std::optional<PointId>{meet});
  });
  EXPECT_EQ(g.meet_point(0, 0), std::nullopt);
}

TEST(LineGraphBuild, HandBuiltK4) {
  // Three concurrent lines plus one crossing all three elsewhere.
  PartialLinearSpace s(7, {{0, 1, 4}, {0, 2, 5}, {0, 3, 6}, {1, 2, 3}});
  LineGraph g = build_intersection_graph(s);
  EXPECT_EQ(g.edge_count(), 6u);
  for (LineId u = 0; u < 4; ++u)
    for (LineId v = u + 1; v < 4; ++v) EXPECT_TRUE(g.adjacent(u, v));
}

TEST(LineGraphBuild, RejectsNonLinearSpaces) {
  PartialLinearSpace bad(4, {{0, 1, 2}, {0, 1, 3}});
  EXPECT_THROW(build_intersection_graph(bad), unitals::not_linear_error);
}

TEST(PencilColoringTest, DeterministicAndInRange) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  PencilColoring c1 = random_pencil_coloring(h3, 3, 99);
  PencilColoring c2 = random_pencil_coloring(h3, 3, 99);
  for (PointId p = 0; p < h3.point_count(); ++p) {
    const auto& pen = h3.lines_through(p);
    EXPECT_EQ(c1.pencil(p), pen);
    for (LineId l : pen) {
      EXPECT_LT(c1.color(p, l), 3);
      EXPECT_EQ(c1.color(p, l), c2.color(p, l));
    }
  }
  EXPECT_THROW(c1.color(0, 62), unitals::missing_color_error);
}

TEST(PencilColoringTest, ColorClassConcentration) {
  // Pencils of size b = 48 under s = 3 colors: some class below b/2s = 8
  // with frequency at most exp(-b/8s) = exp(-2).
  const unsigned b = 48, s = 3;
  const double bound = std::exp(-2.0);
  int failures = 0;
  const int trials = 10'000;
  for (int t = 0; t < trials; ++t) {
    unsigned counts[3] = {0, 0, 0};
    for (unsigned i = 0; i < b; ++i)
      ++counts[unitals::rng::derive(0xfeed, t, i) % s];
    if (counts[0] < b / (2 * s) || counts[1] < b / (2 * s) ||
        counts[2] < b / (2 * s))
      ++failures;
  }
  EXPECT_LE(static_cast<double>(failures) / trials, bound);
}

TEST(PencilFilter, MonochromaticPencilsRemoveEverything) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  std::vector<std::vector<LineId>> pencils(h3.point_count());
  std::vector<std::vector<std::uint8_t>> colors(h3.point_count());
  for (PointId p = 0; p < h3.point_count(); ++p) {
    pencils[p] = h3.lines_through(p);
    colors[p].assign(pencils[p].size(), 0);
  }
  PencilColoring mono(std::move(pencils), std::move(colors), 3);
  LineGraph filtered = apply_pencil_filter(g, mono);
  EXPECT_EQ(filtered.edge_count(), 0u);
  EXPECT_EQ(filtered.vertex_count(), g.vertex_count());
}

TEST(PencilFilter, RainbowKeepsEverything) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  // s = 16 > pencil size 9 lets every pencil be rainbow.
  std::vector<std::vector<LineId>> pencils(h3.point_count());
  std::vector<std::vector<std::uint8_t>> colors(h3.point_count());
  for (PointId p = 0; p < h3.point_count(); ++p) {
    pencils[p] = h3.lines_through(p);
    for (std::size_t i = 0; i < pencils[p].size(); ++i)
      colors[p].push_back(static_cast<std::uint8_t>(i));
  }
  PencilColoring rainbow(std::move(pencils), std::move(colors), 16);
  LineGraph filtered = apply_pencil_filter(g, rainbow);
  EXPECT_TRUE(filtered.same_edges(g));
}

TEST(PencilFilter, SingleColorParameterRemovesAllEdges) {
  PartialLinearSpace h2 = unitals::build_hermitian_unital(2);
  LineGraph g = build_intersection_graph(h2);
  PencilColoring chi = random_pencil_coloring(h2, 1, 4);
  EXPECT_EQ(apply_pencil_filter(g, chi).edge_count(), 0u);
}

TEST(PencilFilter, NoMonochromaticEdgeSurvives) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    PencilColoring chi = random_pencil_coloring(h3, 3, seed);
    LineGraph filtered = apply_pencil_filter(g, chi);
    for (PointId p = 0; p < h3.point_count(); ++p) {
      const auto& pen = h3.lines_through(p);
      for (std::size_t i = 0; i < pen.size(); ++i)
        for (std::size_t j = i + 1; j < pen.size(); ++j)
          if (filtered.adjacent(pen[i], pen[j]))
            EXPECT_NE(chi.color(p, pen[i]), chi.color(p, pen[j]));
    }
    // Pigeonhole: no 4 lines of one pencil stay mutually adjacent under 3
    // colors.
    for (PointId p = 0; p < h3.point_count(); ++p) {
      const auto& pen = h3.lines_through(p);
      for (std::size_t a = 0; a < pen.size(); ++a)
        for (std::size_t b = a + 1; b < pen.size(); ++b)
          for (std::size_t c = b + 1; c < pen.size(); ++c)
            for (std::size_t d = c + 1; d < pen.size(); ++d) {
              bool complete = filtered.adjacent(pen[a], pen[b]) &&
                              filtered.adjacent(pen[a], pen[c]) &&
                              filtered.adjacent(pen[a], pen[d]) &&
                              filtered.adjacent(pen[b], pen[c]) &&
                              filtered.adjacent(pen[b], pen[d]) &&
                              filtered.adjacent(pen[c], pen[d]);
              EXPECT_FALSE(complete);
            }
    }
  }
}

TEST(PencilFilter, IncompleteColoringRejected) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  PartialLinearSpace h2 = unitals::build_hermitian_unital(2);
  LineGraph g = build_intersection_graph(h3);
  PencilColoring wrong = random_pencil_coloring(h2, 3, 5);
  EXPECT_THROW(apply_pencil_filter(g, wrong), unitals::missing_color_error);
}

TEST(EdgeSampling, EndpointsOfRange) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  EXPECT_TRUE(sample_edges(g, 1.0, 3).same_edges(g));
  EXPECT_EQ(sample_edges(g, 0.0, 3).edge_count(), 0u);
  EXPECT_THROW(sample_edges(g, 1.5, 3), std::invalid_argument);
}

TEST(EdgeSampling, BinomialConcentration) {
  PartialLinearSpace h4 = unitals::build_hermitian_unital(4);
  LineGraph g = build_intersection_graph(h4);
  const double rho = 0.5;
  const double mean = g.edge_count() * rho;
  const double sigma = std::sqrt(g.edge_count() * rho * (1 - rho));
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    double kept = static_cast<double>(sample_edges(g, rho, seed).edge_count());
    if (std::abs(kept - mean) <= 4 * sigma) ++within;
  }
  EXPECT_GE(within, 99);
}

TEST(EdgeSampling, DeterministicAndKeyedByPair) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  LineGraph a = sample_edges(g, 0.4, 11);
  LineGraph b = sample_edges(g, 0.4, 11);
  EXPECT_TRUE(a.same_edges(b));
  EXPECT_FALSE(a.same_edges(sample_edges(g, 0.4, 12)));
  // Meets survive sampling.
  ASSERT_TRUE(a.has_meets());
  a.for_each_edge([&](LineId u, LineId v, PointId meet) {
    EXPECT_EQ(h3.meet(u, v), std::optional<PointId>{meet});
  });
}

TEST(Intersection, Identities) {
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  LineGraph g = build_intersection_graph(h3);
  EXPECT_TRUE(unitals::intersect_graphs(g, g).same_edges(g));
  LineGraph empty(g.vertex_count());
  EXPECT_EQ(unitals::intersect_graphs(g, empty).edge_count(), 0u);
  LineGraph chi = apply_pencil_filter(g, random_pencil_coloring(h3, 3, 1));
  LineGraph rho = sample_edges(g, 0.6, 2);
  LineGraph h = unitals::intersect_graphs(rho, chi);
  EXPECT_LE(h.edge_count(), std::min(chi.edge_count(), rho.edge_count()));
  h.for_each_edge([&](LineId u, LineId v, PointId) {
    EXPECT_TRUE(chi.adjacent(u, v));
    EXPECT_TRUE(rho.adjacent(u, v));
  });
  LineGraph wrong(5);
  EXPECT_THROW(unitals::intersect_graphs(g, wrong),
               unitals::vertex_mismatch_error);
}

TEST(Export, EdgeListFormat) {
  PartialLinearSpace s(3, {{0, 1}, {1, 2}, {0, 2}});
  LineGraph g = build_intersection_graph(s);
  std::ostringstream os;
  unitals::write_edge_list(os, g);
  EXPECT_EQ(os.str(), "g 3\ne 0 1 1\ne 0 2 0\ne 1 2 2\n");
}

TEST(Determinism, PipelineEdgeSetsIndependentOfThreads) {
  // Construction is sequential by design; this guards the full chain
  // against accidental order dependence by rebuilding twice.
  PartialLinearSpace h3 = unitals::build_hermitian_unital(3);
  auto build = [&] {
    auto h = unitals::sample_points(h3, 0.8, 17);
    LineGraph g = build_intersection_graph(h);
    LineGraph chi = apply_pencil_filter(g, random_pencil_coloring(h, 3, 18));
    LineGraph rho = sample_edges(g, 0.7, 19);
    return unitals::intersect_graphs(rho, chi);
  };
  EXPECT_TRUE(build().same_edges(build()));
}

}  // namespace
