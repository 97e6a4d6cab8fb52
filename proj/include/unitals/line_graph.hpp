#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"
#include "unitals/bitset.hpp"
#include "unitals/errors.hpp"
#include "unitals/pls.hpp"
#include "unitals/rng.hpp"

namespace unitals {

inline constexpr PointId kNoMeet = std::numeric_limits<PointId>::max();

// Graph on line ids. Adjacency lives in a bit matrix up to
// kDenseVertexLimit vertices (the exhaustive-verification regime) and falls
// back to CSR-only above it; the CSR neighbor lists are always present, with
// a parallel meet-point array when the graph descends from a geometry.
// Immutable after construction.
class LineGraph {
 public:
  static constexpr std::size_t kDenseVertexLimit = 32768;

  struct Edge {
    LineId u, v;
    PointId meet;
  };

  LineGraph() = default;
  explicit LineGraph(std::size_t n) : n_(n) { finalize({}, false); }

  // Edges with u < v, any order, no duplicates (duplicates mean two lines
  // share two points and are rejected).
  static LineGraph from_edges(std::size_t n, std::vector<Edge> edges,
                              bool with_meets) {
    LineGraph g;
    g.n_ = n;
    g.finalize(std::move(edges), with_meets);
    return g;
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::uint64_t edge_count() const noexcept { return edges_; }
  bool dense() const noexcept { return bits_.has_value(); }
  bool has_meets() const noexcept { return !meets_.empty(); }

  bool adjacent(LineId u, LineId v) const {
    if (u == v) return false;
    if (bits_) return bits_->get(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  std::span<const LineId> neighbors(LineId u) const {
    return {nbr_.data() + row_begin_[u], row_begin_[u + 1] - row_begin_[u]};
  }
  std::size_t degree(LineId u) const {
    return row_begin_[u + 1] - row_begin_[u];
  }

  std::optional<PointId> meet_point(LineId u, LineId v) const {
    if (meets_.empty()) return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return std::nullopt;
    return meets_[row_begin_[u] + (it - nb.begin())];
  }

  const BitMatrix* adjacency_bits() const {
    return bits_ ? &*bits_ : nullptr;
  }

  // fn(u, v, meet) with u < v, ascending.
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (LineId u = 0; u < n_; ++u) {
      auto nb = neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] <= u) continue;
        fn(u, nb[i],
           meets_.empty() ? kNoMeet : meets_[row_begin_[u] + i]);
      }
    }
  }

  bool same_edges(const LineGraph& o) const {
    return n_ == o.n_ && row_begin_ == o.row_begin_ && nbr_ == o.nbr_;
  }

  nlohmann::json summary_json() const {
    return {{"vertices", n_},
            {"edges", edges_},
            {"dense_adjacency", dense()},
            {"has_meets", has_meets()}};
  }

 private:
  void finalize(std::vector<Edge> edges, bool with_meets) {
    edges_ = edges.size();
    row_begin_.assign(n_ + 1, 0);
    for (const Edge& e : edges) {
      ++row_begin_[e.u + 1];
      ++row_begin_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) row_begin_[i + 1] += row_begin_[i];
    nbr_.resize(2 * edges.size());
    if (with_meets) meets_.resize(2 * edges.size());
    std::vector<std::uint32_t> fill(row_begin_.begin(), row_begin_.end() - 1);
    for (const Edge& e : edges) {
      nbr_[fill[e.u]] = e.v;
      nbr_[fill[e.v]] = e.u;
      if (with_meets) {
        meets_[fill[e.u]] = e.meet;
        meets_[fill[e.v]] = e.meet;
      }
      ++fill[e.u];
      ++fill[e.v];
    }
    // Sort each row by neighbor id, meets riding along.
    std::vector<std::pair<LineId, PointId>> row;
    for (std::size_t u = 0; u < n_; ++u) {
      std::size_t lo = row_begin_[u], hi = row_begin_[u + 1];
      row.clear();
      for (std::size_t i = lo; i < hi; ++i)
        row.emplace_back(nbr_[i], with_meets ? meets_[i] : kNoMeet);
      std::sort(row.begin(), row.end());
      for (std::size_t i = 0; i + 1 < row.size(); ++i)
        if (row[i].first == row[i + 1].first)
          throw not_linear_error("vertices " + std::to_string(u) + " and " +
                                 std::to_string(row[i].first) +
                                 " are joined twice (two common points)");
      for (std::size_t i = lo; i < hi; ++i) {
        nbr_[i] = row[i - lo].first;
        if (with_meets) meets_[i] = row[i - lo].second;
      }
    }
    if (n_ <= kDenseVertexLimit) {
      bits_.emplace(n_, n_);
      for (LineId u = 0; u < n_; ++u)
        for (LineId v : neighbors(u)) bits_->set(u, v);
    }
  }

  std::size_t n_ = 0;
  std::uint64_t edges_ = 0;
  std::optional<BitMatrix> bits_;
  std::vector<std::uint32_t> row_begin_;
  std::vector<LineId> nbr_;
  std::vector<PointId> meets_;
};

// Vertices are the lines of H, edges the crossing pairs; the meet point of
// each edge is recorded. Lines through a common point induce a clique, and
// these pencil cliques are pairwise edge-disjoint.
inline LineGraph build_intersection_graph(const PartialLinearSpace& H) {
  std::vector<LineGraph::Edge> edges;
  for (PointId p = 0; p < H.point_count(); ++p) {
    const auto& through = H.lines_through(p);
    for (std::size_t i = 0; i < through.size(); ++i)
      for (std::size_t j = i + 1; j < through.size(); ++j)
        edges.push_back({std::min(through[i], through[j]),
                         std::max(through[i], through[j]), p});
  }
  return LineGraph::from_edges(H.line_count(), std::move(edges), true);
}

// Per point, a color in [0, s) for every line through it.
class PencilColoring {
 public:
  PencilColoring(std::vector<std::vector<LineId>> pencils,
                 std::vector<std::vector<std::uint8_t>> colors, unsigned s)
      : pencils_(std::move(pencils)), colors_(std::move(colors)), s_(s) {}

  unsigned color_count() const noexcept { return s_; }
  std::size_t point_count() const noexcept { return pencils_.size(); }
  const std::vector<LineId>& pencil(PointId p) const { return pencils_[p]; }

  std::uint8_t color(PointId p, LineId l) const {
    if (p >= pencils_.size())
      throw missing_color_error("no coloring for point " + std::to_string(p));
    const auto& pen = pencils_[p];
    auto it = std::lower_bound(pen.begin(), pen.end(), l);
    if (it == pen.end() || *it != l)
      throw missing_color_error("line " + std::to_string(l) +
                                " is not colored at point " +
                                std::to_string(p));
    return colors_[p][it - pen.begin()];
  }
  std::uint8_t color_at(PointId p, std::size_t idx) const {
    return colors_[p][idx];
  }

 private:
  std::vector<std::vector<LineId>> pencils_;
  std::vector<std::vector<std::uint8_t>> colors_;
  unsigned s_;
};

// Independent uniform color per incident (point, line) pair, keyed by ids:
// deterministic per seed and independent of iteration order.
inline PencilColoring random_pencil_coloring(const PartialLinearSpace& H,
                                             unsigned s, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("coloring needs at least one color");
  std::vector<std::vector<LineId>> pencils(H.point_count());
  std::vector<std::vector<std::uint8_t>> colors(H.point_count());
  for (PointId p = 0; p < H.point_count(); ++p) {
    pencils[p] = H.lines_through(p);
    colors[p].reserve(pencils[p].size());
    for (LineId l : pencils[p])
      colors[p].push_back(
          static_cast<std::uint8_t>(rng::derive(seed, p, l) % s));
  }
  return PencilColoring(std::move(pencils), std::move(colors), s);
}

// Keeps the edges whose endpoints received different colors at their meet
// point. Every edge of G must be covered by exactly one pencil of chi.
inline LineGraph apply_pencil_filter(const LineGraph& G,
                                     const PencilColoring& chi) {
  std::vector<LineGraph::Edge> kept;
  std::uint64_t covered = 0;
  for (PointId p = 0; p < chi.point_count(); ++p) {
    const auto& pen = chi.pencil(p);
    for (std::size_t i = 0; i < pen.size(); ++i)
      for (std::size_t j = i + 1; j < pen.size(); ++j) {
        if (pen[i] >= G.vertex_count() || pen[j] >= G.vertex_count())
          throw missing_color_error("pencil refers to vertex beyond graph");
        if (!G.adjacent(pen[i], pen[j])) continue;
        ++covered;
        if (chi.color_at(p, i) != chi.color_at(p, j))
          kept.push_back({std::min(pen[i], pen[j]), std::max(pen[i], pen[j]),
                          p});
      }
  }
  if (covered != G.edge_count())
    throw missing_color_error(
        "coloring covers " + std::to_string(covered) + " of " +
        std::to_string(G.edge_count()) + " edges");
  return LineGraph::from_edges(G.vertex_count(), std::move(kept), true);
}

// Independent edge sampling, keyed by the sorted vertex pair: the decision
// for an edge does not depend on enumeration order or thread count.
inline LineGraph sample_edges(const LineGraph& G, double rho,
                              std::uint64_t seed) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("edge probability must lie in [0,1]");
  std::vector<LineGraph::Edge> kept;
  G.for_each_edge([&](LineId u, LineId v, PointId meet) {
    if (rng::bernoulli(rng::derive(seed, u, v), rho))
      kept.push_back({u, v, meet});
  });
  return LineGraph::from_edges(G.vertex_count(), std::move(kept),
                               G.has_meets());
}

inline LineGraph intersect_graphs(const LineGraph& a, const LineGraph& b) {
  if (a.vertex_count() != b.vertex_count())
    throw vertex_mismatch_error(a.vertex_count(), b.vertex_count());
  std::vector<LineGraph::Edge> kept;
  a.for_each_edge([&](LineId u, LineId v, PointId meet) {
    if (b.adjacent(u, v)) {
      if (meet == kNoMeet)
        if (auto m = b.meet_point(u, v)) meet = *m;
      kept.push_back({u, v, meet});
    }
  });
  return LineGraph::from_edges(a.vertex_count(), std::move(kept),
                               a.has_meets() || b.has_meets());
}

// Text export: header "g <n>", then one "e u v [meet]" row per edge.
inline void write_edge_list(std::ostream& os, const LineGraph& g) {
  os << "g " << g.vertex_count() << '\n';
  g.for_each_edge([&](LineId u, LineId v, PointId meet) {
    os << "e " << u << ' ' << v;
    if (meet != kNoMeet) os << ' ' << meet;
    os << '\n';
  });
}

}  // namespace unitals
