#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "unitals/errors.hpp"
#include "unitals/line_graph.hpp"
#include "unitals/log_real.hpp"
#include "unitals/pls.hpp"
#include "unitals/rng.hpp"
#include "unitals/unital.hpp"

namespace unitals {

struct CliqueWitness {
  std::vector<LineId> vertices;  // sorted
  std::optional<CrossingClass> classification;

  nlohmann::json to_json() const {
    nlohmann::json j{{"vertices", vertices}};
    if (classification) j["classification"] = classification->to_json();
    return j;
  }
};

namespace detail {

// Induced subgraph of a LineGraph on local indices 0..|X|-1 with bitset
// rows; X must be sorted, so local order equals global order.
struct LocalGraph {
  std::size_t n = 0, words = 0;
  std::vector<std::uint64_t> rows;
  std::vector<LineId> global;

  LocalGraph(const LineGraph& g, std::span<const LineId> x)
      : n(x.size()), words((x.size() + 63) / 64 + (x.empty() ? 1 : 0)),
        rows(n * words, 0), global(x.begin(), x.end()) {
    for (std::size_t i = 0; i < n; ++i) {
      auto nb = g.neighbors(global[i]);
      std::size_t j = 0;
      // walk the sorted neighbor list against sorted X
      for (LineId v : nb) {
        while (j < n && global[j] < v) ++j;
        if (j == n) break;
        if (global[j] == v) rows[i * words + j / 64] |= 1ull << (j % 64);
      }
    }
  }

  std::span<const std::uint64_t> row(std::size_t i) const {
    return {rows.data() + i * words, words};
  }
};

// Depth-first k-clique search over a LocalGraph. Candidates at each level
// are restricted to indices above the last chosen vertex, so cliques come
// out in lexicographic order and the first hit is deterministic.
class CliqueSearch {
 public:
  CliqueSearch(const LocalGraph& g, unsigned k, std::uint64_t node_budget)
      : g_(g), k_(k), budget_(node_budget), level_(k + 1) {
    for (auto& row : level_) row.assign(g_.words, 0);
  }

  // fn(span<local indices>) for every k-clique; return true from fn to stop.
  template <class Fn>
  bool enumerate(Fn&& fn) {
    if (k_ == 0 || g_.n == 0) return false;
    auto& top = level_[0];
    for (std::size_t w = 0; w < g_.words; ++w) top[w] = ~std::uint64_t{0};
    std::size_t tail = g_.n % 64;
    if (tail) top[g_.words - 1] = (std::uint64_t{1} << tail) - 1;
    if (g_.n % 64 == 0 && g_.words > (g_.n + 63) / 64)
      top[g_.words - 1] = 0;  // padding word of the empty case
    chosen_.clear();
    return extend(0, fn);
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  template <class Fn>
  bool extend(unsigned depth, Fn&& fn) {
    if (++nodes_ > budget_)
      throw budget_exceeded_error("clique search exceeded " +
                                  std::to_string(budget_) + " nodes");
    if (depth == k_) return fn(std::span<const std::size_t>(chosen_));
    const auto& cand = level_[depth];
    std::size_t remaining = 0;
    for (std::uint64_t w : cand) remaining += std::popcount(w);
    if (chosen_.size() + remaining < k_) return false;
    auto& next = level_[depth + 1];
    for (std::size_t w = 0; w < g_.words; ++w) {
      std::uint64_t word = cand[w];
      while (word) {
        std::size_t v = w * 64 + std::countr_zero(word);
        word &= word - 1;
        auto vrow = g_.row(v);
        // candidates after v that are adjacent to v
        for (std::size_t ww = 0; ww < g_.words; ++ww)
          next[ww] = cand[ww] & vrow[ww];
        next[w] &= ~((std::uint64_t{2} << (v % 64)) - 1);  // indices > v
        for (std::size_t ww = 0; ww < w; ++ww) next[ww] = 0;
        chosen_.push_back(v);
        if (extend(depth + 1, fn)) return true;
        chosen_.pop_back();
      }
    }
    return false;
  }

  const LocalGraph& g_;
  unsigned k_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<std::uint64_t>> level_;
  std::vector<std::size_t> chosen_;
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultCliqueNodeBudget = 10'000'000;

// First k-clique of Gr[X] in lexicographic vertex order, or nothing. Exact;
// throws budget_exceeded_error past the node budget.
inline std::optional<CliqueWitness> contains_clique(
    const LineGraph& gr, std::span<const LineId> x, unsigned k,
    std::uint64_t node_budget = kDefaultCliqueNodeBudget) {
  if (k < 1) throw std::invalid_argument("clique size must be >= 1");
  std::vector<LineId> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (LineId v : sorted)
    if (v >= gr.vertex_count()) throw unknown_line_error(v);
  detail::LocalGraph local(gr, sorted);
  detail::CliqueSearch search(local, k, node_budget);
  std::optional<CliqueWitness> found;
  search.enumerate([&](std::span<const std::size_t> verts) {
    CliqueWitness w;
    for (std::size_t i : verts) w.vertices.push_back(local.global[i]);
    found = std::move(w);
    return true;
  });
  return found;
}

// All k-cliques of Gr[X]; fn receives sorted global vertex ids.
template <class Fn>
void enumerate_cliques(const LineGraph& gr, std::span<const LineId> x,
                       unsigned k, Fn&& fn,
                       std::uint64_t node_budget = kDefaultCliqueNodeBudget) {
  if (k < 1) throw std::invalid_argument("clique size must be >= 1");
  std::vector<LineId> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  detail::LocalGraph local(gr, sorted);
  detail::CliqueSearch search(local, k, node_budget);
  std::vector<LineId> verts(k);
  search.enumerate([&](std::span<const std::size_t> ids) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      verts[i] = local.global[ids[i]];
    fn(std::span<const LineId>(verts));
    return false;
  });
}

struct PropertyOptions {
  std::size_t exhaustive_vertex_limit = 1000;
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = 400'000'000;
  std::size_t max_witnesses = 16;
};

struct PropertyReport {
  std::string property;  // "A" or "B"
  unsigned s = 0;
  bool exhaustive = true;
  std::uint64_t cliques_examined = 0;
  std::uint64_t violations = 0;
  std::uint64_t concurrent = 0, fans = 0;
  std::vector<CliqueWitness> violation_witnesses;  // capped

  bool ok() const { return violations == 0; }

  nlohmann::json to_json() const {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : violation_witnesses) ws.push_back(w.to_json());
    return {{"property", property},
            {"s", s},
            {"mode", exhaustive ? "exhaustive" : "sampled"},
            {"cliques_examined", cliques_examined},
            {"concurrent", concurrent},
            {"fans", fans},
            {"violations", violations},
            {"violation_witnesses", ws},
            {"ok", ok()}};
  }
};

namespace detail {

inline std::vector<LineId> intersect_sorted(std::span<const LineId> a,
                                            std::span<const LineId> b) {
  std::vector<LineId> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (a[i] > b[j])
      ++j;
    else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

template <class Classify>
PropertyReport verify_property(const LineGraph& g,
                               const PartialLinearSpace& h, unsigned s,
                               const PropertyOptions& opts, std::string name,
                               Classify&& violates) {
  PropertyReport rep;
  rep.property = std::move(name);
  rep.s = s;
  auto record = [&](std::span<const LineId> verts) {
    ++rep.cliques_examined;
    std::vector<LineId> v(verts.begin(), verts.end());
    CrossingClass c = classify_crossing(h, v);
    if (c.is_concurrent()) ++rep.concurrent;
    if (c.is_fan()) ++rep.fans;
    if (violates(c)) {
      ++rep.violations;
      if (rep.violation_witnesses.size() < opts.max_witnesses)
        rep.violation_witnesses.push_back(
            CliqueWitness{std::move(v), std::move(c)});
    }
  };

  if (g.vertex_count() <= opts.exhaustive_vertex_limit) {
    rep.exhaustive = true;
    std::vector<LineId> all(g.vertex_count());
    for (LineId v = 0; v < g.vertex_count(); ++v) all[v] = v;
    enumerate_cliques(g, all, s + 1, record, opts.node_budget);
    return rep;
  }

  // Sampled mode: grow from a uniform edge, intersecting sorted neighbor
  // lists; incomplete growths are skipped.
  rep.exhaustive = false;
  const std::uint64_t directed = 2 * g.edge_count();
  if (directed == 0) return rep;
  std::vector<std::uint64_t> prefix(g.vertex_count() + 1, 0);
  for (LineId v = 0; v < g.vertex_count(); ++v)
    prefix[v + 1] = prefix[v] + g.degree(v);
  for (std::size_t t = 0; t < opts.samples; ++t) {
    std::uint64_t hsh = rng::derive(opts.seed, rng::hash_name(rep.property), t);
    std::uint64_t r = hsh % directed;
    auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
    LineId u = static_cast<LineId>(it - prefix.begin() - 1);
    LineId v = g.neighbors(u)[r - prefix[u]];
    std::vector<LineId> verts{std::min(u, v), std::max(u, v)};
    auto nb_u = g.neighbors(u);
    std::vector<LineId> cand = intersect_sorted(
        {nb_u.data(), nb_u.size()},
        {g.neighbors(v).data(), g.neighbors(v).size()});
    while (verts.size() < s + 1u && !cand.empty()) {
      hsh = rng::mix(hsh);
      LineId next = cand[hsh % cand.size()];
      verts.push_back(next);
      auto nb = g.neighbors(next);
      cand = intersect_sorted(cand, {nb.data(), nb.size()});
    }
    if (verts.size() < s + 1u) continue;
    std::sort(verts.begin(), verts.end());
    record(verts);
  }
  return rep;
}

}  // namespace detail

// Every K_{s+1} of G must be concurrent or a fan. Exhaustive below the
// vertex limit, seeded clique sampling above (mode recorded).
inline PropertyReport verify_property_A(const LineGraph& g,
                                        const PartialLinearSpace& h,
                                        unsigned s,
                                        const PropertyOptions& opts = {}) {
  return detail::verify_property(
      g, h, s, opts, "A", [](const CrossingClass& c) { return c.is_invalid(); });
}

// Every K_{s+1} of the pencil-filtered graph must be a fan.
inline PropertyReport verify_property_B(const LineGraph& g_chi,
                                        const PartialLinearSpace& h,
                                        unsigned s,
                                        const PropertyOptions& opts = {}) {
  return detail::verify_property(
      g_chi, h, s, opts, "B", [](const CrossingClass& c) { return !c.is_fan(); });
}

struct AXInstance {
  std::vector<LineId> x;               // sorted
  unsigned b = 1;
  std::vector<PointId> heavy_points;   // P_X, ascending
  std::vector<std::uint32_t> xp_size;  // |X_p| per heavy point
  // per heavy point: floor(|X_p|/b) disjoint blocks of exactly b lines
  std::vector<std::vector<std::vector<LineId>>> blocks;
  std::uint64_t sum_xp = 0;            // sum of |X_p| over heavy points
  std::uint64_t hat_edge_count = 0;    // sum of r_p * C(b,2)

  std::uint64_t block_count() const {
    std::uint64_t n = 0;
    for (const auto& per_point : blocks) n += per_point.size();
    return n;
  }
};

// Fixed block family: X_p sorted by line id, cut into consecutive b-sized
// blocks. Deterministic; the seed parameter is unused by this strategy and
// kept for interface stability.
inline AXInstance build_ax_instance(const PartialLinearSpace& h,
                                    std::span<const LineId> x, unsigned b,
                                    std::uint64_t /*seed*/ = 0) {
  if (b < 1) throw std::invalid_argument("block size must be >= 1");
  AXInstance inst;
  inst.b = b;
  inst.x.assign(x.begin(), x.end());
  std::sort(inst.x.begin(), inst.x.end());
  if (std::adjacent_find(inst.x.begin(), inst.x.end()) != inst.x.end())
    throw std::invalid_argument("X must not repeat lines");
  std::vector<std::vector<LineId>> xp(h.point_count());
  for (LineId l : inst.x) {
    if (l >= h.line_count()) throw unknown_line_error(l);
    for (PointId p : h.line(l)) xp[p].push_back(l);
  }
  for (PointId p = 0; p < h.point_count(); ++p) {
    if (xp[p].size() < b) continue;
    inst.heavy_points.push_back(p);
    inst.xp_size.push_back(static_cast<std::uint32_t>(xp[p].size()));
    inst.sum_xp += xp[p].size();
    std::size_t r = xp[p].size() / b;
    std::vector<std::vector<LineId>> per_point(r);
    for (std::size_t i = 0; i < r; ++i)
      per_point[i].assign(xp[p].begin() + i * b, xp[p].begin() + (i + 1) * b);
    inst.blocks.push_back(std::move(per_point));
    inst.hat_edge_count += r * (static_cast<std::uint64_t>(b) * (b - 1) / 2);
  }
  return inst;
}

struct AXWitness {
  PointId point;
  std::size_t block_index;
  std::vector<LineId> clique;  // a K_s inside the block
};

struct AXOutcome {
  bool bad = true;  // vacuously bad when there are no heavy points
  std::optional<AXWitness> witness;
};

// A_X occurs ("X is bad") iff for every heavy point every block of its
// partition induces a K_s-free subgraph. An empty P_X is vacuously bad.
// When the event fails, the witness carries a concrete K_s.
inline AXOutcome event_ax_occurs(const LineGraph& h_graph,
                                 const AXInstance& inst, unsigned s) {
  for (std::size_t i = 0; i < inst.heavy_points.size(); ++i)
    for (std::size_t j = 0; j < inst.blocks[i].size(); ++j)
      if (auto w = contains_clique(h_graph, inst.blocks[i][j], s))
        return {false,
                AXWitness{inst.heavy_points[i], j, std::move(w->vertices)}};
  return {true, std::nullopt};
}

struct DependencyCounts {
  LogReal kappa;         // C(s+1,2) * k
  LogReal lambda_bound;  // b * k * sum |X_p| / 2
  bool kappa_le_bk = false;
};

inline DependencyCounts dependency_counts(const AXInstance& inst, LogReal k,
                                          unsigned s) {
  if (k.sign() < 0) throw std::invalid_argument("fan bound must be >= 0");
  DependencyCounts d;
  double pairs = static_cast<double>(s + 1) * s / 2.0;
  d.kappa = LogReal::from_double(pairs) * k;
  d.lambda_bound = LogReal::from_double(0.5 * inst.b) * k *
                   LogReal::from_double(static_cast<double>(inst.sum_xp));
  d.kappa_le_bk = d.kappa <= LogReal::from_double(inst.b) * k;
  return d;
}

// Tiny dense graph for exact subset searches (up to 64 vertices stored,
// searches accept at most 40).
struct MaskGraph {
  unsigned n = 0;
  std::array<std::uint64_t, 64> adj{};

  void add_edge(unsigned u, unsigned v) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  bool adjacent(unsigned u, unsigned v) const {
    return (adj[u] >> v) & 1;
  }
};

namespace detail {

inline bool mask_has_clique(const MaskGraph& g, std::uint64_t cand,
                            unsigned k) {
  if (k == 0) return true;
  while (cand) {
    if (static_cast<unsigned>(std::popcount(cand)) < k) return false;
    unsigned v = static_cast<unsigned>(std::countr_zero(cand));
    cand &= cand - 1;
    if (mask_has_clique(g, cand & g.adj[v], k - 1)) return true;
  }
  return false;
}

inline void ksfree_search(const MaskGraph& g, unsigned s, unsigned i,
                          std::uint64_t chosen, unsigned size, unsigned& best,
                          unsigned stop_at) {
  if (best >= stop_at) return;
  if (size + (g.n - i) <= best) return;
  if (i == g.n) {
    best = std::max(best, size);
    return;
  }
  if (!mask_has_clique(g, chosen & g.adj[i], s - 1))
    ksfree_search(g, s, i + 1, chosen | (std::uint64_t{1} << i), size + 1,
                  best, stop_at);
  ksfree_search(g, s, i + 1, chosen, size, best, stop_at);
}

}  // namespace detail

inline constexpr unsigned kMaxExactSearchVertices = 40;

// Size of the largest vertex set inducing a K_s-free subgraph. Exact branch
// and bound; stop_at returns early once a set that large is known to exist
// (the result is then only a lower-bound certificate).
inline unsigned max_ksfree_induced(const MaskGraph& g, unsigned s,
                                   unsigned stop_at = ~0u) {
  if (g.n > kMaxExactSearchVertices)
    throw too_large_error("exact K_s-free search limited to " +
                          std::to_string(kMaxExactSearchVertices) +
                          " vertices, got " + std::to_string(g.n));
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  unsigned best = 0;
  detail::ksfree_search(g, s, 0, 0, 0, best, stop_at);
  return best;
}

inline unsigned max_ksfree_induced(const LineGraph& g, unsigned s) {
  if (g.vertex_count() > kMaxExactSearchVertices)
    throw too_large_error("exact K_s-free search limited to " +
                          std::to_string(kMaxExactSearchVertices) +
                          " vertices, got " +
                          std::to_string(g.vertex_count()));
  MaskGraph m;
  m.n = static_cast<unsigned>(g.vertex_count());
  g.for_each_edge([&](LineId u, LineId v, PointId) {
    m.add_edge(static_cast<unsigned>(u), static_cast<unsigned>(v));
  });
  return max_ksfree_induced(m, s);
}

}  // namespace unitals
