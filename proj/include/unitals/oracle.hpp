#pragma once

#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "unitals/cliques.hpp"
#include "unitals/errors.hpp"
#include "unitals/parallel.hpp"
#include "unitals/rng.hpp"

// Brute-force ground truth, kept apart from the formula implementations it
// cross-checks.

namespace unitals {

struct TinyGraph {
  unsigned n = 0;
  std::array<std::uint16_t, 16> adj{};

  static TinyGraph from_edges(
      unsigned n, std::span<const std::pair<unsigned, unsigned>> edges) {
    TinyGraph g;
    g.n = n;
    for (auto [u, v] : edges) {
      g.adj[u] |= static_cast<std::uint16_t>(1u << v);
      g.adj[v] |= static_cast<std::uint16_t>(1u << u);
    }
    return g;
  }
  static TinyGraph cycle(unsigned n) {
    TinyGraph g;
    g.n = n;
    for (unsigned i = 0; i < n; ++i) {
      unsigned j = (i + 1) % n;
      g.adj[i] |= static_cast<std::uint16_t>(1u << j);
      g.adj[j] |= static_cast<std::uint16_t>(1u << i);
    }
    return g;
  }
  bool adjacent(unsigned u, unsigned v) const { return (adj[u] >> v) & 1; }

  MaskGraph to_mask_graph() const {
    MaskGraph m;
    m.n = n;
    for (unsigned u = 0; u < n; ++u) m.adj[u] = adj[u];
    return m;
  }
};

struct BruteForceOptions {
  bool allow_n8 = false;  // 2^28 graphs; takes minutes
  std::size_t threads = 0;
};

namespace detail {

inline MaskGraph graph_from_mask(unsigned n, std::uint32_t mask) {
  MaskGraph g;
  g.n = n;
  unsigned bit = 0;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j, ++bit)
      if (mask & (1u << bit)) g.add_edge(i, j);
  return g;
}

inline bool degrees_sorted(const MaskGraph& g) {
  unsigned prev = 0;
  for (unsigned i = 0; i < g.n; ++i) {
    unsigned d = static_cast<unsigned>(std::popcount(g.adj[i]));
    if (d < prev) return false;
    prev = d;
  }
  return true;
}

}  // namespace detail

// min over all K_{s+1}-free graphs on n labeled vertices of the largest
// K_s-free induced subgraph. Labeled enumeration over all 2^{C(n,2)} edge
// masks; the n = 8 mode additionally skips graphs whose degree sequence is
// not sorted (every isomorphism class keeps a sorted representative, and
// the minimum is isomorphism-invariant).
inline unsigned brute_force_f(unsigned n, unsigned s,
                              const BruteForceOptions& opts = {}) {
  if (s < 2) throw std::invalid_argument("s must be >= 2");
  if (n < 1 || n > 8 || (n == 8 && !opts.allow_n8))
    throw too_large_error(
        "brute_force_f supports n <= 7 (n = 8 behind allow_n8)");
  const unsigned bits = n * (n - 1) / 2;
  const std::uint64_t total = std::uint64_t{1} << bits;
  const bool prune_degrees = n == 8;
  std::atomic<unsigned> global_min{n};  // the edgeless graph attains n

  auto scan_block = [&](std::size_t begin, std::size_t end) {
    unsigned local_min = n;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::size_t mask = begin; mask < end; ++mask) {
      MaskGraph g =
          detail::graph_from_mask(n, static_cast<std::uint32_t>(mask));
      if (prune_degrees && !detail::degrees_sorted(g)) continue;
      if (detail::mask_has_clique(g, full, s + 1)) continue;
      unsigned hint = std::min(local_min, global_min.load(std::memory_order_relaxed));
      unsigned value = max_ksfree_induced(g, s, hint);
      if (value < local_min) {
        local_min = value;
        unsigned seen = global_min.load(std::memory_order_relaxed);
        while (value < seen &&
               !global_min.compare_exchange_weak(seen, value)) {
        }
      }
    }
    return local_min;
  };
  return parallel_map_reduce<unsigned>(
      total, opts.threads, n, scan_block,
      [](unsigned a, unsigned b) { return std::min(a, b); });
}

// Expected K_s count by direct enumeration of transversal tuples.
inline double brute_expected_ks(std::span<const std::uint64_t> class_sizes,
                                double rho) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0,1]");
  const std::size_t s = class_sizes.size();
  std::uint64_t product = 1;
  for (std::uint64_t y : class_sizes) {
    if (y == 0) throw std::invalid_argument("class sizes must be positive");
    product *= y;
    if (product > 10'000)
      throw too_large_error("brute_expected_ks limited to 1e4 tuples");
  }
  const double w = std::pow(rho, static_cast<double>(s) * (s - 1) / 2.0);
  std::vector<std::uint64_t> tuple(s, 0);
  double sum = 0;
  for (std::uint64_t t = 0; t < product; ++t) {
    sum += w;
    for (std::size_t i = 0; i < s; ++i) {
      if (++tuple[i] < class_sizes[i]) break;
      tuple[i] = 0;
    }
  }
  return sum;
}

// The pair-overlap sum by direct enumeration over ordered pairs of distinct
// transversal tuples sharing >= 2 coordinates.
inline double brute_delta(std::span<const std::uint64_t> class_sizes,
                          double rho) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0,1]");
  const std::size_t s = class_sizes.size();
  if (s < 3) return 0.0;
  std::uint64_t product = 1;
  for (std::uint64_t y : class_sizes) {
    if (y == 0) throw std::invalid_argument("class sizes must be positive");
    product *= y;
  }
  if (product * product > 100'000'000)
    throw too_large_error("brute_delta limited to 1e8 tuple pairs");

  std::vector<double> weight(s + 1, 0.0);
  const double full = static_cast<double>(s) * (s - 1) / 2.0;
  for (std::size_t shared = 2; shared + 1 <= s; ++shared)
    weight[shared] =
        std::pow(rho, 2 * full - static_cast<double>(shared) * (shared - 1) / 2.0);

  auto decode = [&](std::uint64_t t, std::vector<std::uint64_t>& tuple) {
    for (std::size_t i = 0; i < s; ++i) {
      tuple[i] = t % class_sizes[i];
      t /= class_sizes[i];
    }
  };
  std::vector<std::uint64_t> ta(s), tb(s);
  double sum = 0;
  for (std::uint64_t x = 0; x < product; ++x) {
    decode(x, ta);
    for (std::uint64_t y = 0; y < product; ++y) {
      if (x == y) continue;
      decode(y, tb);
      std::size_t shared = 0;
      for (std::size_t i = 0; i < s; ++i) shared += ta[i] == tb[i];
      if (shared >= 2 && shared <= s - 1) sum += weight[shared];
    }
  }
  return sum;
}

namespace detail {

// Adjacency over the disjoint classes as bit rows; vertices are numbered by
// class, consecutively.
struct MultipartiteSample {
  std::size_t n = 0, words = 0;
  std::vector<std::uint64_t> rows;
  std::vector<std::uint64_t> class_mask;  // per class, over all words
  std::vector<std::size_t> class_begin;

  void build(std::span<const std::uint64_t> sizes, double rho,
             std::mt19937_64& gen) {
    const std::size_t s = sizes.size();
    n = 0;
    class_begin.assign(s + 1, 0);
    for (std::size_t i = 0; i < s; ++i) {
      class_begin[i + 1] = class_begin[i] + sizes[i];
    }
    n = class_begin[s];
    words = (n + 63) / 64;
    rows.assign(n * words, 0);
    class_mask.assign(s * words, 0);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t v = class_begin[i]; v < class_begin[i + 1]; ++v)
        class_mask[i * words + v / 64] |= std::uint64_t{1} << (v % 64);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i + 1; j < s; ++j)
        for (std::size_t u = class_begin[i]; u < class_begin[i + 1]; ++u)
          for (std::size_t v = class_begin[j]; v < class_begin[j + 1]; ++v)
            if (rng::unit(gen()) < rho) {
              rows[u * words + v / 64] |= std::uint64_t{1} << (v % 64);
              rows[v * words + u / 64] |= std::uint64_t{1} << (u % 64);
            }
  }

  // Transversal K_s count; early exit when stop_at_first.
  std::uint64_t count_ks(bool stop_at_first) const {
    const std::size_t s = class_begin.size() - 1;
    std::vector<std::uint64_t> cand((s + 1) * words, 0);
    for (std::size_t w = 0; w < words; ++w)
      cand[w] = ~std::uint64_t{0};
    std::uint64_t count = 0;
    dfs(0, s, cand, count, stop_at_first);
    return count;
  }

 private:
  void dfs(std::size_t level, std::size_t s, std::vector<std::uint64_t>& cand,
           std::uint64_t& count, bool stop) const {
    if (stop && count) return;
    if (level == s) {
      ++count;
      return;
    }
    const std::uint64_t* cur = cand.data() + level * words;
    std::uint64_t* next = cand.data() + (level + 1) * words;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t x = cur[w] & class_mask[level * words + w];
      while (x) {
        std::size_t v = w * 64 + std::countr_zero(x);
        x &= x - 1;
        for (std::size_t ww = 0; ww < words; ++ww)
          next[ww] = cur[ww] & rows[v * words + ww];
        dfs(level + 1, s, cand, count, stop);
        if (stop && count) return;
      }
    }
  }
};

}  // namespace detail

struct McKsStats {
  double mean = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
};

// Monte-Carlo mean K_s count of the random s-partite graph.
inline McKsStats mc_ks_count_mean(std::span<const std::uint64_t> class_sizes,
                                  double rho, std::uint64_t trials,
                                  std::uint64_t seed) {
  detail::MultipartiteSample g;
  double sum = 0, sum_sq = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 gen(rng::derive(seed, t));
    g.build(class_sizes, rho, gen);
    auto c = static_cast<double>(g.count_ks(false));
    sum += c;
    sum_sq += c * c;
  }
  McKsStats st;
  st.trials = trials;
  st.mean = sum / trials;
  double var = sum_sq / trials - st.mean * st.mean;
  st.std_error = std::sqrt(std::max(0.0, var) / trials);
  return st;
}

// Fraction of samples with no transversal K_s at all.
inline double mc_ks_free_frequency(std::span<const std::uint64_t> class_sizes,
                                   double rho, std::uint64_t trials,
                                   std::uint64_t seed) {
  detail::MultipartiteSample g;
  std::uint64_t free_count = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::mt19937_64 gen(rng::derive(seed, t));
    g.build(class_sizes, rho, gen);
    if (g.count_ks(true) == 0) ++free_count;
  }
  return static_cast<double>(free_count) / trials;
}

// Empirical tail frequency of a Binomial(n, p) sample against the
// multiplicative deviation eps.
inline double mc_binomial_tail(std::uint64_t n, double p, double eps,
                               bool upper_tail, std::uint64_t reps,
                               std::uint64_t seed) {
  const double mu = static_cast<double>(n) * p;
  std::uint64_t hits = 0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    std::mt19937_64 gen(rng::derive(seed, r));
    std::uint64_t z = 0;
    for (std::uint64_t i = 0; i < n; ++i) z += rng::unit(gen()) < p;
    if (upper_tail ? (z > (1 + eps) * mu) : (z < (1 - eps) * mu))
      ++hits;
  }
  return static_cast<double>(hits) / reps;
}

}  // namespace unitals
