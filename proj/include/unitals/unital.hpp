#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "unitals/bitset.hpp"
#include "unitals/errors.hpp"
#include "unitals/field.hpp"
#include "unitals/pls.hpp"

namespace unitals {

inline constexpr std::uint64_t kUnlimitedBudget = ~std::uint64_t{0};

inline std::uint64_t expected_unital_points(unsigned q) {
  return static_cast<std::uint64_t>(q) * q * q + 1;
}
inline std::uint64_t expected_unital_lines(unsigned q) {
  std::uint64_t q2 = static_cast<std::uint64_t>(q) * q;
  return q2 * (q2 - q + 1);
}

namespace detail {

struct ProjPoint {
  FieldElem x, y, z;
};

inline std::uint64_t proj_key(const ProjPoint& pt) {
  return static_cast<std::uint64_t>(pt.x) |
         (static_cast<std::uint64_t>(pt.y) << 16) |
         (static_cast<std::uint64_t>(pt.z) << 32);
}

// Scale so the first nonzero coordinate is 1: the canonical representative
// of the 1-dimensional subspace.
inline ProjPoint normalize(const Field& F, ProjPoint pt) {
  FieldElem lead = pt.x ? pt.x : (pt.y ? pt.y : pt.z);
  FieldElem s = F.inv(lead);
  return {F.mul(pt.x, s), F.mul(pt.y, s), F.mul(pt.z, s)};
}

inline ProjPoint cross(const Field& F, const ProjPoint& a, const ProjPoint& b) {
  return {F.sub(F.mul(a.y, b.z), F.mul(a.z, b.y)),
          F.sub(F.mul(a.z, b.x), F.mul(a.x, b.z)),
          F.sub(F.mul(a.x, b.y), F.mul(a.y, b.x))};
}

// Two independent points spanning the line {v : a*x + b*y + c*z = 0}.
inline std::pair<ProjPoint, ProjPoint> line_basis(const Field& F,
                                                  const ProjPoint& dual) {
  if (dual.x != 0)
    return {ProjPoint{F.neg(dual.y), dual.x, 0},
            ProjPoint{F.neg(dual.z), 0, dual.x}};
  if (dual.y != 0)
    return {ProjPoint{1, 0, 0}, ProjPoint{0, F.neg(dual.z), dual.y}};
  return {ProjPoint{1, 0, 0}, ProjPoint{0, 1, 0}};
}

inline std::uint64_t choose_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > ~std::uint64_t{0}) return ~std::uint64_t{0};  // saturate
  }
  return static_cast<std::uint64_t>(r);
}

// Line-line adjacency and point-line incidence as bit matrices. Shared by
// the O'Nan search and fan counting.
struct PairIndex {
  BitMatrix adj;     // lines x lines, set iff the two lines meet
  BitMatrix pencil;  // points x lines

  static constexpr std::size_t kMaxLines = 32768;

  explicit PairIndex(const PartialLinearSpace& pls)
      : adj(pls.line_count(), pls.line_count()),
        pencil(pls.point_count(), pls.line_count()) {
    if (pls.line_count() > kMaxLines)
      throw too_large_error("dense line index limited to " +
                            std::to_string(kMaxLines) + " lines, got " +
                            std::to_string(pls.line_count()));
    for (PointId p = 0; p < pls.point_count(); ++p) {
      const auto& through = pls.lines_through(p);
      for (LineId l : through) pencil.set(p, l);
      for (std::size_t i = 0; i < through.size(); ++i)
        for (std::size_t j = i + 1; j < through.size(); ++j) {
          adj.set(through[i], through[j]);
          adj.set(through[j], through[i]);
        }
    }
  }
};

}  // namespace detail

// The classical unital: points of PG(2, q^2) with x^{q+1} + y^{q+1} + z^{q+1}
// = 0, lines the secant traces. q^3 + 1 points, q^2(q^2 - q + 1) lines of
// q + 1 points each.
//
// Secants are generated from unordered point pairs: the projective line
// through the pair is deduplicated by its normalized dual coordinates and
// intersected with the point set.
inline PartialLinearSpace build_hermitian_unital(unsigned q) {
  using detail::ProjPoint;
  const Field F = Field::create(q);
  const unsigned Q = F.order();

  std::vector<ProjPoint> pts;
  std::unordered_map<std::uint64_t, PointId> index;
  auto try_add = [&](ProjPoint pt) {
    FieldElem s = F.add(F.add(F.norm(pt.x), F.norm(pt.y)), F.norm(pt.z));
    if (s != 0) return;
    index.emplace(detail::proj_key(pt), static_cast<PointId>(pts.size()));
    pts.push_back(pt);
  };
  for (unsigned y = 0; y < Q; ++y)
    for (unsigned z = 0; z < Q; ++z)
      try_add({1, static_cast<FieldElem>(y), static_cast<FieldElem>(z)});
  for (unsigned z = 0; z < Q; ++z)
    try_add({0, 1, static_cast<FieldElem>(z)});
  try_add({0, 0, 1});

  std::unordered_set<std::uint64_t> seen_duals;
  seen_duals.reserve(expected_unital_lines(q) * 2);
  std::vector<std::vector<PointId>> lines;
  lines.reserve(expected_unital_lines(q));

  for (PointId i = 0; i < pts.size(); ++i) {
    for (PointId j = i + 1; j < pts.size(); ++j) {
      ProjPoint dual = detail::normalize(F, detail::cross(F, pts[i], pts[j]));
      if (!seen_duals.insert(detail::proj_key(dual)).second) continue;
      auto [v1, v2] = detail::line_basis(F, dual);
      std::vector<PointId> trace;
      auto collect = [&](ProjPoint pt) {
        auto it = index.find(detail::proj_key(detail::normalize(F, pt)));
        if (it != index.end()) trace.push_back(it->second);
      };
      for (unsigned t = 0; t < Q; ++t) {
        FieldElem ft = static_cast<FieldElem>(t);
        collect({F.add(v1.x, F.mul(ft, v2.x)), F.add(v1.y, F.mul(ft, v2.y)),
                 F.add(v1.z, F.mul(ft, v2.z))});
      }
      collect(v2);
      lines.push_back(std::move(trace));
    }
  }
  return PartialLinearSpace(pts.size(), std::move(lines));
}

struct DesignReport {
  unsigned q = 0;
  std::uint64_t points = 0, lines = 0;
  std::uint64_t expected_points = 0, expected_lines = 0;
  bool point_count_ok = false, line_count_ok = false;
  bool line_sizes_ok = false;   // every line has q + 1 points
  bool pairs_ok = false;        // every point pair on exactly one line
  bool degrees_ok = false;      // every point on exactly q^2 lines
  std::uint64_t pairs_uncovered = 0, pairs_multi = 0;
  std::optional<LineId> bad_line;
  std::optional<PointId> bad_point;

  bool ok() const {
    return point_count_ok && line_count_ok && line_sizes_ok && pairs_ok &&
           degrees_ok;
  }

  nlohmann::json to_json() const {
    return {{"q", q},
            {"points", points},
            {"lines", lines},
            {"expected_points", expected_points},
            {"expected_lines", expected_lines},
            {"point_count_ok", point_count_ok},
            {"line_count_ok", line_count_ok},
            {"line_sizes_ok", line_sizes_ok},
            {"pairs_ok", pairs_ok},
            {"degrees_ok", degrees_ok},
            {"pairs_uncovered", pairs_uncovered},
            {"pairs_multi", pairs_multi},
            {"ok", ok()}};
  }
};

// Exhaustive 2-design check: counts, line sizes, pair coverage, point degrees.
inline DesignReport verify_design(const PartialLinearSpace& U, unsigned q) {
  DesignReport r;
  r.q = q;
  r.points = U.point_count();
  r.lines = U.line_count();
  r.expected_points = expected_unital_points(q);
  r.expected_lines = expected_unital_lines(q);
  r.point_count_ok = r.points == r.expected_points;
  r.line_count_ok = r.lines == r.expected_lines;

  r.line_sizes_ok = true;
  for (LineId l = 0; l < U.line_count(); ++l)
    if (U.line(l).size() != q + 1) {
      r.line_sizes_ok = false;
      r.bad_line = l;
      break;
    }

  const std::size_t n = U.point_count();
  std::vector<std::uint8_t> cover(n * (n - 1) / 2, 0);
  auto pair_idx = [n](PointId a, PointId b) {
    return static_cast<std::size_t>(a) * (2 * n - a - 1) / 2 + (b - a - 1);
  };
  for (LineId l = 0; l < U.line_count(); ++l) {
    const auto& pts = U.line(l);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        auto& c = cover[pair_idx(pts[i], pts[j])];
        if (c < 2) ++c;
      }
  }
  for (std::uint8_t c : cover) {
    if (c == 0) ++r.pairs_uncovered;
    if (c > 1) ++r.pairs_multi;
  }
  r.pairs_ok = r.pairs_uncovered == 0 && r.pairs_multi == 0;

  r.degrees_ok = true;
  const std::uint64_t q2 = static_cast<std::uint64_t>(q) * q;
  for (PointId p = 0; p < U.point_count(); ++p)
    if (U.point_degree(p) != q2) {
      r.degrees_ok = false;
      r.bad_point = p;
      break;
    }
  return r;
}

struct OnanWitness {
  std::array<LineId, 4> lines;
  std::array<PointId, 6> points;  // the six pairwise intersections
};

// Searches for four lines meeting pairwise in six distinct points. Triangles
// are enumerated first and extended; every candidate that survives the
// incidence filters is a witness. The budget counts work units (triangles
// examined plus extension candidates); exceeding it without a witness throws.
// kUnlimitedBudget means exhaustive.
inline std::optional<OnanWitness> find_onan(
    const PartialLinearSpace& S, std::uint64_t budget = kUnlimitedBudget) {
  if (S.line_count() < 4) return std::nullopt;
  detail::PairIndex idx(S);
  const std::size_t words = idx.adj.words_per_row();
  BitRow row12(words), row123(words);
  std::uint64_t work = 0;
  auto charge = [&](std::uint64_t u) {
    work += u;
    if (work > budget)
      throw budget_exceeded_error("O'Nan search budget of " +
                                  std::to_string(budget) +
                                  " work units exceeded");
  };
  const std::size_t n = S.line_count();
  std::optional<OnanWitness> found;
  for (LineId l1 = 0; l1 < n && !found; ++l1) {
    for_each_bit(idx.adj.row(l1), [&](std::size_t l2s) {
      if (found) return;
      LineId l2 = static_cast<LineId>(l2s);
      if (l2 <= l1) return;
      PointId p12 = *S.meet(l1, l2);
      row12.assign_and(idx.adj.row(l1), idx.adj.row(l2));
      row12.andnot_with(idx.pencil.row(p12));
      for_each_bit(row12.words(), [&](std::size_t l3s) {
        if (found) return;
        LineId l3 = static_cast<LineId>(l3s);
        if (l3 <= l2) return;
        charge(1);
        PointId p13 = *S.meet(l1, l3);
        PointId p23 = *S.meet(l2, l3);
        row123.assign_and(row12.words(), idx.adj.row(l3));
        row123.andnot_with(idx.pencil.row(p13));
        row123.andnot_with(idx.pencil.row(p23));
        for_each_bit(row123.words(), [&](std::size_t l4s) {
          if (found) return;
          LineId l4 = static_cast<LineId>(l4s);
          if (l4 <= l3) return;
          charge(1);
          found = OnanWitness{{l1, l2, l3, l4},
                              {p12, p13, p23, *S.meet(l1, l4), *S.meet(l2, l4),
                               *S.meet(l3, l4)}};
        });
      });
    });
  }
  return found;
}

struct CrossingClass {
  enum class Kind { Concurrent, Fan, Invalid };
  Kind kind = Kind::Invalid;
  std::optional<PointId> point;  // common point / point of concurrency
  bool triangle = false;         // 3-line fan with no point of concurrency
  std::string reason;

  bool is_concurrent() const { return kind == Kind::Concurrent; }
  bool is_fan() const { return kind == Kind::Fan; }
  bool is_invalid() const { return kind == Kind::Invalid; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (kind) {
      case Kind::Concurrent: j["kind"] = "concurrent"; break;
      case Kind::Fan: j["kind"] = "fan"; break;
      case Kind::Invalid: j["kind"] = "invalid"; break;
    }
    if (point) j["point"] = *point;
    if (triangle) j["triangle"] = true;
    if (!reason.empty()) j["reason"] = reason;
    return j;
  }
};

// Classifies >= 3 pairwise-crossing lines: all through one point, or an
// s-fan (exactly |lines|-1 through the point of concurrency; a triangle when
// |lines| == 3 and there is no common point). Any disjoint pair, or a shape
// that is neither, yields Invalid.
inline CrossingClass classify_crossing(const PartialLinearSpace& S,
                                       std::span<const LineId> lines) {
  if (lines.size() < 3)
    throw std::invalid_argument("classify_crossing needs at least 3 lines");
  for (LineId l : lines)
    if (l >= S.line_count()) throw unknown_line_error(l);
  {
    std::vector<LineId> sorted(lines.begin(), lines.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("classify_crossing needs distinct lines");
  }

  std::vector<PointId> meets;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      auto m = S.meet(lines[i], lines[j]);
      if (!m)
        return {CrossingClass::Kind::Invalid, std::nullopt, false,
                "lines " + std::to_string(lines[i]) + " and " +
                    std::to_string(lines[j]) + " are disjoint"};
      meets.push_back(*m);
    }
  std::sort(meets.begin(), meets.end());
  meets.erase(std::unique(meets.begin(), meets.end()), meets.end());

  std::optional<PointId> concurrency;
  for (PointId p : meets) {
    std::size_t cnt = 0;
    for (LineId l : lines) cnt += S.on_line(l, p);
    if (cnt == lines.size()) return {CrossingClass::Kind::Concurrent, p, false, ""};
    if (cnt == lines.size() - 1 && !concurrency) concurrency = p;
  }
  if (lines.size() == 3)
    return {CrossingClass::Kind::Fan, std::nullopt, true, ""};
  if (concurrency)
    return {CrossingClass::Kind::Fan, concurrency, false, ""};
  return {CrossingClass::Kind::Invalid, std::nullopt, false,
          "neither concurrent nor a fan"};
}

// Precomputed index for repeated fan-count queries over one space.
//
// Fans of size s+1 holding a fixed crossing pair (a, b) with meet p split by
// the point of concurrency: at p itself (one stray line crossing both a and
// b away from p, plus s-2 further lines through p crossing it), or at some
// point y of a or b other than p (then the other line of the pair is the
// stray one, and s-1 further lines through y must cross it).
class FanCounter {
 public:
  explicit FanCounter(const PartialLinearSpace& pls) : pls_(&pls), idx_(pls) {}

  std::uint64_t count(LineId a, LineId b, unsigned fan_size) const {
    if (fan_size < 4)
      throw std::invalid_argument("fan counting needs fan_size >= 4");
    const unsigned s = fan_size - 1;
    auto meet = pls_->meet(a, b);
    if (!meet) throw lines_disjoint_error(a, b);
    const PointId p = *meet;

    std::uint64_t total = 0;
    BitRow cand(idx_.adj.words_per_row());
    cand.assign_and(idx_.adj.row(a), idx_.adj.row(b));
    cand.andnot_with(idx_.pencil.row(p));
    for_each_bit(cand.words(), [&](std::size_t stray) {
      // a and b are always among the pencil lines crossing the stray line.
      auto m = static_cast<std::int64_t>(
                   popcount_and(idx_.adj.row(stray), idx_.pencil.row(p))) -
               2;
      if (m >= 0) total += detail::choose_u64(static_cast<std::uint64_t>(m), s - 2);
    });

    auto concurrency_elsewhere = [&](LineId holder, LineId other) {
      for (PointId y : pls_->line(holder)) {
        if (y == p) continue;
        auto c = static_cast<std::int64_t>(popcount_and(
                     idx_.adj.row(other), idx_.pencil.row(y))) -
                 1;
        if (c >= 0) total += detail::choose_u64(static_cast<std::uint64_t>(c), s - 1);
      }
    };
    concurrency_elsewhere(a, b);
    concurrency_elsewhere(b, a);
    return total;
  }

  std::uint64_t intersecting_pair_count() const {
    std::uint64_t n = 0;
    for (PointId p = 0; p < pls_->point_count(); ++p) {
      std::uint64_t d = pls_->point_degree(p);
      n += d * (d - 1) / 2;
    }
    return n;
  }

  // fn(a, b, meet_point) over every unordered intersecting pair, exactly
  // once (the meet point is unique in a partial linear space).
  template <class Fn>
  void for_each_intersecting_pair(Fn&& fn) const {
    for (PointId p = 0; p < pls_->point_count(); ++p) {
      const auto& through = pls_->lines_through(p);
      for (std::size_t i = 0; i < through.size(); ++i)
        for (std::size_t j = i + 1; j < through.size(); ++j)
          fn(through[i], through[j], p);
    }
  }

  // The rank-th intersecting pair in the (point, pencil-pair) order used by
  // for_each_intersecting_pair. Used by sampled verification.
  std::pair<LineId, LineId> pair_at(std::uint64_t rank) const {
    for (PointId p = 0; p < pls_->point_count(); ++p) {
      const auto& through = pls_->lines_through(p);
      std::uint64_t d = through.size();
      std::uint64_t here = d * (d - 1) / 2;
      if (rank >= here) {
        rank -= here;
        continue;
      }
      std::size_t i = 0;
      std::uint64_t row = d - 1;
      while (rank >= row) {
        rank -= row;
        --row;
        ++i;
      }
      return {through[i], through[i + 1 + rank]};
    }
    throw std::out_of_range("pair rank out of range");
  }

  const PartialLinearSpace& space() const { return *pls_; }
  bool adjacent(LineId a, LineId b) const { return idx_.adj.get(a, b); }
  std::span<const std::uint64_t> adjacency_row(LineId l) const {
    return idx_.adj.row(l);
  }
  std::size_t words_per_row() const { return idx_.adj.words_per_row(); }

 private:
  const PartialLinearSpace* pls_;
  detail::PairIndex idx_;
};

// Exact number of (s+1)-fans containing both lines, where fan_size = s + 1.
inline std::uint64_t count_fans_on_pair(const PartialLinearSpace& S, LineId a,
                                        LineId b, unsigned fan_size) {
  if (a >= S.line_count()) throw unknown_line_error(a);
  if (b >= S.line_count()) throw unknown_line_error(b);
  return FanCounter(S).count(a, b, fan_size);
}

}  // namespace unitals
