#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "unitals/errors.hpp"

namespace unitals {

using PointId = std::uint32_t;
using LineId = std::uint32_t;

// Points are the indices 0..n-1; lines are sorted point-id sets, indexed by
// position. Lines may be empty or repeat as sets (sampling keeps every line
// of the parent space); the partial-linear condition constrains point pairs,
// not line multisets. Immutable after construction.
class PartialLinearSpace {
 public:
  PartialLinearSpace() = default;

  PartialLinearSpace(std::size_t n_points,
                     std::vector<std::vector<PointId>> lines)
      : n_points_(n_points), lines_(std::move(lines)) {
    by_point_.assign(n_points_, {});
    for (LineId l = 0; l < lines_.size(); ++l) {
      auto& pts = lines_[l];
      std::sort(pts.begin(), pts.end());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] >= n_points_)
          throw unsupported_error("line " + std::to_string(l) +
                                  " references point " +
                                  std::to_string(pts[i]) + " >= " +
                                  std::to_string(n_points_));
        if (i > 0 && pts[i] == pts[i - 1])
          throw unsupported_error("line " + std::to_string(l) +
                                  " repeats point " + std::to_string(pts[i]));
        by_point_[pts[i]].push_back(l);
      }
    }
  }

  std::size_t point_count() const noexcept { return n_points_; }
  std::size_t line_count() const noexcept { return lines_.size(); }

  const std::vector<PointId>& line(LineId l) const { return lines_[l]; }
  const std::vector<std::vector<PointId>>& lines() const { return lines_; }
  const std::vector<LineId>& lines_through(PointId p) const {
    return by_point_[p];
  }
  std::size_t point_degree(PointId p) const { return by_point_[p].size(); }

  bool on_line(LineId l, PointId p) const {
    const auto& pts = lines_[l];
    return std::binary_search(pts.begin(), pts.end(), p);
  }

  // Unique common point of two lines, if any (unique when the space is
  // partial linear).
  std::optional<PointId> meet(LineId a, LineId b) const {
    const auto& pa = lines_[a];
    const auto& pb = lines_[b];
    std::size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
      if (pa[i] < pb[j])
        ++i;
      else if (pa[i] > pb[j])
        ++j;
      else
        return pa[i];
    }
    return std::nullopt;
  }

  struct LinearityViolation {
    PointId a, b;
    LineId first_line, second_line;
  };

  // Some pair of points on two distinct lines, if the space is not partial
  // linear. Deterministic: scans lines in index order.
  std::optional<LinearityViolation> linearity_violation() const {
    std::unordered_map<std::uint64_t, LineId> seen;
    seen.reserve(total_incidences());
    for (LineId l = 0; l < lines_.size(); ++l) {
      const auto& pts = lines_[l];
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
          std::uint64_t key =
              (static_cast<std::uint64_t>(pts[i]) << 32) | pts[j];
          auto [it, inserted] = seen.emplace(key, l);
          if (!inserted)
            return LinearityViolation{pts[i], pts[j], it->second, l};
        }
    }
    return std::nullopt;
  }

  bool is_linear() const { return !linearity_violation().has_value(); }

  std::size_t total_incidences() const {
    std::size_t n = 0;
    for (const auto& l : lines_) n += l.size();
    return n;
  }

  bool operator==(const PartialLinearSpace& o) const {
    return n_points_ == o.n_points_ && lines_ == o.lines_;
  }

 private:
  std::size_t n_points_ = 0;
  std::vector<std::vector<PointId>> lines_;
  std::vector<std::vector<LineId>> by_point_;
};

// Text format: header "pls <#points> <#lines>", then one row per line with
// its point ids. Empty lines of the geometry serialize as empty rows.
inline void write_pls(std::ostream& os, const PartialLinearSpace& pls) {
  os << "pls " << pls.point_count() << ' ' << pls.line_count() << '\n';
  for (LineId l = 0; l < pls.line_count(); ++l) {
    const auto& pts = pls.line(l);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os << ' ';
      os << pts[i];
    }
    os << '\n';
  }
}

inline PartialLinearSpace read_pls(std::istream& is) {
  std::string header;
  if (!std::getline(is, header))
    throw unsupported_error("pls: missing header");
  std::istringstream hs(header);
  std::string magic;
  std::size_t n_points = 0, n_lines = 0;
  if (!(hs >> magic >> n_points >> n_lines) || magic != "pls")
    throw unsupported_error("pls: malformed header: " + header);
  std::vector<std::vector<PointId>> lines(n_lines);
  std::string row;
  for (std::size_t l = 0; l < n_lines; ++l) {
    if (!std::getline(is, row))
      throw unsupported_error("pls: expected " + std::to_string(n_lines) +
                              " lines, got " + std::to_string(l));
    std::istringstream rs(row);
    PointId p;
    while (rs >> p) lines[l].push_back(p);
    if (!rs.eof())
      throw unsupported_error("pls: malformed row " + std::to_string(l));
  }
  return PartialLinearSpace(n_points, std::move(lines));
}

}  // namespace unitals
