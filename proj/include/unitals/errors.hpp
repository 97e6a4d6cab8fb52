#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace unitals {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class not_prime_power_error : public error {
 public:
  explicit not_prime_power_error(std::uint64_t q)
      : error("not a prime power: " + std::to_string(q)), q_(q) {}
  std::uint64_t q() const noexcept { return q_; }

 private:
  std::uint64_t q_;
};

class unsupported_error : public error {
 public:
  using error::error;
};

class division_by_zero_error : public error {
 public:
  division_by_zero_error() : error("field inverse of zero") {}
};

class budget_exceeded_error : public error {
 public:
  explicit budget_exceeded_error(const std::string& what) : error(what) {}
};

class too_large_error : public error {
 public:
  explicit too_large_error(const std::string& what) : error(what) {}
};

class lines_disjoint_error : public error {
 public:
  lines_disjoint_error(std::uint32_t a, std::uint32_t b)
      : error("lines " + std::to_string(a) + " and " + std::to_string(b) +
              " do not intersect") {}
};

class unknown_line_error : public error {
 public:
  explicit unknown_line_error(std::uint32_t id)
      : error("unknown line id " + std::to_string(id)) {}
};

class vertex_mismatch_error : public error {
 public:
  vertex_mismatch_error(std::size_t a, std::size_t b)
      : error("graphs have different vertex counts: " + std::to_string(a) +
              " vs " + std::to_string(b)) {}
};

class missing_color_error : public error {
 public:
  using error::error;
};

class not_linear_error : public error {
 public:
  using error::error;
};

class epsilon_out_of_range_error : public error {
 public:
  explicit epsilon_out_of_range_error(double eps)
      : error("epsilon must lie in [0,1], got " + std::to_string(eps)) {}
};

class rho_exceeds_one_error : public error {
 public:
  using error::error;
};

}  // namespace unitals
