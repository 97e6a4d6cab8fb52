#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace unitals {

// Signed scalar stored as sign + natural log of magnitude. Multiplication,
// division and powers are exact in log space; addition goes through
// log1p/exp and keeps ~15 significant digits away from cancellation.
// Handles magnitudes far beyond double range (2^{40s^2} and friends).
class LogReal {
 public:
  constexpr LogReal() = default;  // zero

  static LogReal from_double(double x) {
    if (x == 0.0) return LogReal();
    return LogReal(x > 0 ? 1 : -1, std::log(std::abs(x)));
  }
  // e^{lg}, always positive.
  static LogReal exp_of(double lg) { return LogReal(1, lg); }
  // 2^{e}
  static LogReal pow2(double e) { return LogReal(1, e * kLn2); }
  static LogReal from_log(int sign, double lg) {
    if (sign == 0) return LogReal();
    return LogReal(sign < 0 ? -1 : 1, lg);
  }
  static LogReal one() { return LogReal(1, 0.0); }

  int sign() const noexcept { return sign_; }
  bool is_zero() const noexcept { return sign_ == 0; }
  // ln|x|; -inf for zero.
  double log_magnitude() const noexcept { return log_; }
  double to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_);
  }

  LogReal operator-() const { return LogReal(-sign_, log_); }

  LogReal operator*(const LogReal& o) const {
    if (sign_ == 0 || o.sign_ == 0) return LogReal();
    return LogReal(sign_ * o.sign_, log_ + o.log_);
  }
  LogReal operator/(const LogReal& o) const {
    return LogReal(sign_ * o.sign_, log_ - o.log_);  // div by zero -> +inf log
  }
  LogReal operator+(const LogReal& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    if (sign_ == o.sign_) {
      double hi = std::max(log_, o.log_), lo = std::min(log_, o.log_);
      return LogReal(sign_, hi + std::log1p(std::exp(lo - hi)));
    }
    if (log_ == o.log_) return LogReal();
    const LogReal& big = log_ > o.log_ ? *this : o;
    const LogReal& small = log_ > o.log_ ? o : *this;
    return LogReal(big.sign_, big.log_ + std::log1p(-std::exp(small.log_ - big.log_)));
  }
  LogReal operator-(const LogReal& o) const { return *this + (-o); }

  // Real exponent; requires a nonnegative base.
  LogReal pow(double e) const {
    if (sign_ == 0) return e == 0.0 ? one() : LogReal();
    return LogReal(1, log_ * e);  // negative bases go through powi
  }
  LogReal powi(long long e) const {
    if (sign_ == 0) return e == 0 ? one() : LogReal();
    int s = (sign_ < 0 && (e & 1)) ? -1 : 1;
    return LogReal(s, log_ * static_cast<double>(e));
  }

  bool operator==(const LogReal& o) const {
    return sign_ == o.sign_ && (sign_ == 0 || log_ == o.log_);
  }
  bool operator<(const LogReal& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_;
    if (sign_ == 0) return false;
    return sign_ > 0 ? log_ < o.log_ : log_ > o.log_;
  }
  bool operator<=(const LogReal& o) const { return *this < o || *this == o; }
  bool operator>(const LogReal& o) const { return o < *this; }
  bool operator>=(const LogReal& o) const { return o <= *this; }

  // ln C(n, k) via lgamma; zero when k is outside [0, n].
  static LogReal lchoose(double n, double k) {
    if (k < 0 || k > n) return LogReal();
    if (k == 0 || k == n) return one();
    return LogReal(1, std::lgamma(n + 1) - std::lgamma(k + 1) -
                          std::lgamma(n - k + 1));
  }

  std::string str() const {
    if (sign_ == 0) return "0";
    std::string s = sign_ < 0 ? "-" : "";
    double l2 = log_ / kLn2;
    if (std::abs(log_) < 300.0) return s + std::to_string(std::exp(log_));
    return s + "2^" + std::to_string(l2);
  }

  friend std::ostream& operator<<(std::ostream& os, const LogReal& x) {
    return os << x.str();
  }

 private:
  static constexpr double kLn2 = 0.6931471805599453094172321214581766;
  LogReal(int sign, double lg) : sign_(sign), log_(lg) {}

  int sign_ = 0;
  double log_ = -std::numeric_limits<double>::infinity();
};

}  // namespace unitals
