#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "unitals/errors.hpp"

namespace unitals {

// Element of GF(q^2), stored as its index: the little-endian base-p digits of
// the index are the coefficients of the representative polynomial.
using FieldElem = std::uint16_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// q = p^m with p prime, m >= 1.
inline std::optional<std::pair<unsigned, unsigned>> prime_power_decompose(
    std::uint64_t q) {
  if (q < 2) return std::nullopt;
  unsigned p = 2;
  while (q % p != 0) {
    ++p;
    if (std::uint64_t{p} * p > q) {
      p = static_cast<unsigned>(q);  // q itself is prime
      break;
    }
  }
  unsigned m = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) return std::nullopt;
  return std::make_pair(p, m);
}

// Arithmetic in GF(q^2) = GF(p^{2m}) for q = p^m, with the norm map
// x -> x^{q+1} onto the subfield GF(q). The modulus is the lexicographically
// smallest monic irreducible polynomial of degree 2m over GF(p) (coefficients
// compared from the highest degree down, i.e. smallest integer encoding),
// found by exhaustive search with trial division. Deterministic, so the
// geometry built on top is reproducible run to run.
//
// Immutable after create(); all operations are pure.
class Field {
 public:
  static constexpr unsigned kMaxQ = 64;

  static Field create(unsigned q) {
    auto pm = prime_power_decompose(q);
    if (!pm) throw not_prime_power_error(q);
    if (q > kMaxQ)
      throw unsupported_error("field order q = " + std::to_string(q) +
                              " exceeds the supported maximum " +
                              std::to_string(kMaxQ));
    return Field(pm->first, pm->second);
  }

  unsigned p() const noexcept { return p_; }
  unsigned m() const noexcept { return m_; }
  unsigned q() const noexcept { return q_; }
  // |GF(q^2)| = p^{2m}
  unsigned order() const noexcept { return order_; }
  // Little-endian, length 2m+1, leading coefficient 1.
  const std::vector<unsigned>& modulus() const noexcept { return modulus_; }

  FieldElem zero() const noexcept { return 0; }
  FieldElem one() const noexcept { return 1; }

  FieldElem add(FieldElem a, FieldElem b) const {
    if (p_ == 2) return a ^ b;
    FieldElem r = 0;
    unsigned mult = 1;
    for (unsigned i = 0; i < deg_; ++i) {
      unsigned da = (a / mult) % p_, db = (b / mult) % p_;
      unsigned ds = da + db;
      if (ds >= p_) ds -= p_;
      r = static_cast<FieldElem>(r + ds * mult);
      mult *= p_;
    }
    return r;
  }

  FieldElem neg(FieldElem a) const {
    if (p_ == 2) return a;
    FieldElem r = 0;
    unsigned mult = 1;
    for (unsigned i = 0; i < deg_; ++i) {
      unsigned da = (a / mult) % p_;
      r = static_cast<FieldElem>(r + (da == 0 ? 0 : p_ - da) * mult);
      mult *= p_;
    }
    return r;
  }

  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

  FieldElem mul(FieldElem a, FieldElem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (order_ - 1)];
  }

  FieldElem inv(FieldElem a) const {
    if (a == 0) throw division_by_zero_error();
    return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
  }

  FieldElem pow(FieldElem a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? one() : zero();
    std::uint64_t le = (static_cast<std::uint64_t>(log_[a]) * (e % (order_ - 1))) %
                       (order_ - 1);
    return exp_[le];
  }

  // x^{q+1}; lands in the subfield GF(q).
  FieldElem norm(FieldElem a) const { return norm_[a]; }
  // Frobenius x -> x^q; fixes exactly the subfield GF(q).
  FieldElem frob_q(FieldElem a) const { return frob_[a]; }
  bool in_subfield(FieldElem a) const { return frob_[a] == a; }

  // Little-endian coefficients, length exactly 2m, entries in [0, p).
  std::vector<std::uint8_t> coeffs(FieldElem a) const {
    std::vector<std::uint8_t> c(deg_);
    for (unsigned i = 0; i < deg_; ++i) {
      c[i] = static_cast<std::uint8_t>(a % p_);
      a = static_cast<FieldElem>(a / p_);
    }
    return c;
  }

  FieldElem from_coeffs(std::span<const std::uint8_t> c) const {
    if (c.size() != deg_)
      throw unsupported_error("coefficient vector must have length 2m = " +
                              std::to_string(deg_));
    FieldElem r = 0;
    unsigned mult = 1;
    for (unsigned i = 0; i < deg_; ++i) {
      if (c[i] >= p_)
        throw unsupported_error("coefficient out of range [0, p)");
      r = static_cast<FieldElem>(r + c[i] * mult);
      mult *= p_;
    }
    return r;
  }

 private:
  Field(unsigned p, unsigned m)
      : p_(p), m_(m), deg_(2 * m), q_(ipow(p, m)), order_(ipow(p, 2 * m)) {
    modulus_ = find_modulus();
    build_tables();
  }

  static unsigned ipow(unsigned b, unsigned e) {
    unsigned r = 1;
    while (e--) r *= b;
    return r;
  }

  using Poly = std::vector<unsigned>;  // little-endian, may have zero lead

  static unsigned degree_of(const Poly& f) {
    for (std::size_t i = f.size(); i-- > 0;)
      if (f[i] != 0) return static_cast<unsigned>(i);
    return 0;
  }

  // f mod g over GF(p); g monic.
  Poly poly_mod(Poly f, const Poly& g) const {
    unsigned dg = degree_of(g);
    for (std::size_t i = f.size(); i-- > dg;) {
      if (f[i] == 0) continue;
      unsigned c = f[i];
      for (unsigned j = 0; j <= dg; ++j) {
        unsigned sub = (c * g[j]) % p_;
        f[i - dg + j] = (f[i - dg + j] + p_ - sub) % p_;
      }
    }
    f.resize(dg);
    return f;
  }

  bool divides(const Poly& g, const Poly& f) const {
    Poly r = poly_mod(f, g);
    return std::all_of(r.begin(), r.end(), [](unsigned c) { return c == 0; });
  }

  Poly decode_monic(unsigned enc, unsigned deg) const {
    Poly f(deg + 1);
    for (unsigned i = 0; i < deg; ++i) {
      f[i] = enc % p_;
      enc /= p_;
    }
    f[deg] = 1;
    return f;
  }

  bool is_irreducible(const Poly& f) const {
    // Trial division by every monic polynomial of degree 1..m.
    for (unsigned dd = 1; dd <= m_; ++dd) {
      unsigned count = ipow(p_, dd);
      for (unsigned enc = 0; enc < count; ++enc)
        if (divides(decode_monic(enc, dd), f)) return false;
    }
    return true;
  }

  Poly find_modulus() const {
    unsigned count = ipow(p_, deg_);
    for (unsigned enc = 0; enc < count; ++enc) {
      Poly f = decode_monic(enc, deg_);
      if (is_irreducible(f)) return f;
    }
    throw unsupported_error("no irreducible polynomial found");  // unreachable
  }

  FieldElem raw_mul(FieldElem a, FieldElem b) const {
    // Product of the representative polynomials reduced mod modulus_.
    std::vector<unsigned> prod(2 * deg_, 0);
    std::vector<unsigned> ca(deg_), cb(deg_);
    for (unsigned i = 0; i < deg_; ++i) {
      ca[i] = a % p_;
      a = static_cast<FieldElem>(a / p_);
      cb[i] = b % p_;
      b = static_cast<FieldElem>(b / p_);
    }
    for (unsigned i = 0; i < deg_; ++i) {
      if (ca[i] == 0) continue;
      for (unsigned j = 0; j < deg_; ++j)
        prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
    }
    Poly r = poly_mod(std::move(prod), modulus_);
    FieldElem idx = 0;
    unsigned mult = 1;
    for (unsigned i = 0; i < deg_; ++i) {
      idx = static_cast<FieldElem>(idx + r[i] * mult);
      mult *= p_;
    }
    return idx;
  }

  void build_tables() {
    const unsigned n = order_ - 1;  // multiplicative group order
    std::vector<unsigned> prime_factors;
    unsigned t = n;
    for (unsigned d = 2; d * d <= t; ++d)
      while (t % d == 0) {
        if (prime_factors.empty() || prime_factors.back() != d)
          prime_factors.push_back(d);
        t /= d;
      }
    if (t > 1) prime_factors.push_back(t);

    auto raw_pow = [&](FieldElem base, unsigned e) {
      FieldElem r = 1;
      while (e) {
        if (e & 1) r = raw_mul(r, base);
        base = raw_mul(base, base);
        e >>= 1;
      }
      return r;
    };

    FieldElem g = 0;
    for (FieldElem cand = 2; cand < order_; ++cand) {
      bool primitive = true;
      for (unsigned f : prime_factors)
        if (raw_pow(cand, n / f) == 1) {
          primitive = false;
          break;
        }
      if (primitive) {
        g = cand;
        break;
      }
    }

    exp_.assign(n, 0);
    log_.assign(order_, 0);
    FieldElem cur = 1;
    for (unsigned i = 0; i < n; ++i) {
      exp_[i] = cur;
      log_[cur] = i;
      cur = raw_mul(cur, g);
    }

    norm_.assign(order_, 0);
    frob_.assign(order_, 0);
    for (unsigned a = 1; a < order_; ++a) {
      norm_[a] = exp_[(static_cast<std::uint64_t>(log_[a]) * (q_ + 1)) % n];
      frob_[a] = exp_[(static_cast<std::uint64_t>(log_[a]) * q_) % n];
    }
  }

  unsigned p_, m_, deg_, q_, order_;
  Poly modulus_;
  std::vector<FieldElem> exp_, log_, norm_, frob_;
};

}  // namespace unitals
