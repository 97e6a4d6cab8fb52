#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "unitals/cliques.hpp"
#include "unitals/errors.hpp"
#include "unitals/field.hpp"
#include "unitals/log_real.hpp"

namespace unitals {

enum class TailSide { Upper, Lower };

// Binomial concentration: exp(-eps^2 mu / 4) above the mean, exp(-eps^2 mu
// / 2) below it.
inline LogReal chernoff_tail_bound(double mean, double eps, TailSide side) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw epsilon_out_of_range_error(eps);
  if (mean < 0) throw std::invalid_argument("mean must be >= 0");
  double denom = side == TailSide::Upper ? 4.0 : 2.0;
  return LogReal::exp_of(-eps * eps * mean / denom);
}

// Expected K_s count of the random s-partite graph with the given class
// sizes: rho^C(s,2) * prod |Y_i|.
inline LogReal janson_mu(std::span<const std::uint64_t> class_sizes,
                         double rho) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0,1]");
  const std::size_t s = class_sizes.size();
  double pairs = static_cast<double>(s) * (s - 1) / 2.0;
  LogReal mu = LogReal::from_double(rho).pow(pairs);
  for (std::uint64_t y : class_sizes) {
    if (y == 0) throw std::invalid_argument("class sizes must be positive");
    mu = mu * LogReal::from_double(static_cast<double>(y));
  }
  return mu;
}

// Pair-overlap variance term: sum over subsets S with 2 <= |S| <= s-1 of
// rho^{2 C(s,2) - C(|S|,2)} * prod_{i in S} |Y_i| * prod_{j not in S}
// |Y_j|(|Y_j| - 1). Empty sum (zero) for fewer than three classes.
inline LogReal janson_delta(std::span<const std::uint64_t> class_sizes,
                            double rho) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("rho must lie in [0,1]");
  const std::size_t s = class_sizes.size();
  if (s < 3) return LogReal();
  if (s > 24) throw too_large_error("janson_delta limited to 24 classes");
  for (std::uint64_t y : class_sizes)
    if (y == 0) throw std::invalid_argument("class sizes must be positive");
  const double full = static_cast<double>(s) * (s - 1) / 2.0;
  LogReal total;
  for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
    unsigned size = std::popcount(mask);
    if (size < 2 || size > s - 1) continue;
    double shared = static_cast<double>(size) * (size - 1) / 2.0;
    LogReal term = LogReal::from_double(rho).pow(2 * full - shared);
    for (std::size_t i = 0; i < s; ++i) {
      double y = static_cast<double>(class_sizes[i]);
      if (mask & (1u << i))
        term = term * LogReal::from_double(y);
      else
        term = term * LogReal::from_double(y * (y - 1));
    }
    total = total + term;
  }
  return total;
}

struct AppendixRatioReport {
  unsigned s = 0;
  double log_n = 0;  // natural log of n
  LogReal ratio;     // upper bound on delta/mu at rho = (8s/n)^{2/s}
  std::vector<double> term_logs;
  double terminal_bound = 0;  // sqrt(e) - 1 + (s-2) 2^{-s}
  bool ratio_lt_one = false;
  bool ratio_le_terminal = false;

  nlohmann::json to_json() const {
    return {{"s", s},
            {"log_n", log_n},
            {"ratio_log", ratio.log_magnitude()},
            {"ratio", ratio.to_double()},
            {"terminal_bound", terminal_bound},
            {"ratio_lt_one", ratio_lt_one},
            {"ratio_le_terminal", ratio_le_terminal}};
  }
};

// Evaluates sum_{i=2}^{s-1} (8s/n)^{(s-i)(s+i-1)/s} (n/(s-i))^{s-i} C(s,i)
// in log space and compares it against 1 and against the closed-form bound
// sqrt(e) - 1 + (s-2) 2^{-s}.
inline AppendixRatioReport appendix_ratio(unsigned s, LogReal n) {
  if (s < 3) throw std::invalid_argument("appendix ratio needs s >= 3");
  if (n.sign() <= 0) throw std::invalid_argument("n must be positive");
  AppendixRatioReport rep;
  rep.s = s;
  rep.log_n = n.log_magnitude();
  const double log_8s = std::log(8.0 * s);
  for (unsigned i = 2; i <= s - 1; ++i) {
    double si = static_cast<double>(s - i);
    double expo = si * (s + i - 1.0) / s;
    double log_term = expo * (log_8s - rep.log_n) +
                      si * (rep.log_n - std::log(si)) +
                      std::lgamma(s + 1.0) - std::lgamma(i + 1.0) -
                      std::lgamma(si + 1.0);
    rep.term_logs.push_back(log_term);
    rep.ratio = rep.ratio + LogReal::exp_of(log_term);
  }
  rep.terminal_bound =
      std::sqrt(std::exp(1.0)) - 1.0 + (s - 2.0) * std::pow(2.0, -double(s));
  rep.ratio_lt_one = rep.ratio < LogReal::one();
  rep.ratio_le_terminal =
      rep.ratio <= LogReal::from_double(rep.terminal_bound);
  return rep;
}

struct KsFreeBoundReport {
  unsigned s = 0;
  LogReal bound;        // exp(-2^{2s-4} n)
  bool n_in_regime = false;  // n >= 2^{40s}
  LogReal mu_min;       // minimum of mu over admissible colorings
  bool mu_min_ok = false;    // mu_min > 2^{2s-3} n

  nlohmann::json to_json() const {
    return {{"s", s},
            {"bound_log", bound.log_magnitude()},
            {"n_in_regime", n_in_regime},
            {"mu_min_log", mu_min.log_magnitude()},
            {"mu_min_ok", mu_min_ok}};
  }
};

// K_s-freeness probability bound exp(-2^{2s-4} n) for the random s-partite
// graph at rho = (8s/n)^{2/s} with classes of size >= n/2s. Outside the
// n >= 2^{40s} regime the value is still computed but flagged.
inline KsFreeBoundReport janson_ksfree_bound(unsigned s, LogReal n) {
  if (s < 3) throw std::invalid_argument("needs s >= 3");
  if (n.sign() <= 0) throw std::invalid_argument("n must be positive");
  KsFreeBoundReport rep;
  rep.s = s;
  double nd = n.to_double();
  double coeff = std::pow(2.0, 2.0 * s - 4.0);
  rep.bound = std::isfinite(nd) ? LogReal::exp_of(-coeff * nd) : LogReal();
  rep.n_in_regime = n >= LogReal::pow2(40.0 * s);
  // Classes of size n/2s apart from one of size n(s+1)/2s minimize mu:
  // mu_min = 4^{s-1} (s+1)/(2s) n, always above 2^{2s-3} n.
  rep.mu_min = LogReal::pow2(2.0 * s - 2.0) *
               LogReal::from_double((s + 1.0) / (2.0 * s)) * n;
  rep.mu_min_ok = rep.mu_min > LogReal::pow2(2.0 * s - 3.0) * n;
  return rep;
}

struct LLLParams {
  unsigned s = 0, q = 0;
  double a = 0;
  double log_q = 0;       // natural
  LogReal b;              // 2^{40s} * 2a ln q, rounded up when representable
  bool b_rounded = false; // integer rounding applied
  LogReal rho;            // (8s/b)^{2/s}
  LogReal k;              // (2a ln q)^s
  LogReal kappa;          // C(s+1,2) k
  LogReal gamma;          // 1/(32 s b k)
  double n_lines = 0;     // q^2(q^2 - q + 1)
  LogReal x_size;         // 8 b q^2
  LogReal n_big;          // N = C(n_lines, x_size)
  double log_n_plus_1 = 0;
  double log_majorant = 0;  // ln C(q^4, 8bq^2)
};

inline LLLParams derive_lll_params(unsigned s, unsigned q, double a) {
  if (s < 3 || q < 2 || a <= 0)
    throw std::invalid_argument("need s >= 3, q >= 2, a > 0");
  LLLParams p;
  p.s = s;
  p.q = q;
  p.a = a;
  p.log_q = std::log(q);
  LogReal b = LogReal::pow2(40.0 * s) * LogReal::from_double(2.0 * a * p.log_q);
  if (b <= LogReal::pow2(53)) {
    double rounded = std::ceil(b.to_double());
    p.b_rounded = rounded != b.to_double();
    b = LogReal::from_double(rounded);
  }
  p.b = b;
  if (p.b < LogReal::from_double(8.0 * s))
    throw rho_exceeds_one_error("rho = (8s/b)^{2/s} exceeds 1: b < 8s");
  p.rho = (LogReal::from_double(8.0 * s) / p.b).pow(2.0 / s);
  p.k = LogReal::exp_of(s * std::log(2.0 * a * p.log_q));
  p.kappa = LogReal::from_double((s + 1.0) * s / 2.0) * p.k;
  p.gamma = LogReal::one() /
            (LogReal::from_double(32.0 * s) * p.b * p.k);
  double qd = q;
  p.n_lines = qd * qd * (qd * qd - qd + 1.0);
  p.x_size = LogReal::from_double(8.0 * qd * qd) * p.b;
  p.n_big = LogReal::lchoose(p.n_lines, p.x_size.to_double());
  p.log_n_plus_1 = (p.n_big + LogReal::one()).log_magnitude();
  p.log_majorant =
      LogReal::lchoose(qd * qd * qd * qd, p.x_size.to_double()).log_magnitude();
  return p;
}

struct LLLReport {
  LLLParams params;

  // (1) 2e Pr(A_K) / gamma <= 1, with the derivation chain's intermediate
  // values (log scale, must be nondecreasing toward the terminal).
  double margin_first = 0;  // -ln(2e Pr(A_K)/gamma)
  std::vector<std::pair<std::string, double>> first_chain_logs;
  bool first_chain_monotone = false;
  double es_terminal = 0;  // e s / 8^{s+1}
  bool es_terminal_lt_one = false;

  // (2) ln(N+1) <= 32 b q^2 ln q - 1, plus the binomial majorant route.
  double margin_log_n = 0;
  bool majorant_le_target = false;  // ln C(q^4,8bq^2) <= 32bq^2 ln q
  bool x_le_q4 = false;             // 8bq^2 <= q^4 (majorant precondition)

  // (3) heavy-sum lower bound (a ln q)|X|/2 - 2abq^2 ln q = 2abq^2 ln q and
  // (1/64s) * 2abq^2 ln q = 32 bq^2 ln q at a = 2^{10} s.
  bool sum_identity_ok = false;
  double margin_sum = 0;  // ((a/(32s)) - 32) * bq^2 ln q; 0 at a = 2^{10}s
  bool identity_exact = false;

  // side conditions
  bool kappa_gamma_lt_half = false;
  bool rho_le_one = false;
  bool b_ge_16s = false;
  bool q_ge_a_log_q = false;
  double log_two_gamma_lambda = 0;  // with lambda at its upper bound

  bool margins_ok() const {
    return margin_first >= 0 && margin_log_n >= 0 && margin_sum >= 0 &&
           first_chain_monotone && es_terminal_lt_one && kappa_gamma_lt_half;
  }

  nlohmann::json to_json() const {
    nlohmann::json chain = nlohmann::json::array();
    for (const auto& [name, v] : first_chain_logs)
      chain.push_back({{"step", name}, {"log", v}});
    return {{"s", params.s},
            {"q", params.q},
            {"a", params.a},
            {"log_b", params.b.log_magnitude()},
            {"log_rho", params.rho.log_magnitude()},
            {"log_k", params.k.log_magnitude()},
            {"log_gamma", params.gamma.log_magnitude()},
            {"log_x_size", params.x_size.log_magnitude()},
            {"log_n_plus_1", params.log_n_plus_1},
            {"log_majorant", params.log_majorant},
            {"margin_first", margin_first},
            {"first_chain", chain},
            {"first_chain_monotone", first_chain_monotone},
            {"es_terminal", es_terminal},
            {"es_terminal_lt_one", es_terminal_lt_one},
            {"margin_log_n", margin_log_n},
            {"majorant_le_target", majorant_le_target},
            {"x_le_q4", x_le_q4},
            {"sum_identity_ok", sum_identity_ok},
            {"margin_sum", margin_sum},
            {"identity_exact", identity_exact},
            {"kappa_gamma_lt_half", kappa_gamma_lt_half},
            {"rho_le_one", rho_le_one},
            {"b_ge_16s", b_ge_16s},
            {"q_ge_a_log_q", q_ge_a_log_q},
            {"margins_ok", margins_ok()}};
  }
};

// Verifies both local-lemma inequalities' supporting chains at the given
// parameters, in log space, and returns signed margins.
inline LLLReport lll_check(unsigned s, unsigned q, double a) {
  LLLReport rep;
  rep.params = derive_lll_params(s, q, a);
  const LLLParams& p = rep.params;
  const double e1 = std::exp(1.0);

  // First chain: 2e Pr(A_K)/gamma = 64 e s b k rho^{C(s+1,2)} and its
  // upper-bounding rewrites down to es/8^{s+1}.
  double pairs_s1 = (s + 1.0) * s / 2.0;
  LogReal step0 = LogReal::from_double(64.0 * e1 * s) * p.b * p.k *
                  p.rho.pow(pairs_s1);
  LogReal eight_s = LogReal::from_double(8.0 * s);
  LogReal step1 = LogReal::from_double(64.0 * e1 * s) * p.k *
                  eight_s.pow(s + 1.0) / p.b.pow(double(s));
  LogReal step2 = LogReal::from_double(64.0 * e1 * s) *
                  eight_s.pow(s + 1.0) / LogReal::pow2(40.0 * s * s);
  LogReal step3 = LogReal::from_double(64.0 * e1 * s) *
                  eight_s.pow(s + 1.0) / LogReal::pow2(6.0 * s * s);
  LogReal step4 = LogReal::from_double(e1 * s) *
                  (eight_s / LogReal::pow2(6.0 * (s - 1.0))).pow(s + 1.0);
  LogReal step5 = LogReal::from_double(e1 * s) / LogReal::pow2(3.0 * (s + 1.0));
  rep.first_chain_logs = {{"2e*Pr(A_K)/gamma", step0.log_magnitude()},
                          {"64esk(8s)^{s+1}/b^s", step1.log_magnitude()},
                          {"64es(8s)^{s+1}/2^{40s^2}", step2.log_magnitude()},
                          {"64es(8s)^{s+1}/64^{s^2}", step3.log_magnitude()},
                          {"es(8s/64^{s-1})^{s+1}", step4.log_magnitude()},
                          {"es/8^{s+1}", step5.log_magnitude()}};
  rep.margin_first = -step0.log_magnitude();
  rep.first_chain_monotone = true;
  for (std::size_t i = 0; i + 1 < rep.first_chain_logs.size(); ++i)
    if (rep.first_chain_logs[i].second >
        rep.first_chain_logs[i + 1].second + 1e-9)
      rep.first_chain_monotone = false;
  rep.es_terminal = e1 * s / std::pow(8.0, s + 1.0);
  rep.es_terminal_lt_one = rep.es_terminal < 1.0;

  // Second chain: the union-bound count.
  LogReal target = LogReal::from_double(32.0 * p.log_q) *
                   LogReal::from_double(double(q) * q) * p.b;
  double target_log_lin = target.to_double();  // 32 b q^2 ln q as a number
  rep.margin_log_n = (target_log_lin - 1.0) - p.log_n_plus_1;
  rep.x_le_q4 =
      p.x_size <= LogReal::from_double(std::pow(double(q), 4.0));
  rep.majorant_le_target = p.log_majorant <= target_log_lin;

  // Third piece: exact coefficient arithmetic. (a ln q)(8bq^2)/2 - 2abq^2
  // ln q = 2abq^2 ln q always; dividing by 64s gives 32 bq^2 ln q exactly
  // when a = 2^{10} s.
  rep.sum_identity_ok = (0.5 * a * 8.0 - 2.0 * a) == 2.0 * a;
  rep.identity_exact = a == 1024.0 * s;
  double coeff = a / (32.0 * s) - 32.0;
  double bq2lq = (p.b * LogReal::from_double(double(q) * q * p.log_q)).to_double();
  rep.margin_sum = coeff == 0.0 ? 0.0 : coeff * bq2lq;

  rep.kappa_gamma_lt_half =
      p.kappa * p.gamma < LogReal::from_double(0.5);
  rep.rho_le_one = p.rho <= LogReal::one();
  rep.b_ge_16s = p.b >= LogReal::from_double(16.0 * s);
  rep.q_ge_a_log_q = q >= a * p.log_q;
  // 2 gamma lambda at lambda = b k (sum |X_p|)/2 with the sum at its
  // b-bound value 2abq^2 ln q; informational.
  LogReal sum_lower = LogReal::from_double(2.0 * a * p.log_q * q) *
                      LogReal::from_double(double(q)) * p.b;
  rep.log_two_gamma_lambda =
      (LogReal::from_double(2.0) * p.gamma *
       (LogReal::from_double(0.5) * p.b * p.k * sum_lower))
          .log_magnitude();
  return rep;
}

// Smallest prime power q with q >= a ln q.
inline unsigned smallest_admissible_prime_power(double a) {
  for (unsigned q = 2;; ++q) {
    if (q > 100'000'000)
      throw too_large_error("no admissible prime power below 1e8");
    if (q < a * std::log(q)) continue;
    if (prime_power_decompose(q)) return q;
  }
}

struct BertrandResult {
  std::uint64_t n = 0;
  std::uint64_t lo = 0, hi = 0;  // [ceil(n^{1/4}), floor(2 n^{1/4})]
  std::optional<std::uint64_t> prime;
};

inline BertrandResult bertrand_prime(std::uint64_t n) {
  BertrandResult r;
  r.n = n;
  auto fourth_root_floor = [](std::uint64_t v) {
    auto r0 = static_cast<std::uint64_t>(std::pow(double(v), 0.25));
    while ((r0 + 1) * (r0 + 1) * (r0 + 1) * (r0 + 1) <= v) ++r0;
    while (r0 > 0 && r0 * r0 * r0 * r0 > v) --r0;
    return r0;
  };
  std::uint64_t fr = fourth_root_floor(n);
  r.lo = (fr * fr * fr * fr == n) ? fr : fr + 1;
  r.hi = fourth_root_floor(16 * n);  // floor(2 n^{1/4})
  for (std::uint64_t c = r.lo; c <= r.hi; ++c)
    if (is_prime(c)) {
      r.prime = c;
      break;
    }
  return r;
}

struct FinalBoundReport {
  unsigned s = 0, q = 0;
  double n = 0;  // q^2(q^2 - q + 1)
  double log_lhs = 0;  // ln(8 b q^2)
  double log_mid = 0;  // ln(8 * 2^{40s} * 2^{11} s q^2 ln q)
  double log_rhs = 0;  // ln(2^{100s} sqrt(n) ln n)
  double margin = 0;
  bool holds = false;
  bool mid_matches = false;
  std::optional<BertrandResult> bertrand;

  nlohmann::json to_json() const {
    nlohmann::json j{{"s", s},         {"q", q},
                     {"n", n},         {"log_lhs", log_lhs},
                     {"log_mid", log_mid}, {"log_rhs", log_rhs},
                     {"margin", margin},   {"holds", holds},
                     {"mid_matches", mid_matches}};
    if (bertrand) {
      j["bertrand"] = {{"n", bertrand->n},
                       {"lo", bertrand->lo},
                       {"hi", bertrand->hi}};
      if (bertrand->prime) j["bertrand"]["prime"] = *bertrand->prime;
    }
    return j;
  }
};

// 8bq^2 <= 2^{100s} sqrt(n) ln n at a = 2^{10} s, b = 2^{40s} 2a ln q
// (unrounded), n = q^2(q^2-q+1); plus the prime search in [n^{1/4},
// 2n^{1/4}] for n up to 1e12.
inline FinalBoundReport final_bound_check(unsigned s, unsigned q) {
  if (s < 3 || q < 2) throw std::invalid_argument("need s >= 3, q >= 2");
  FinalBoundReport rep;
  rep.s = s;
  rep.q = q;
  const double a = 1024.0 * s;
  const double log_q = std::log(q);
  const double qd = q;
  rep.n = qd * qd * (qd * qd - qd + 1.0);
  LogReal b = LogReal::pow2(40.0 * s) * LogReal::from_double(2.0 * a * log_q);
  LogReal lhs = LogReal::from_double(8.0 * qd * qd) * b;
  LogReal mid = LogReal::from_double(8.0) * LogReal::pow2(40.0 * s) *
                LogReal::pow2(11.0) * LogReal::from_double(s * qd * qd * log_q);
  LogReal rhs = LogReal::pow2(100.0 * s) *
                LogReal::from_double(rep.n).pow(0.5) *
                LogReal::from_double(std::log(rep.n));
  rep.log_lhs = lhs.log_magnitude();
  rep.log_mid = mid.log_magnitude();
  rep.log_rhs = rhs.log_magnitude();
  rep.margin = rep.log_rhs - rep.log_lhs;
  rep.holds = rep.margin >= 0;
  rep.mid_matches = std::abs(rep.log_lhs - rep.log_mid) < 1e-9;
  if (rep.n <= 1e12)
    rep.bertrand = bertrand_prime(static_cast<std::uint64_t>(rep.n));
  return rep;
}

struct MainLemmaReport {
  LogReal bound;        // exp(-sum/(32s))
  LogReal exp_b_8s;     // exp(-b/8s)
  LogReal union_term;   // s^b exp(-2^{2s-4} b)
  LogReal exp_b_16s;    // exp(-b/16s)
  bool proof_step_ok = false;  // 2 exp(-b/8s) <= exp(-b/16s)
  bool b_ge_16s = false;
  bool b_in_regime = false;    // b >= 2^{40s}

  nlohmann::json to_json() const {
    return {{"bound_log", bound.log_magnitude()},
            {"exp_b_8s_log", exp_b_8s.log_magnitude()},
            {"union_term_log", union_term.log_magnitude()},
            {"exp_b_16s_log", exp_b_16s.log_magnitude()},
            {"proof_step_ok", proof_step_ok},
            {"b_ge_16s", b_ge_16s},
            {"b_in_regime", b_in_regime}};
  }
};

// Badness-probability bound exp(-(1/32s) sum |X_p|) plus the per-block decay
// values appearing in its derivation. Regime hypotheses are flagged, never
// fatal.
inline MainLemmaReport mainlemma_report(unsigned s, double b,
                                        std::uint64_t sum_xp) {
  if (s < 1 || b <= 0) throw std::invalid_argument("need s >= 1, b > 0");
  MainLemmaReport rep;
  rep.bound = LogReal::exp_of(-static_cast<double>(sum_xp) / (32.0 * s));
  rep.exp_b_8s = LogReal::exp_of(-b / (8.0 * s));
  rep.union_term =
      LogReal::exp_of(b * std::log(double(s)) - std::pow(2.0, 2.0 * s - 4.0) * b);
  rep.exp_b_16s = LogReal::exp_of(-b / (16.0 * s));
  rep.proof_step_ok =
      LogReal::from_double(2.0) * rep.exp_b_8s <= rep.exp_b_16s;
  rep.b_ge_16s = b >= 16.0 * s;
  rep.b_in_regime = std::log(b) >= 40.0 * s * std::log(2.0);
  return rep;
}

inline MainLemmaReport mainlemma_bound(const AXInstance& inst, unsigned s) {
  return mainlemma_report(s, static_cast<double>(inst.b), inst.sum_xp);
}

}  // namespace unitals
