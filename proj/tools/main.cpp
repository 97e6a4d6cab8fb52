// unitals: build Hermitian unitals, run the randomized line-graph pipeline,
// and machine-check the bound chains. Subcommands: geometry, pipeline,
// bounds, oracle. Reports are JSON (or CSV for grids); identical config and
// seed give byte-identical reports apart from the timing section.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unitals/bounds.hpp"
#include "unitals/cliques.hpp"
#include "unitals/line_graph.hpp"
#include "unitals/oracle.hpp"
#include "unitals/parallel.hpp"
#include "unitals/sampler.hpp"
#include "unitals/unital.hpp"

namespace {

using nlohmann::json;
using namespace unitals;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kSchemaVersion = 1;

class StageTimer {
 public:
  void start(const std::string& name) {
    name_ = name;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    auto dt = std::chrono::steady_clock::now() - t0_;
    timings_[name_] =
        std::chrono::duration<double, std::milli>(dt).count();
  }
  json to_json() const { return timings_; }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
  json timings_ = json::object();
};

void write_report(const json& report, const std::string& out_path) {
  if (out_path.empty()) return;
  std::ofstream os(out_path);
  if (!os) throw unsupported_error("cannot open output file " + out_path);
  os << report.dump(2) << '\n';
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw unsupported_error("cannot open output file " + path);
  os << text;
}

// "3..8" or "5"
std::vector<unsigned> parse_range(const std::string& spec) {
  auto dots = spec.find("..");
  std::vector<unsigned> out;
  if (dots == std::string::npos) {
    out.push_back(static_cast<unsigned>(std::stoul(spec)));
    return out;
  }
  unsigned lo = static_cast<unsigned>(std::stoul(spec.substr(0, dots)));
  unsigned hi = static_cast<unsigned>(std::stoul(spec.substr(dots + 2)));
  if (hi < lo) throw unsupported_error("bad range " + spec);
  for (unsigned v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

// "2^120", "1e9" or plain decimal, as a LogReal.
LogReal parse_big(const std::string& spec) {
  if (auto caret = spec.find('^'); caret != std::string::npos) {
    double base = std::stod(spec.substr(0, caret));
    double expo = std::stod(spec.substr(caret + 1));
    return LogReal::exp_of(expo * std::log(base));
  }
  return LogReal::from_double(std::stod(spec));
}

std::vector<std::uint64_t> parse_sizes(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::istringstream is(spec);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(std::stoull(item));
  return out;
}

// ---------------------------------------------------------------- geometry

struct GeometryConfig {
  unsigned q = 3;
  std::string onan_budget = "exhaustive";
  std::string export_pls;
  std::string out;
};

int run_geometry(const GeometryConfig& cfg) {
  StageTimer timer;
  json report{{"schema_version", kSchemaVersion},
              {"command", "geometry"},
              {"config",
               {{"q", cfg.q}, {"onan_budget", cfg.onan_budget}}}};

  timer.start("build");
  PartialLinearSpace u = build_hermitian_unital(cfg.q);
  timer.stop();

  timer.start("verify_design");
  DesignReport design = verify_design(u, cfg.q);
  timer.stop();
  report["design"] = design.to_json();

  std::uint64_t budget = cfg.onan_budget == "exhaustive"
                             ? kUnlimitedBudget
                             : std::stoull(cfg.onan_budget);
  bool budget_hit = false;
  std::optional<OnanWitness> witness;
  timer.start("onan_search");
  try {
    witness = find_onan(u, budget);
  } catch (const budget_exceeded_error&) {
    budget_hit = true;
  }
  timer.stop();
  json onan{{"budget", cfg.onan_budget}};
  if (budget_hit)
    onan["status"] = "budget-exceeded";
  else if (witness) {
    onan["status"] = "found";
    onan["lines"] = witness->lines;
    onan["points"] = witness->points;
  } else {
    onan["status"] = "none-exhaustive";
  }
  report["onan"] = onan;

  if (!cfg.export_pls.empty()) {
    std::ostringstream os;
    write_pls(os, u);
    write_text(os.str(), cfg.export_pls);
  }
  report["timing"] = timer.to_json();
  write_report(report, cfg.out);

  std::cout << "geometry q=" << cfg.q << ": " << design.points << " points, "
            << design.lines << " lines, design "
            << (design.ok() ? "ok" : "FAILED") << ", onan "
            << onan["status"].get<std::string>() << "\n";
  if (budget_hit) return kExitBudget;
  if (!design.ok() || witness) return kExitViolation;
  return kExitOk;
}

// ---------------------------------------------------------------- pipeline

struct PipelineConfig {
  unsigned q = 3;
  unsigned s = 3;
  double a = -1;           // default 2^10 s
  double b = -1;           // block size; required at desk scale
  double rho = -1;         // default (8s/b)^{2/s} clamped
  double pi = -1;          // default a ln q / (q+1) clamped
  std::uint64_t seed = 0;
  unsigned trials = 5;
  unsigned retries = 16;
  std::uint64_t x_size = 0;  // default min(8bq^2, |L|)
  std::size_t threads = 0;
  std::size_t property_samples = 20000;
  std::string export_pls, export_graph, out;
};

int run_pipeline(PipelineConfig cfg) {
  StageTimer timer;
  if (cfg.s < 3) throw unsupported_error("pipeline needs s >= 3");
  if (cfg.a <= 0) cfg.a = 1024.0 * cfg.s;
  if (cfg.b <= 0) {
    double paper_b =
        std::pow(2.0, 40.0 * cfg.s) * 2.0 * cfg.a * std::log(cfg.q);
    if (paper_b > 1e6)
      throw unsupported_error(
          "the theory-scale block size b = 2^{40s} 2a ln q is about 2^" +
          std::to_string(std::log2(paper_b)) +
          "; pass an explicit desk-scale --b");
    cfg.b = std::ceil(paper_b);
  }
  std::vector<std::string> regime;
  double rho_raw = std::pow(8.0 * cfg.s / cfg.b, 2.0 / cfg.s);
  if (cfg.rho < 0) {
    cfg.rho = std::min(1.0, rho_raw);
    if (rho_raw > 1.0) regime.push_back("rho clamped to 1 (b < 8s)");
  }

  SampleParams params;
  params.a = cfg.a;
  params.q = cfg.q;
  params.s = cfg.s;
  params.seed = rng::derive_stage(cfg.seed, "sample");
  params.max_retries = cfg.retries;
  if (cfg.pi >= 0) params.pi_override = cfg.pi;
  for (const auto& v : params.regime_violations()) regime.push_back(v);
  double paper_b_log2 =
      40.0 * cfg.s + std::log2(2.0 * cfg.a * std::log(cfg.q));
  if (std::log2(cfg.b) < paper_b_log2 - 0.5)
    regime.push_back("b below 2^{40s} 2a ln q");

  json report{{"schema_version", kSchemaVersion}, {"command", "pipeline"}};

  timer.start("build_unital");
  PartialLinearSpace unital = build_hermitian_unital(cfg.q);
  timer.stop();
  if (cfg.x_size == 0)
    cfg.x_size = std::min<std::uint64_t>(
        static_cast<std::uint64_t>(8 * cfg.b) * cfg.q * cfg.q,
        unital.line_count());
  if (cfg.x_size > unital.line_count()) {
    regime.push_back("x_size clamped to |L|");
    cfg.x_size = unital.line_count();
  }
  report["config"] = {{"q", cfg.q},           {"s", cfg.s},
                      {"a", cfg.a},           {"b", cfg.b},
                      {"rho", cfg.rho},       {"pi", params.pi()},
                      {"seed", cfg.seed},     {"trials", cfg.trials},
                      {"retries", cfg.retries}, {"x_size", cfg.x_size},
                      {"property_samples", cfg.property_samples}};
  report["regime_violations"] = regime;

  timer.start("sample_until_good");
  Lemma5Options l5opts;
  l5opts.threads = cfg.threads;
  SampleResult sampled;
  try {
    sampled = sample_until_good(unital, params, cfg.b, l5opts);
  } catch (const retries_exhausted_error& e) {
    report["sample"] = {{"attempts", cfg.retries},
                        {"status", "retries-exhausted"},
                        {"last_report", e.last_report().to_json()}};
    report["timing"] = timer.to_json();
    write_report(report, cfg.out);
    std::cout << "pipeline: sampling retries exhausted\n";
    return kExitBudget;
  }
  timer.stop();
  const PartialLinearSpace& h = sampled.space;
  report["sample"] = {{"attempts", sampled.attempts},
                      {"status", "ok"},
                      {"points", h.point_count()},
                      {"lemma5", sampled.report.to_json()}};

  timer.start("graphs");
  LineGraph g = build_intersection_graph(h);
  PencilColoring chi =
      random_pencil_coloring(h, cfg.s, rng::derive_stage(cfg.seed, "chi"));
  LineGraph g_chi = apply_pencil_filter(g, chi);
  LineGraph g_rho =
      sample_edges(g, cfg.rho, rng::derive_stage(cfg.seed, "rho"));
  LineGraph h_graph = intersect_graphs(g_rho, g_chi);
  timer.stop();
  report["graphs"] = {{"G", g.summary_json()},
                      {"G_chi", g_chi.summary_json()},
                      {"G_rho", g_rho.summary_json()},
                      {"H", h_graph.summary_json()}};

  timer.start("properties");
  PropertyOptions popts;
  popts.samples = cfg.property_samples;
  popts.seed = rng::derive_stage(cfg.seed, "properties");
  PropertyReport prop_a = verify_property_A(g, h, cfg.s, popts);
  PropertyReport prop_b = verify_property_B(g_chi, h, cfg.s, popts);
  timer.stop();
  report["property_A"] = prop_a.to_json();
  report["property_B"] = prop_b.to_json();

  // K_{s+1} census of the final graph; everything found must classify as a
  // fan (property B restricted to H).
  timer.start("ks1_search");
  PropertyReport prop_h = verify_property_B(h_graph, h, cfg.s, popts);
  timer.stop();
  report["H_ks1"] = prop_h.to_json();

  timer.start("ax_trials");
  struct TrialResult {
    bool bad = false;
    bool clique_found = false;
    std::uint64_t sum_xp = 0;
    double bound_log = 0;
    bool consistent = true;
  };
  std::vector<TrialResult> trials(cfg.trials);
  parallel_blocks(cfg.trials, cfg.threads, [&](std::size_t, std::size_t lo,
                                               std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      std::mt19937_64 gen(rng::derive(cfg.seed, rng::hash_name("ax"), t));
      std::vector<LineId> all(h.line_count());
      for (LineId l = 0; l < all.size(); ++l) all[l] = l;
      for (std::size_t i = 0; i < cfg.x_size; ++i)
        std::swap(all[i], all[i + gen() % (all.size() - i)]);
      all.resize(cfg.x_size);
      AXInstance inst =
          build_ax_instance(h, all, static_cast<unsigned>(cfg.b));
      auto outcome = event_ax_occurs(h_graph, inst, cfg.s);
      auto clique = contains_clique(h_graph, all, cfg.s);
      TrialResult r;
      r.bad = outcome.bad;
      r.clique_found = clique.has_value();
      r.sum_xp = inst.sum_xp;
      r.bound_log = mainlemma_bound(inst, cfg.s).bound.log_magnitude();
      r.consistent = outcome.bad || clique.has_value();
      trials[t] = r;
    }
  });
  timer.stop();
  std::size_t bad_count = 0, clique_count = 0, inconsistent = 0;
  json per_trial = json::array();
  for (const auto& r : trials) {
    bad_count += r.bad;
    clique_count += r.clique_found;
    inconsistent += !r.consistent;
    per_trial.push_back({{"bad", r.bad},
                         {"ks_in_x", r.clique_found},
                         {"sum_xp", r.sum_xp},
                         {"mainlemma_bound_log", r.bound_log}});
  }
  report["ax_trials"] = {
      {"trials", cfg.trials},
      {"x_size", cfg.x_size},
      {"bad_frequency", cfg.trials ? double(bad_count) / cfg.trials : 0.0},
      {"ks_frequency", cfg.trials ? double(clique_count) / cfg.trials : 0.0},
      {"inconsistencies", inconsistent},
      {"per_trial", per_trial}};

  if (!cfg.export_pls.empty()) {
    std::ostringstream os;
    write_pls(os, h);
    write_text(os.str(), cfg.export_pls);
  }
  if (!cfg.export_graph.empty()) {
    std::ostringstream os;
    write_edge_list(os, h_graph);
    write_text(os.str(), cfg.export_graph);
  }
  report["timing"] = timer.to_json();
  write_report(report, cfg.out);

  bool ok = prop_a.ok() && prop_b.ok() && prop_h.ok() && inconsistent == 0;
  std::cout << "pipeline q=" << cfg.q << " s=" << cfg.s << " seed=" << cfg.seed
            << ": attempts=" << sampled.attempts << " |P|=" << h.point_count()
            << " E(G)=" << g.edge_count() << " E(G_chi)=" << g_chi.edge_count()
            << " E(G_rho)=" << g_rho.edge_count()
            << " E(H)=" << h_graph.edge_count()
            << " A=" << (prop_a.ok() ? "ok" : "VIOLATED")
            << " B=" << (prop_b.ok() ? "ok" : "VIOLATED")
            << " H-cliques=" << (prop_h.ok() ? "ok" : "VIOLATED")
            << " ax_bad=" << bad_count << "/" << cfg.trials
            << " inconsistencies=" << inconsistent << "\n";
  return ok ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ bounds

struct BoundsConfig {
  bool lll = false, appendix = false, final_bound = false, jbound = false;
  bool janson = false, chernoff = false;
  std::string s_range = "3";
  std::string n_expr;  // appendix / jbound
  unsigned q = 0;      // lll / final (0 = smallest admissible)
  double a = -1;       // lll (default 2^10 s)
  std::vector<std::uint64_t> bertrand_ns;
  std::string sizes;  // janson
  double rho = -1;
  double mean = -1, eps = -1;  // chernoff
  std::uint64_t mc = 0;        // Monte Carlo reps where applicable
  std::uint64_t seed = 0;
  std::string out;
};

std::string csv_escape(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void emit_rows(const std::string& command, const std::vector<json>& rows,
               const std::string& out) {
  if (rows.empty()) return;
  if (!out.empty() && out.size() > 4 &&
      out.substr(out.size() - 4) == ".csv") {
    // Fixed, versioned columns: schema first, then keys in first-seen order.
    std::vector<std::string> cols{"schema_version"};
    for (const auto& row : rows)
      for (auto it = row.begin(); it != row.end(); ++it)
        if (std::find(cols.begin(), cols.end(), it.key()) == cols.end())
          cols.push_back(it.key());
    std::ostringstream os;
    for (std::size_t c = 0; c < cols.size(); ++c)
      os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        os << (c ? "," : "");
        if (cols[c] == "schema_version")
          os << kSchemaVersion;
        else if (row.contains(cols[c]))
          os << csv_escape(row[cols[c]]);
      }
      os << '\n';
    }
    write_text(os.str(), out);
  } else {
    json report{{"schema_version", kSchemaVersion},
                {"command", command},
                {"rows", rows}};
    if (!out.empty())
      write_report(report, out);
    else
      std::cout << report.dump(2) << "\n";
  }
}

int run_bounds(const BoundsConfig& cfg) {
  std::vector<json> rows;
  bool all_ok = true;
  auto s_values = parse_range(cfg.s_range);

  if (cfg.lll) {
    for (unsigned s : s_values) {
      double a = cfg.a > 0 ? cfg.a : 1024.0 * s;
      unsigned q = cfg.q ? cfg.q : smallest_admissible_prime_power(a);
      LLLReport rep = lll_check(s, q, a);
      json row = rep.to_json();
      row.erase("first_chain");
      rows.push_back(row);
      all_ok = all_ok && rep.margins_ok();
      std::cout << "lll s=" << s << " q=" << q
                << " margins=" << (rep.margins_ok() ? "ok" : "VIOLATED")
                << " es_terminal=" << rep.es_terminal << "\n";
    }
  }
  if (cfg.appendix) {
    for (unsigned s : s_values) {
      LogReal n = cfg.n_expr.empty() ? LogReal::pow2(40.0 * s)
                                     : parse_big(cfg.n_expr);
      auto rep = appendix_ratio(s, n);
      rows.push_back(rep.to_json());
      all_ok = all_ok && rep.ratio_lt_one;
      std::cout << "appendix s=" << s << " ratio_log="
                << rep.ratio.log_magnitude()
                << (rep.ratio_lt_one ? " < 1 ok" : " NOT < 1") << "\n";
    }
  }
  if (cfg.final_bound) {
    for (unsigned s : s_values) {
      unsigned q = cfg.q ? cfg.q
                         : smallest_admissible_prime_power(1024.0 * s);
      auto rep = final_bound_check(s, q);
      rows.push_back(rep.to_json());
      all_ok = all_ok && rep.holds;
      std::cout << "final s=" << s << " q=" << q << " margin=" << rep.margin
                << (rep.holds ? " ok" : " VIOLATED") << "\n";
    }
  }
  for (std::uint64_t n : cfg.bertrand_ns) {
    auto rep = bertrand_prime(n);
    json row{{"n", rep.n}, {"lo", rep.lo}, {"hi", rep.hi}};
    if (rep.prime) row["prime"] = *rep.prime;
    rows.push_back(row);
    all_ok = all_ok && rep.prime.has_value();
    std::cout << "bertrand n=" << n << " prime="
              << (rep.prime ? std::to_string(*rep.prime) : "NONE") << "\n";
  }
  if (cfg.jbound) {
    for (unsigned s : s_values) {
      LogReal n = cfg.n_expr.empty() ? LogReal::pow2(40.0 * s)
                                     : parse_big(cfg.n_expr);
      auto rep = janson_ksfree_bound(s, n);
      json row = rep.to_json();
      if (cfg.mc && !cfg.sizes.empty() && cfg.rho >= 0) {
        auto sizes = parse_sizes(cfg.sizes);
        row["mc_ks_free_frequency"] =
            mc_ks_free_frequency(sizes, cfg.rho, cfg.mc, cfg.seed);
        row["mc_trials"] = cfg.mc;
      }
      rows.push_back(row);
      std::cout << "jbound s=" << s << " log=" << rep.bound.log_magnitude()
                << (rep.n_in_regime ? "" : " (outside n >= 2^{40s})") << "\n";
    }
  }
  if (cfg.janson) {
    auto sizes = parse_sizes(cfg.sizes);
    double rho = cfg.rho < 0 ? 1.0 : cfg.rho;
    LogReal mu = janson_mu(sizes, rho);
    LogReal delta = janson_delta(sizes, rho);
    json row{{"sizes", sizes},
             {"rho", rho},
             {"mu", mu.to_double()},
             {"delta", delta.to_double()}};
    std::uint64_t prod = 1;
    for (auto y : sizes) prod *= y;
    if (prod <= 10'000) {
      row["mu_oracle"] = brute_expected_ks(sizes, rho);
      if (prod * prod <= 100'000'000)
        row["delta_oracle"] = brute_delta(sizes, rho);
    }
    if (cfg.mc) {
      auto st = mc_ks_count_mean(sizes, rho, cfg.mc, cfg.seed);
      row["mc_mean"] = st.mean;
      row["mc_std_error"] = st.std_error;
    }
    rows.push_back(row);
    std::cout << "janson mu=" << mu.to_double()
              << " delta=" << delta.to_double() << "\n";
  }
  if (cfg.chernoff) {
    if (cfg.mean < 0 || cfg.eps < 0)
      throw unsupported_error("--chernoff needs --mean and --eps");
    LogReal upper = chernoff_tail_bound(cfg.mean, cfg.eps, TailSide::Upper);
    LogReal lower = chernoff_tail_bound(cfg.mean, cfg.eps, TailSide::Lower);
    json row{{"mean", cfg.mean},
             {"eps", cfg.eps},
             {"upper_log", upper.log_magnitude()},
             {"lower_log", lower.log_magnitude()}};
    rows.push_back(row);
    std::cout << "chernoff upper_log=" << upper.log_magnitude()
              << " lower_log=" << lower.log_magnitude() << "\n";
  }
  if (rows.empty())
    throw unsupported_error(
        "bounds: pick at least one of --lll --appendix --final --bertrand "
        "--jbound --janson --chernoff");
  emit_rows("bounds", rows, cfg.out);
  return all_ok ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------ oracle

struct OracleConfig {
  bool f_table = false, janson = false;
  std::string n_range = "1..7", s_range = "2..4";
  bool allow_n8 = false;
  std::string sizes;
  double rho = 1.0;
  std::uint64_t mc = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string out;
};

int run_oracle(const OracleConfig& cfg) {
  std::vector<json> rows;
  if (cfg.f_table) {
    BruteForceOptions opts;
    opts.allow_n8 = cfg.allow_n8;
    opts.threads = cfg.threads;
    std::cout << "n,s,f\n";
    for (unsigned n : parse_range(cfg.n_range))
      for (unsigned s : parse_range(cfg.s_range)) {
        unsigned f = brute_force_f(n, s, opts);
        rows.push_back({{"n", n}, {"s", s}, {"f", f}});
        std::cout << n << "," << s << "," << f << "\n";
      }
  }
  if (cfg.janson) {
    auto sizes = parse_sizes(cfg.sizes);
    json row{{"sizes", sizes},
             {"rho", cfg.rho},
             {"mu", brute_expected_ks(sizes, cfg.rho)},
             {"delta", brute_delta(sizes, cfg.rho)}};
    if (cfg.mc) {
      auto st = mc_ks_count_mean(sizes, cfg.rho, cfg.mc, cfg.seed);
      row["mc_mean"] = st.mean;
      row["mc_std_error"] = st.std_error;
    }
    rows.push_back(row);
    std::cout << "oracle janson mu=" << row["mu"] << " delta=" << row["delta"]
              << "\n";
  }
  if (rows.empty())
    throw unsupported_error("oracle: pick --f or --janson");
  emit_rows("oracle", rows, cfg.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian unital sampling pipeline and bound checker"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags win");

  GeometryConfig geo;
  auto* geo_cmd = app.add_subcommand("geometry", "build and verify a unital");
  geo_cmd->add_option("--q", geo.q, "prime power")->required();
  geo_cmd->add_option("--onan-budget", geo.onan_budget,
                      "work units or 'exhaustive'");
  geo_cmd->add_option("--export-pls", geo.export_pls, "write the space");
  geo_cmd->add_option("--out", geo.out, "JSON report path");

  PipelineConfig pipe;
  auto* pipe_cmd =
      app.add_subcommand("pipeline", "sample, color, filter, verify");
  pipe_cmd->add_option("--q", pipe.q, "prime power")->required();
  pipe_cmd->add_option("--s", pipe.s, "clique parameter (>= 3)");
  pipe_cmd->add_option("--a", pipe.a, "sampling multiplier (default 2^10 s)");
  pipe_cmd->add_option("--b", pipe.b, "block size (desk-scale override)");
  pipe_cmd->add_option("--rho", pipe.rho, "edge probability override");
  pipe_cmd->add_option("--pi", pipe.pi, "point probability override");
  pipe_cmd->add_option("--seed", pipe.seed, "master seed");
  pipe_cmd->add_option("--trials", pipe.trials, "random X trials");
  pipe_cmd->add_option("--retries", pipe.retries, "sampling retries");
  pipe_cmd->add_option("--x-size", pipe.x_size, "random X size");
  pipe_cmd->add_option("--threads", pipe.threads, "worker threads");
  pipe_cmd->add_option("--property-samples", pipe.property_samples,
                       "samples when property checks cannot be exhaustive");
  pipe_cmd->add_option("--export-pls", pipe.export_pls, "write sampled space");
  pipe_cmd->add_option("--export-graph", pipe.export_graph,
                       "write final graph edges");
  pipe_cmd->add_option("--out", pipe.out, "JSON report path");

  BoundsConfig bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "inequality chains");
  bounds_cmd->add_flag("--lll", bounds.lll, "local lemma margins");
  bounds_cmd->add_flag("--appendix", bounds.appendix, "delta/mu ratio");
  bounds_cmd->add_flag("--final", bounds.final_bound, "final constant");
  bounds_cmd->add_flag("--jbound", bounds.jbound, "K_s-free probability");
  bounds_cmd->add_flag("--janson", bounds.janson, "mu/delta values");
  bounds_cmd->add_flag("--chernoff", bounds.chernoff, "tail bounds");
  bounds_cmd->add_option("--s", bounds.s_range, "s value or range lo..hi");
  bounds_cmd->add_option("--n", bounds.n_expr, "n (accepts 2^k)");
  bounds_cmd->add_option("--q", bounds.q, "prime power (default smallest)");
  bounds_cmd->add_option("--a", bounds.a, "multiplier (default 2^10 s)");
  bounds_cmd->add_option("--bertrand", bounds.bertrand_ns,
                         "prime search in [n^{1/4}, 2n^{1/4}]");
  bounds_cmd->add_option("--sizes", bounds.sizes, "class sizes a,b,c");
  bounds_cmd->add_option("--rho", bounds.rho, "edge probability");
  bounds_cmd->add_option("--mean", bounds.mean, "binomial mean");
  bounds_cmd->add_option("--eps", bounds.eps, "deviation in [0,1]");
  bounds_cmd->add_option("--mc", bounds.mc, "Monte Carlo repetitions");
  bounds_cmd->add_option("--seed", bounds.seed, "Monte Carlo seed");
  bounds_cmd->add_option("--out", bounds.out, "report path (.json or .csv)");

  OracleConfig ora;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force ground truth");
  oracle_cmd->add_flag("--f", ora.f_table, "exact small-n table");
  oracle_cmd->add_flag("--janson", ora.janson, "mu/delta by enumeration");
  oracle_cmd->add_option("--n", ora.n_range, "n value or range");
  oracle_cmd->add_option("--s", ora.s_range, "s value or range");
  oracle_cmd->add_flag("--allow-n8", ora.allow_n8, "enable the slow n=8");
  oracle_cmd->add_option("--sizes", ora.sizes, "class sizes a,b,c");
  oracle_cmd->add_option("--rho", ora.rho, "edge probability");
  oracle_cmd->add_option("--mc", ora.mc, "Monte Carlo repetitions");
  oracle_cmd->add_option("--seed", ora.seed, "Monte Carlo seed");
  oracle_cmd->add_option("--threads", ora.threads, "worker threads");
  oracle_cmd->add_option("--out", ora.out, "report path (.json or .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*geo_cmd) return run_geometry(geo);
    if (*pipe_cmd) return run_pipeline(pipe);
    if (*bounds_cmd) return run_bounds(bounds);
    if (*oracle_cmd) return run_oracle(ora);
  } catch (const budget_exceeded_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const retries_exhausted_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
