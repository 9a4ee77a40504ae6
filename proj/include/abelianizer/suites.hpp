#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelianizer/abelian_gw.hpp"
#include "abelianizer/cohomology.hpp"
#include "abelianizer/correspondence.hpp"
#include "abelianizer/grass_qh.hpp"
#include "abelianizer/jfunctions.hpp"
#include "abelianizer/report.hpp"

namespace abelianizer {

inline constexpr const char* kReportSchema = "report v1";

struct RunConfig {
  int k = 2;
  int n = 4;
  int max_degree = 2;
  int max_insertions = 5;
  int z_depth = 8;
  std::vector<std::string> suites{"all"};
  std::string cache_path;
  std::string format = "json";
  unsigned seed = 1;
  int jobs = 1;

  BoxSpec box() const { return BoxSpec(k, n); }
};

/// Shared state of one run: the abelian memo store and the engine on top.
class RunContext {
 public:
  explicit RunContext(const RunConfig& cfg) : cfg_(cfg), box_(cfg.box()) {}

  const RunConfig& config() const { return cfg_; }
  const BoxSpec& box() const { return box_; }
  MemoStore& store() { return store_; }

  const Correspondence& correspondence() {
    std::call_once(once_, [&] { corr_ = std::make_unique<Correspondence>(box_, store_); });
    return *corr_;
  }

 private:
  RunConfig cfg_;
  BoxSpec box_;
  MemoStore store_;
  std::once_flag once_;
  std::unique_ptr<Correspondence> corr_;
};

struct SuiteResult {
  CheckReport report;
  double wall_ms = 0;
  std::string error;

  bool pass() const { return error.empty() && report.pass(); }
};

using SuiteFn = std::function<CheckReport(RunContext&)>;

struct Suite {
  std::string name;
  std::string description;
  SuiteFn run;
};

inline const std::vector<Suite>& suite_registry() {
  static const std::vector<Suite> suites = {
      {"martin", "int w^2 S_lambda S_mu = delta_{mu, lambda^v}",
       [](RunContext& ctx) { return check_martin(ctx.box()); }},
      {"two-point", "2-point invariants against I_{2,d}(S_a w, S_b w)",
       [](RunContext& ctx) { return check_two_point(ctx.correspondence(), ctx.config().max_degree); }},
      {"three-point", "3-point formula against the rim-hook oracle",
       [](RunContext& ctx) { return check_three_point(ctx.correspondence(), ctx.config().max_degree); }},
      {"four-point-divisor", "4-point formula with one sigma_1 against d times the 3-point value",
       [](RunContext& ctx) { return check_four_point_divisor(ctx.correspondence(), ctx.config().max_degree); }},
      {"five-point-symmetry", "5-point formula invariant under permutations of its inputs",
       [](RunContext& ctx) {
         return check_formula_symmetry(ctx.correspondence(), 5, ctx.config().max_degree, 50, ctx.config().seed);
       }},
      {"wdvv-abelian", "WDVV for (P^{n-1})^k",
       [](RunContext& ctx) {
         AbelianGW gw(ProductSpace(ctx.box()), ctx.store());
         return check_wdvv(gw, ctx.config().max_degree, ctx.config().max_insertions);
       }},
      {"wdvv-grass", "WDVV for Grassmannian invariants assembled from the abelian side",
       [](RunContext& ctx) {
         return assemble_and_check_wdvv_Gr(ctx.correspondence(), ctx.config().max_degree, ctx.config().max_insertions);
       }},
      {"omega-trivial", "small quantum product with omega is classical after specialization",
       [](RunContext& ctx) { return check_omega_triviality(ctx.box()); }},
      {"mirror-small", "mirror-map corrections vanish on the small locus",
       [](RunContext& ctx) { return check_mirror_map(ctx.correspondence(), std::max(3, ctx.config().max_degree)); }},
      {"j-i", "I-function in the span of derivatives of the lifted Grassmannian J-function",
       [](RunContext& ctx) {
         const auto& cfg = ctx.config();
         CheckReport rep = check_j_i(ctx.box(), cfg.max_degree, cfg.z_depth);
         const ISeries I = i_function(ctx.box(), cfg.max_degree);
         rep.merge(check_anti_invariance(I));
         rep.merge(check_deformed_flatness(ctx.box(), cfg.max_degree));
         rep.name = "j-i";
         return rep;
       }},
      {"naive-failure", "uncorrected 4-point identity fails somewhere",
       [](RunContext& ctx) { return naive_vs_corrected(ctx.correspondence(), ctx.config().max_degree); }},
      {"calibration", "rim-hook sign gives nonnegative 3-point constants; the other sign does not",
       [](RunContext& ctx) {
         CheckReport rep = check_nonnegativity(ctx.box(), ctx.config().max_degree, kDefaultRimHookSign);
         const RimHookSign other = kDefaultRimHookSign == RimHookSign::KMinusHeight ? RimHookSign::HeightMinusOne
                                                                                      : RimHookSign::KMinusHeight;
         const CheckReport alt = check_nonnegativity(ctx.box(), ctx.config().max_degree, other);
         rep.notes.push_back("alternative sign: " + std::to_string(alt.violations.size()) + " negative constants");
         return rep;
       }},
  };
  return suites;
}

inline const Suite* find_suite(const std::string& name) {
  for (const auto& s : suite_registry())
    if (s.name == name) return &s;
  return nullptr;
}

/// Expands "all" and validates names; throws Error on an unknown suite.
inline std::vector<const Suite*> select_suites(const std::vector<std::string>& names) {
  std::vector<const Suite*> out;
  for (const auto& name : names) {
    if (name == "all") {
      for (const auto& s : suite_registry()) out.push_back(&s);
      continue;
    }
    const Suite* s = find_suite(name);
    if (!s) throw Error("unknown suite '" + name + "'");
    out.push_back(s);
  }
  return out;
}

inline SuiteResult run_suite(const Suite& suite, RunContext& ctx) {
  SuiteResult res;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    res.report = suite.run(ctx);
  } catch (const CacheVersionError&) {
    throw;
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  res.report.name = suite.name;
  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

/// Runs the suites on `jobs` worker threads; results keep registry order.
inline std::vector<SuiteResult> run_suites(const std::vector<const Suite*>& suites, RunContext& ctx, int jobs) {
  std::vector<SuiteResult> results(suites.size());
  if (jobs <= 1 || suites.size() <= 1) {
    for (std::size_t i = 0; i < suites.size(); ++i) results[i] = run_suite(*suites[i], ctx);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), suites.size());
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < suites.size(); i = next++) results[i] = run_suite(*suites[i], ctx);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

struct ReportOptions {
  bool include_timing = true;
};

inline nlohmann::json report_json(const RunConfig& cfg, const std::vector<SuiteResult>& results, const MemoStore& store,
                                  const ReportOptions& opt = {}) {
  nlohmann::json suites = nlohmann::json::array();
  bool pass = true;
  for (const auto& r : results) {
    nlohmann::json j = {{"suite", r.report.name},
                        {"pass", r.pass()},
                        {"instances", r.report.instances},
                        {"violations", r.report.violations},
                        {"notes", r.report.notes}};
    if (!r.error.empty()) j["error"] = r.error;
    if (opt.include_timing) j["wall_time_ms"] = r.wall_ms;
    suites.push_back(std::move(j));
    pass = pass && r.pass();
  }
  nlohmann::json out = {{"schema", kReportSchema},
                        {"target", {{"k", cfg.k}, {"n", cfg.n}}},
                        {"config",
                         {{"max_degree", cfg.max_degree},
                          {"max_insertions", cfg.max_insertions},
                          {"z_depth", cfg.z_depth},
                          {"seed", cfg.seed}}},
                        {"pass", pass},
                        {"suites", suites}};
  if (opt.include_timing) {
    out["cache"] = {{"entries", store.size()}, {"hits", store.hits()}, {"misses", store.misses()}};
  }
  return out;
}

}  // namespace abelianizer
