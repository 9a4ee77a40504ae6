#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "abelianizer/abelianizer.hpp"

namespace az = abelianizer;

namespace {

enum Exit : int { kPass = 0, kViolation = 1, kUsage = 2, kCache = 3, kRuntime = 4 };

struct UsageError : az::Error {
  using az::Error::Error;
};

void add_common(CLI::App& app, az::RunConfig& cfg) {
  app.add_option("--k", cfg.k, "rows of the box")->capture_default_str();
  app.add_option("--n", cfg.n, "ambient dimension")->capture_default_str();
  app.add_option("--max-degree", cfg.max_degree, "largest curve degree")->capture_default_str();
  app.add_option("--max-insertions", cfg.max_insertions, "largest number of marked points")->capture_default_str();
  app.add_option("--z-depth", cfg.z_depth, "z-orders checked below the leading power")->capture_default_str();
  app.add_option("--cache", cfg.cache_path, "memo cache file (ABELIANIZER_CACHE overrides)");
  app.add_option("--format", cfg.format, "json, csv or markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

void validate(const az::RunConfig& cfg, bool need_box = true) {
  if (need_box && !(0 < cfg.k && cfg.k < cfg.n)) throw UsageError("need 0 < k < n");
  if (cfg.max_degree < 0) throw UsageError("--max-degree must be nonnegative");
  if (cfg.max_insertions < 3) throw UsageError("--max-insertions must be at least 3");
  if (cfg.z_depth < 0) throw UsageError("--z-depth must be nonnegative");
}

std::string cache_path(const az::RunConfig& cfg) {
  if (const char* env = std::getenv("ABELIANIZER_CACHE"); env && *env) return env;
  return cfg.cache_path;
}

std::vector<az::Partition> parse_parts(const std::string& text, const az::BoxSpec& box) {
  std::vector<az::Partition> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    try {
      out.push_back(az::Partition::parse(item));
    } catch (const az::Error& e) {
      throw UsageError(e.what());
    }
    if (!out.back().fits(box)) throw UsageError("partition " + out.back().str() + " outside the box");
  }
  if (out.empty()) throw UsageError("--parts is empty");
  return out;
}

/// Value predicted by the rim-hook rule or the divisor axiom, if one applies.
std::optional<std::pair<std::string, az::Scalar>> oracle_value(const az::Correspondence& corr,
                                                               const std::vector<az::Partition>& ps, az::Degree d) {
  if (ps.size() == 3) return std::make_pair(std::string("rim-hook"), corr.oracle().three_point(ps[0], ps[1], ps[2], d));
  if (ps.size() == 2 && d >= 1) return std::make_pair(std::string("two-point"), corr.oracle().two_point(ps[0], ps[1], d));
  if (ps.size() >= 4) {
    auto it = std::find(ps.begin(), ps.end(), az::Partition{1});
    if (it == ps.end()) return std::nullopt;
    std::vector<az::Partition> rest = ps;
    rest.erase(rest.begin() + (it - ps.begin()));
    return std::make_pair(std::string("divisor"), corr.invariant(rest, d) * d);
  }
  return std::nullopt;
}

int cmd_invariant(const az::RunConfig& cfg, const std::string& parts, int d) {
  validate(cfg);
  const az::BoxSpec box = cfg.box();
  const auto ps = parse_parts(parts, box);
  if (d < 0) throw UsageError("--d must be nonnegative");
  az::MemoStore store;
  const std::string path = cache_path(cfg);
  if (!path.empty()) store.load(path);
  az::Correspondence corr(box, store);
  const az::Scalar value = corr.invariant(ps, d);
  nlohmann::json rec = {{"schema", "invariant v1"},
                        {"target", {{"k", cfg.k}, {"n", cfg.n}}},
                        {"degree", d},
                        {"insertions", parts},
                        {"value", az::to_display(value)}};
  bool agree = true;
  if (auto o = oracle_value(corr, ps, d)) {
    rec["oracle"] = {{"kind", o->first}, {"value", az::to_display(o->second)}};
    agree = o->second == value;
    rec["agrees"] = agree;
  }
  if (!path.empty()) store.save(path);
  std::cout << az::to_display(value) << "\n" << rec.dump() << "\n";
  return agree ? kPass : kViolation;
}

void write_report(std::ostream& os, const az::RunConfig& cfg, const std::vector<az::SuiteResult>& results,
                  const az::MemoStore& store, bool timing) {
  if (cfg.format == "json") {
    os << az::report_json(cfg, results, store, {timing}).dump(2) << "\n";
    return;
  }
  if (cfg.format == "csv") {
    os << "suite,pass,instances,violations\n";
    for (const auto& r : results)
      os << r.report.name << "," << (r.pass() ? "true" : "false") << "," << r.report.instances << ","
         << r.report.violations.size() << "\n";
    return;
  }
  os << "| suite | pass | instances | violations |\n| --- | --- | --- | --- |\n";
  for (const auto& r : results)
    os << "| " << r.report.name << " | " << (r.pass() ? "yes" : "no") << " | " << r.report.instances << " | "
       << r.report.violations.size() << " |\n";
}

int cmd_verify(az::RunConfig cfg, bool timing) {
  validate(cfg);
  std::vector<const az::Suite*> suites;
  try {
    suites = az::select_suites(cfg.suites);
  } catch (const az::Error& e) {
    throw UsageError(e.what());
  }
  az::RunContext ctx(cfg);
  const std::string path = cache_path(cfg);
  if (!path.empty()) ctx.store().load(path);
  const auto results = az::run_suites(suites, ctx, cfg.jobs);
  if (!path.empty()) ctx.store().save(path);
  write_report(std::cout, cfg, results, ctx.store(), timing);
  for (const auto& r : results)
    if (!r.pass()) return kViolation;
  return kPass;
}

int cmd_table(const az::RunConfig& cfg, const std::string& space, int points, const std::string& output) {
  validate(cfg, space == "grass");
  if (space == "abelian" && (cfg.k < 1 || cfg.n < 2)) throw UsageError("need k >= 1 and n >= 2");
  if (points < 0) throw UsageError("--points must be nonnegative");
  az::MemoStore store;
  const std::string path = cache_path(cfg);
  if (!path.empty()) store.load(path);
  std::vector<az::TableRow> rows;
  if (space == "grass") {
    az::Correspondence corr(cfg.box(), store);
    rows = az::grass_table(corr, points, cfg.max_degree);
  } else {
    az::AbelianGW gw(az::ProductSpace(cfg.k, cfg.n), store);
    rows = az::abelian_table(gw, points, cfg.max_degree);
  }
  if (!path.empty()) store.save(path);
  if (output.empty() || output == "-") {
    az::write_table(std::cout, rows, cfg.format);
  } else {
    std::ofstream os(output, std::ios::trunc);
    if (!os) throw az::Error("cannot write " + output);
    az::write_table(os, rows, cfg.format);
    if (!os) throw az::Error("failed writing " + output);
  }
  return kPass;
}

int cmd_cache(const az::RunConfig& cfg, const std::string& action) {
  const std::string path = cache_path(cfg);
  if (path.empty()) throw UsageError("cache needs --cache or ABELIANIZER_CACHE");
  if (action == "clear") {
    std::filesystem::remove(path);
    return kPass;
  }
  az::RunContext ctx(cfg);
  ctx.store().load(path);
  if (action == "warm") {
    validate(cfg);
    std::vector<const az::Suite*> suites;
    try {
      suites = az::select_suites(cfg.suites);
    } catch (const az::Error& e) {
      throw UsageError(e.what());
    }
    az::run_suites(suites, ctx, cfg.jobs);
    ctx.store().save(path);
  }
  nlohmann::json info = {{"version", az::kCacheVersion},
                         {"path", path},
                         {"exists", std::filesystem::exists(path)},
                         {"entries", ctx.store().size()}};
  std::cout << info.dump(2) << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genus-zero GW invariants of Grassmannians via products of projective spaces"};
  app.require_subcommand(1);
  az::RunConfig cfg;

  auto* inv = app.add_subcommand("invariant", "corrected Grassmannian invariant with its oracle");
  add_common(*inv, cfg);
  std::string parts;
  int degree = 0;
  inv->add_option("--parts", parts, "insertions, e.g. \"[1];[2,1];[2,2]\"")->required();
  inv->add_option("--d", degree, "curve degree")->capture_default_str();

  auto* ver = app.add_subcommand("verify", "run verification suites");
  add_common(*ver, cfg);
  ver->add_option("--suite", cfg.suites, "suite names or 'all'")->delimiter(',')->capture_default_str();
  bool no_timing = false;
  ver->add_flag("--no-timing", no_timing, "omit wall times and cache counters");

  auto* tab = app.add_subcommand("table", "table of invariants within bounds");
  add_common(*tab, cfg);
  std::string space = "grass";
  int points = 3;
  std::string output;
  tab->add_option("--space", space, "grass or abelian")->check(CLI::IsMember({"grass", "abelian"}))->capture_default_str();
  tab->add_option("--points", points, "number of insertions")->capture_default_str();
  tab->add_option("-o,--output", output, "output file (default stdout)");

  auto* cache = app.add_subcommand("cache", "inspect, warm or clear the memo cache");
  add_common(*cache, cfg);
  std::string action = "info";
  cache->add_option("action", action, "info, warm or clear")->check(CLI::IsMember({"info", "warm", "clear"}));
  cache->add_option("--suite", cfg.suites, "suites used by warm")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*inv) return cmd_invariant(cfg, parts, degree);
    if (*ver) return cmd_verify(cfg, !no_timing);
    if (*tab) return cmd_table(cfg, space, points, output);
    if (*cache) return cmd_cache(cfg, action);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const az::OutsideBoxError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const az::CacheVersionError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return kCache;
  } catch (const az::InvariantViolation& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
