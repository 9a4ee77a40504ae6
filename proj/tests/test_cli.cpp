#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef ABELIANIZER_CLI
#error "ABELIANIZER_CLI must name the command-line binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" ABELIANIZER_CLI "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class TempPath {
 public:
  explicit TempPath(const std::string& name) : path_(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove(path_);
  }
  ~TempPath() { std::filesystem::remove(path_); }
  std::string str() const { return path_.string(); }
  bool exists() const { return std::filesystem::exists(path_); }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, InvariantExample) {
  const auto r = run("invariant --k 2 --n 4 --parts \"[1];[2,1];[2,2]\" --d 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 2), "1\n");
  const auto j = nlohmann::json::parse(r.out.substr(2));
  EXPECT_EQ(j["value"], "1");
  EXPECT_TRUE(j["agrees"].get<bool>());
}

TEST(Cli, OutsideBoxIsUsageError) {
  EXPECT_EQ(run("invariant --k 2 --n 4 --parts \"[3];[1];[1]\" --d 0").code, 2);
}

TEST(Cli, DimensionViolatingTripleIsZero) {
  const auto r = run("invariant --k 2 --n 4 --parts \"[1];[1];[1]\" --d 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 2), "0\n");
}

TEST(Cli, UnknownSuiteIsUsageError) { EXPECT_EQ(run("verify --suite bogus").code, 2); }

TEST(Cli, VerifyTwoPoint) {
  const auto r = run("verify --suite two-point --k 2 --n 4 --max-degree 2");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "report v1");
  EXPECT_TRUE(j["pass"].get<bool>());
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["suite"], "two-point");
}

TEST(Cli, VerifyCsv) {
  const auto r = run("verify --suite martin,three-point --format csv --max-degree 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("suite,pass,instances,violations\n", 0), 0u);
  EXPECT_NE(r.out.find("martin,true,"), std::string::npos);
}

TEST(Cli, CorruptedCacheExitsThree) {
  TempPath cache("abelianizer-cli-bad-cache.txt");
  {
    std::ofstream os(cache.str());
    os << "abelian-gw-cache v999\n";
  }
  EXPECT_EQ(run("verify --suite three-point --max-degree 1 --cache \"" + cache.str() + "\"").code, 3);
}

TEST(Cli, EnvironmentOverridesCacheFlag) {
  TempPath from_env("abelianizer-cli-env-cache.txt");
  TempPath from_flag("abelianizer-cli-flag-cache.txt");
  const auto r = run("verify --suite three-point --max-degree 1 --cache \"" + from_flag.str() + "\"",
                     "ABELIANIZER_CACHE=\"" + from_env.str() + "\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(from_env.exists());
  EXPECT_FALSE(from_flag.exists());
}

TEST(Cli, CacheWarmThenInfo) {
  TempPath cache("abelianizer-cli-warm-cache.txt");
  const std::string flag = " --cache \"" + cache.str() + "\"";
  EXPECT_EQ(run("cache warm --suite four-point-divisor --max-degree 1" + flag).code, 0);
  ASSERT_TRUE(cache.exists());
  EXPECT_EQ(slurp(cache.str()).rfind("abelian-gw-cache v1\n", 0), 0u);
  const auto info = run("cache info" + flag);
  EXPECT_EQ(info.code, 0);
  EXPECT_GT(nlohmann::json::parse(info.out)["entries"].get<std::size_t>(), 0u);
  EXPECT_EQ(run("cache clear" + flag).code, 0);
  EXPECT_FALSE(cache.exists());
}

TEST(Cli, TableCsvHeader) {
  const auto r = run("table --k 2 --n 4 --points 3 --max-degree 1 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("degree,insertions,value\n", 0), 0u);
  EXPECT_NE(r.out.find("1,\"[1];[2,1];[2,2]\",1\n"), std::string::npos);
}

TEST(Cli, TableMarkdownIsByteIdentical) {
  TempPath a("abelianizer-cli-table-a.md"), b("abelianizer-cli-table-b.md");
  const std::string args = "table --space abelian --k 2 --n 2 --points 3 --max-degree 2 --format markdown -o ";
  ASSERT_EQ(run(args + "\"" + a.str() + "\"").code, 0);
  ASSERT_EQ(run(args + "\"" + b.str() + "\"").code, 0);
  const std::string ta = slurp(a.str());
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, slurp(b.str()));
}

TEST(Cli, TableEmptyBoundsIsHeaderOnly) {
  const auto r = run("table --k 2 --n 4 --points 1 --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "degree,insertions,value\n");
}

TEST(Cli, HelpAndBadArguments) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("invariant").code, 2);
  EXPECT_EQ(run("verify --k 0").code, 2);
}

TEST(Cli, VerifyAllOnTwoFive) {
  const auto r = run("verify --suite all --k 2 --n 5 --max-degree 2 --jobs 4");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["suites"].size(), 12u);
}
