#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "maslov/cli.hpp"

#ifndef MASLOV_CLI_PATH
#error "MASLOV_CLI_PATH must point at the built CLI"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "maslov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = maslov::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("maslov_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  /// Runs `maslov loop ...` and stores its output as a file.
  std::string loop_file(const std::string& name, std::vector<std::string> args) {
    args.insert(args.begin(), "loop");
    const Result r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return write(name, r.out);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, IndexOfGeneratedLoops) {
  EXPECT_EQ(trim(run({"index", loop_file("k1.json", {"--k", "1"})}).out), "1");
  EXPECT_EQ(trim(run({"index", loop_file("k-3.json", {"--k", "-3"})}).out), "-3");
  EXPECT_EQ(trim(run({"index", loop_file("c.json", {"--kind", "constant"})}).out), "0");
  EXPECT_EQ(trim(run({"index", loop_file("sp.json", {"--kind", "sp-graph"})}).out), "2");
  EXPECT_EQ(trim(run({"index", loop_file("ds.json", {"--kind", "direct-sum", "--fixed-n", "2"})}).out), "1");
}

TEST_F(Cli, IndexJson) {
  const Result r = run({"index", "--json", loop_file("k2.json", {"--k", "2"})});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["index"], 2);
  EXPECT_EQ(j["n"], 1);
}

TEST_F(Cli, Holonomy) {
  const std::string k1 = loop_file("k1.json", {"--k", "1"});
  EXPECT_EQ(trim(run({"holonomy", k1}).out), "i");
  EXPECT_EQ(trim(run({"holonomy", k1, "--branch", "-i"}).out), "-i");
  EXPECT_EQ(trim(run({"holonomy", loop_file("k4.json", {"--k", "4"})}).out), "1");
  EXPECT_EQ(trim(run({"holonomy", loop_file("k2.json", {"--k", "2"})}).out), "-1");
  EXPECT_EQ(trim(run({"holonomy", loop_file("sp.json", {"--kind", "sp-graph"})}).out), "-1");
  EXPECT_EQ(run({"holonomy", k1, "--branch", "x"}).code, 2);
}

TEST_F(Cli, HolonomyJsonListsJumps) {
  const Result r = run({"holonomy", "--json", loop_file("k1.json", {"--k", "1"})});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["display"], "i");
  EXPECT_FALSE(j["jumps"].empty());
}

TEST_F(Cli, GerbeByBothRoutes) {
  Result r = run({"gerbe"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], nlohmann::json::array({-1.0, 0.0}));
  EXPECT_EQ(j["theorem"]["equal"], true);
  EXPECT_EQ(j["chern_evaluation"], 1);

  r = run({"gerbe", "--degree", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["value"], nlohmann::json::array({1.0, 0.0}));

  r = run({"gerbe", "--degree", "3", "--branch", "-i"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["value"], nlohmann::json::array({-1.0, 0.0}));
}

TEST_F(Cli, VerifySingleCheck) {
  const Result r = run({"verify", "--only", "C4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS C4"), std::string::npos);
  EXPECT_EQ(r.out.find("C5"), std::string::npos);
}

TEST_F(Cli, VerifyIsDeterministic) {
  const std::regex runtime("runtime_s\": [-0-9.e+]+");
  const Result a = run({"verify", "--json", "--seed", "7", "--only", "C3"});
  const Result b = run({"verify", "--json", "--seed", "7", "--only", "C3"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(std::regex_replace(a.out, runtime, ""), std::regex_replace(b.out, runtime, ""));
}

TEST_F(Cli, InjectedFaultFailsVerify) {
  const Result r = run({"verify", "--only", "C5", "--inject-fault"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL C5"), std::string::npos);
}

TEST_F(Cli, MalformedInput) {
  EXPECT_EQ(run({"index", write("bad.json", "{not json")}).code, 2);
  EXPECT_EQ(run({"index", write("empty.json", "{\"field\": \"real\", \"n\": 1}")}).code, 2);
  EXPECT_EQ(run({"index", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gerbe", "--samples", "3"}).code, 2);
}

TEST_F(Cli, ComplexLoopIsRejected) {
  const std::string loop = write("complex.json", R"({"field": "complex", "n": 1, "closed": true,
    "samples": [[1, 0], [1, [0.1, 0.1]], [1, 0]]})");
  EXPECT_EQ(run({"index", loop}).code, 3);
  EXPECT_EQ(run({"holonomy", loop}).code, 3);
  const std::string imag = write("imag.json", R"({"field": "real", "n": 1, "samples": [[1, [0, 1]], [1, 0]]})");
  EXPECT_EQ(run({"index", imag}).code, 3);
}

TEST_F(Cli, Section) {
  const std::string pair = write("pair.json", R"({"field": "real", "n": 1, "L": [1, 2], "L0": [0, 1]})");
  Result r = run({"section", "--json", pair});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["vanishes"], false);
  EXPECT_EQ(j["intersection_dim"], 0);
  const std::string same = write("same.json", R"({"field": "real", "n": 1, "L": [0, 3], "L0": [0, 1]})");
  r = run({"section", "--json", same});
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["vanishes"], true);
  EXPECT_EQ(j["intersection_dim"], 1);
  const std::string bad = write("bad.json", R"({"field": "real", "n": 1, "L": [1, 2]})");
  EXPECT_EQ(run({"section", bad}).code, 2);
}

TEST_F(Cli, ChernAndGiraudOfAnExportedCover) {
  const Result c = run({"cover", "--samples", "180"});
  ASSERT_EQ(c.code, 0);
  const std::string file = write("cover.json", c.out);
  EXPECT_EQ(trim(run({"chern", file}).out), "1");
  EXPECT_EQ(trim(run({"giraud", file}).out), "-1");
  EXPECT_EQ(trim(run({"chern", file, "--degree", "-2"}).out), "-2");
  EXPECT_EQ(trim(run({"giraud", file, "--degree", "2"}).out), "1");
  EXPECT_EQ(trim(run({"chern"}).out), "1");
}

TEST_F(Cli, PerturbedCoverFailsTheCocycleCheck) {
  const Result c = run({"cover", "--samples", "90"});
  auto j = nlohmann::json::parse(c.out);
  const auto& ref = j["nerve"]["triples"][0]["samples"][0]["refs"][0];
  auto& v = j["transitions"]["values"][ref[0].get<std::size_t>()][ref[1].get<std::size_t>()];
  v[0] = v[0].get<double>() * 1.001;
  v[1] = v[1].get<double>() * 1.001;
  const Result r = run({"chern", "--json", write("perturbed.json", j.dump())});
  EXPECT_EQ(r.code, 5);
}

TEST_F(Cli, ExecutableExitCodes) {
  const std::string k1 = loop_file("k1.json", {"--k", "1"});
  const std::string bad = write("bad.json", "[");
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  const std::string exe = MASLOV_CLI_PATH;
  EXPECT_EQ(status(exe + " index " + k1), 0);
  EXPECT_EQ(status(exe + " index " + bad), 2);
  EXPECT_EQ(status(exe + " --help"), 0);
}
