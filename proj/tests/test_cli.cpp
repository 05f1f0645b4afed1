#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "reference.hpp"
#include "support.hpp"
#include "somit/cli.hpp"
#include "somit/elicitation.hpp"
#include "somit/io.hpp"

using namespace somit;
namespace st = somit::testing;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("SOMIT_OUTPUT_DIR");
    std::mt19937_64 rng(std::random_device{}());
    dir_ = fs::temp_directory_path() / ("somit-cli-" + std::to_string(rng()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv("SOMIT_OUTPUT_DIR");
    fs::remove_all(dir_);
  }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    io::write_file(dir_ / name, text);
    return tmp(name);
  }
  static std::string data(const std::string& name) { return st::data_path(name).string(); }

  fs::path dir_;
};

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_F(CliTest, ScriptedElicitationReproducesGroupSession) {
  const auto answers = write("answers.txt", "3; 4; 3; 1/2; 2\n");
  const auto r = run({"elicit", "--items", "Financial,Technical,Environmental,Social", "--answers", answers, "--out",
                      tmp("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = io::load_session(tmp("s.json"));
  EXPECT_EQ(io::session_to_json(s), io::session_to_json(st::india_group_session()));
  EXPECT_NE(r.out.find("Highest: Financial (4); Lowest: Social (1/2)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("w^s_1 = 0.3900"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("z = 0.017595"), std::string::npos) << r.out;
}

TEST_F(CliTest, PromptOrderIsMedianRelativeExtreme) {
  const auto answers = write("a.txt", "3\n4\n3\n1/2\n2\n");
  const auto r = run({"elicit", "--count", "4", "--answers", answers, "--out", tmp("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto median = r.out.find("median level of importance");
  const auto first = r.out.find("Compare Criterion #1 with #3");
  const auto last = r.out.find("Compare Criterion #4 with #3");
  const auto extreme = r.out.find("Compare Criterion #1 with #4");
  ASSERT_NE(extreme, std::string::npos) << r.out;
  EXPECT_LT(median, first);
  EXPECT_LT(first, last);
  EXPECT_LT(last, r.out.find("Highest:"));
  EXPECT_LT(r.out.find("Highest:"), extreme);
  EXPECT_EQ(count(r.out, "Compare "), 4u);  // n prompts after the median pick
}

TEST_F(CliTest, ScriptedSaudiSession) {
  const auto answers = write("a.txt", "3; 3; 2; 1; 1/4; 1/2; 1; 3; 3");
  const auto r = run({"elicit", "--count", "8", "--answers", answers, "--out", tmp("s.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::session_to_json(io::load_session(tmp("s.json"))),
            io::session_to_json(io::load_session(st::data_path("saudi_session.json"))));
  EXPECT_EQ(count(r.out, "Compare "), st::ref::saudi::kQuestions);
}

TEST_F(CliTest, ReplayIsByteIdentical) {
  const auto answers = write("a.txt", "2; 5; 1/3; 2; 1/2; 7");
  ASSERT_EQ(run({"elicit", "--count", "5", "--answers", answers, "--out", tmp("a.json")}).code, 0);
  ASSERT_EQ(run({"elicit", "--count", "5", "--answers", answers, "--out", tmp("b.json")}).code, 0);
  EXPECT_EQ(io::read_file(tmp("a.json")), io::read_file(tmp("b.json")));
}

TEST_F(CliTest, InteractiveBadTokenReprompts) {
  const auto r = run({"elicit", "--count", "3", "--out", tmp("s.json")}, "2\n10\n3\n1/2\n4\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1/9 to 9"), std::string::npos) << r.out;
  EXPECT_EQ(count(r.out, "Compare Criterion #1 with #2"), 2u);
  EXPECT_DOUBLE_EQ(io::load_session(tmp("s.json")).comparisons.at("C1").value, 3.0);
}

TEST_F(CliTest, ScriptedBadTokenFails) {
  const auto answers = write("a.txt", "2; 10; 3; 4");
  const auto r = run({"elicit", "--count", "3", "--answers", answers, "--out", tmp("s.json")});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_EQ(r.err.rfind("error[validation]: ", 0), 0u) << r.err;
  EXPECT_EQ(count(r.err, "\n"), 1u);
  EXPECT_FALSE(fs::exists(tmp("s.json")));
}

TEST_F(CliTest, ShortScriptFails) {
  const auto answers = write("a.txt", "2; 3");
  EXPECT_EQ(run({"elicit", "--count", "3", "--answers", answers, "--out", tmp("s.json")}).code, cli::kValidation);
}

TEST_F(CliTest, ElicitJsonGoesToStdout) {
  const auto answers = write("a.txt", "1; 2");
  const auto r = run({"--json", "elicit", "--count", "2", "--answers", answers});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["median"], "C1");
}

TEST_F(CliTest, WeightsTableForIndia) {
  const auto r = run({"weights", "--problem", data("india.json"), "--hierarchy", data("india_hierarchy.json"),
                      "--out", tmp("w.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("C1             0.1613      0.0830      0.1335"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("C10            0.0850      0.0884      0.0750"), std::string::npos) << r.out;
  const auto w = io::load_weights(tmp("w.json"));
  EXPECT_EQ(w.provenance(), Provenance::Final);
  EXPECT_LE(st::max_abs_diff(w.weights(), st::ref::india::kFinal), 5e-4);
}

TEST_F(CliTest, WeightsTableForSaudi) {
  const auto r = run({"weights", "--problem", data("saudi.csv"), "--session", data("saudi_session.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("C8             0.2448      0.1640      0.3120"), std::string::npos) << r.out;
}

TEST_F(CliTest, ObjectiveModeNeedsNoSession) {
  const auto r = run({"weights", "--problem", data("india.json"), "--mode", "objective"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("subjective"), std::string::npos);
  EXPECT_NE(r.out.find("objective"), std::string::npos);
}

TEST_F(CliTest, CombinedModeWithoutSessionIsUsageError) {
  const auto r = run({"weights", "--problem", data("india.json")});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_EQ(r.err.rfind("error[usage]: ", 0), 0u) << r.err;
}

TEST_F(CliTest, OutputDirFromEnvironment) {
  setenv("SOMIT_OUTPUT_DIR", dir_.c_str(), 1);
  ASSERT_EQ(run({"weights", "--problem", data("india.json"), "--mode", "objective"}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "weights.json"));
}

TEST_F(CliTest, RankIndia) {
  ASSERT_EQ(run({"weights", "--problem", data("india.json"), "--hierarchy", data("india_hierarchy.json"), "--out",
                 tmp("w.json")})
                .code,
            0);
  const auto r = run({"rank", "--problem", data("india.json"), "--weights", tmp("w.json"), "--round4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1     Solar          0.5725"), std::string::npos) << r.out;
  EXPECT_LT(r.out.find("Solar"), r.out.find("Biomass"));
  EXPECT_LT(r.out.find("Biomass"), r.out.find("Wind"));
  EXPECT_LT(r.out.find("Wind"), r.out.find("Hydro"));
}

TEST_F(CliTest, RankSaudi) {
  ASSERT_EQ(run({"weights", "--problem", data("saudi.csv"), "--session", data("saudi_session.json"), "--out",
                 tmp("w.json")})
                .code,
            0);
  const auto r = run({"--json", "rank", "--problem", data("saudi.csv"), "--weights", tmp("w.json"), "--round4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["order"][0], "Solar PV");
  EXPECT_NEAR(j["scores"]["Solar PV"].get<double>(), 0.7562, 5e-5);
}

TEST_F(CliTest, RankWithMismatchedLabels) {
  const auto w = write("w.json", R"({"labels": ["C1", "C2"], "weights": [0.5, 0.5], "provenance": "final"})");
  const auto r = run({"rank", "--problem", data("india.json"), "--weights", w});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_NE(r.err.find("missing"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("C3"), std::string::npos) << r.err;
}

TEST_F(CliTest, SensitivityRescale) {
  const auto r = run({"sensitivity", "--problem", data("india.json"), "--scenario", data("rescale_scenario.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("somit-ii          1.91"), std::string::npos) << r.out;
}

TEST_F(CliTest, SensitivityEmptyScenario) {
  const auto s = write("empty.json", R"({"edits": []})");
  const auto r = run({"--json", "sensitivity", "--problem", data("india.json"), "--scenario", s});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& m : Json::parse(r.out)["methods"]) {
    EXPECT_EQ(m["aafd"].get<double>(), 0.0);
    EXPECT_EQ(m["max_abs_change"].get<double>(), 0.0);
  }
}

TEST_F(CliTest, Baselines) {
  auto r = run({"baseline-ahp", "--ahp", data("india_ahp.json"), "--problem", data("india.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("C1             0.1749"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("CR 0.1137"), std::string::npos) << r.out;
  r = run({"baseline-critic", "--problem", data("india.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("C4             0.1608"), std::string::npos) << r.out;
}

TEST_F(CliTest, RunManifestWritesArtifact) {
  const auto r = run({"run", data("india_manifest.json"), "--out", tmp("run.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto first = io::read_file(tmp("run.json"));
  ASSERT_EQ(run({"run", data("india_manifest.json"), "--out", tmp("run.json")}).code, 0);
  EXPECT_EQ(io::read_file(tmp("run.json")), first);
  EXPECT_EQ(Json::parse(first)["schema"], "somit-run/1");
}

TEST_F(CliTest, ExitCodesFollowErrorKind) {
  auto r = run({"weights", "--problem", tmp("missing.json"), "--mode", "objective"});
  EXPECT_EQ(r.code, cli::kIo);
  EXPECT_EQ(r.err.rfind("error[io]: ", 0), 0u) << r.err;

  const auto bad = write("bad.csv", "alternative,C1\ndirection,max\nA,1\nB,oops\n");
  r = run({"weights", "--problem", bad, "--mode", "objective"});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_NE(r.err.find("bad.csv:4"), std::string::npos) << r.err;

  const auto flat = write("flat.csv", "alternative,C1,C2\ndirection,max,min\nA,1,2\nB,1,2\n");
  r = run({"weights", "--problem", flat, "--mode", "objective"});
  EXPECT_EQ(r.code, cli::kNumeric);
  EXPECT_EQ(r.err.rfind("error[numeric]: ", 0), 0u) << r.err;

  r = run({"frobnicate"});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_EQ(r.err.rfind("error[usage]: ", 0), 0u) << r.err;
}

TEST_F(CliTest, HelpAndVersion) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("baseline-critic"), std::string::npos);
  r = run({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, std::string(io::tool_version()) + "\n");
}
