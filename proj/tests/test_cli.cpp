#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fusionrig/cli.hpp"

using namespace fusionrig;

namespace {

struct Outcome {
  int code;
  std::string out;
};

std::string data(const std::string& name) { return std::string(FUSIONRIG_DATA_DIR) + "/" + name; }

// Runs the installed binary through the shell, capturing stdout only.
Outcome shell(const std::string& args) {
  const std::string cmd = std::string(FUSIONRIG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome inprocess(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> argv{"fusionrig"};
  argv.insert(argv.end(), args.begin(), args.end());
  const int code = cli::run(argv, out, err);
  return {code, out.str() + err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fusionrig_test_" + name);
}

}  // namespace

TEST(CliValidate, ValidRulesExitZero) {
  const Outcome r = shell("validate " + data("fib.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("valid"), std::string::npos);
  EXPECT_EQ(shell("validate " + data("ising.json")).code, 0);
  EXPECT_EQ(shell("validate " + data("z2.json")).code, 0);
  EXPECT_EQ(shell("validate " + data("trivial.json")).code, 0);
}

TEST(CliValidate, BrokenRulesNameLawAndIndices) {
  const Outcome r = shell("validate " + data("ising_broken.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("commutativity at (1,2,1)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("associativity at"), std::string::npos);
}

TEST(CliValidate, JsonListsViolations) {
  const Outcome r = shell("validate " + data("ising_broken.json") + " --format json");
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["ok"].get<bool>());
  EXPECT_FALSE(j["violations"].empty());
}

TEST(CliSolve, ClosedFormPrintsGoldenRatio) {
  const Outcome r = shell("solve --rules " + data("fib.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("q = 0.61803398875"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("6/6 passed"), std::string::npos);
}

TEST(CliSolve, ClosedFormRejectsOtherRules) {
  EXPECT_EQ(shell("solve --rules " + data("ising.json")).code, 2);
}

TEST(CliSolve, WrittenModelPassesCheck) {
  const auto path = temp_file("solved.json");
  ASSERT_EQ(shell("solve --rules " + data("fib.json") + " --out " + path.string()).code, 0);
  const Outcome r = shell("check --model " + path.string() + " --samples 5");
  EXPECT_EQ(r.code, 0) << r.out;
  std::filesystem::remove(path);
}

TEST(CliSolve, NumericZ2Converges) {
  const Outcome r = shell("solve --rules " + data("z2.json") + " --method numeric --format json");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["success"].get<bool>());
}

TEST(CliCheck, SolutionPassesEverything) {
  const Outcome r = shell("check --model " + data("fib_model.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("20/20 passed"), std::string::npos);
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
}

TEST(CliCheck, JsonIsByteIdenticalAcrossRuns) {
  const std::string args = "check --model " + data("fib_model.json") + " --samples 5 --seed 3 --format json";
  const Outcome a = shell(args), b = shell(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const nlohmann::json j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["coherence"]["passed"], 20);
}

TEST(CliCheck, OutputFileMatchesStdoutJson) {
  const auto path = temp_file("report.json");
  const Outcome r = shell("check --model " + data("fib_model.json") + " --samples 2 --format json --output " + path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(ss.str()), nlohmann::json::parse(r.out));
  std::filesystem::remove(path);
}

TEST(CliCounterexample, BothChoices) {
  const Outcome id = shell("counterexample");
  EXPECT_EQ(id.code, 0);
  EXPECT_NE(id.out.find("2 of 3 forms disagree"), std::string::npos) << id.out;
  const Outcome sw = shell("counterexample --choice switch");
  EXPECT_EQ(sw.code, 0);
  EXPECT_NE(sw.out.find("3 of 3 forms disagree"), std::string::npos) << sw.out;
}

TEST(CliInfo, DescribesModel) {
  const Outcome r = shell("info --model " + data("fib_model.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("alpha(1,1,1)"), std::string::npos);
  EXPECT_NE(r.out.find("x1 x x1: (1,1)"), std::string::npos);
}

TEST(CliErrors, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(shell("validate /nonexistent/rules.json").code, 2);
  EXPECT_EQ(shell("check --bogus").code, 2);
  EXPECT_EQ(shell("").code, 2);
  EXPECT_EQ(shell("solve --rules " + data("fib.json") + " --method magic").code, 2);
  EXPECT_EQ(shell("check --model " + data("fib.json")).code, 2);
  EXPECT_EQ(shell("--help").code, 0);
}

TEST(CliInProcess, MatchesBinary) {
  const Outcome a = inprocess({"counterexample", "--format", "json"});
  const Outcome b = shell("counterexample --format json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(inprocess({"validate", data("ising_broken.json")}).code, 1);
  EXPECT_EQ(inprocess({"info"}).code, 2);
}
