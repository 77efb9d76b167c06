#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "fixtures.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run_cli(const std::string& args) {
  const std::string cmd = std::string(HYPGAME_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return (fixtures::dir() / name).string(); }

fs::path write_spec(const fs::path& dir) {
  std::ifstream in(fixtures::dir() / "experiment_mito10.json");
  auto doc = nlohmann::json::parse(in);
  for (auto& [key, value] : doc.at("inputs").items()) value = fixture(value.get<std::string>());
  doc["output_dir"] = (dir / "results").string();
  doc["seeds"] = {1, 2};
  const auto path = dir / "spec.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("bogus").code, 2);
  EXPECT_EQ(run_cli("corrupt --bank " + fixture("bank.jsonl")).code, 2);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(Cli, CorruptIsDeterministic) {
  const std::string args = "corrupt --bank " + fixture("bank.jsonl") + " --pathway " + fixture("mito13.json") +
                           " --lexicon " + fixture("lexicon.jsonl") + " --fraction 0.3 --seed 4";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc.at("plan").at("applied").size(), 4u);
}

TEST(Cli, CorruptRejectsExcessiveFractionAndShortBank) {
  const std::string base = "corrupt --bank " + fixture("bank.jsonl") + " --pathway " + fixture("mito10.json");
  EXPECT_EQ(run_cli(base + " --fraction 0.9").code, 2);
  EXPECT_EQ(run_cli(base + " --fraction 0.4 --error-type wrong_relation").code, 2);
}

TEST(Cli, EvalReportsMetrics) {
  fixtures::TempDir tmp("cli-eval");
  const auto plan = tmp.path() / "plan.json";
  ASSERT_EQ(run_cli("corrupt --bank " + fixture("bank.jsonl") + " --pathway " + fixture("mito13.json") +
                    " --fraction 0.3 --seed 4 --out " + plan.string())
                .code,
            0);
  const auto r = run_cli("eval --task corruption --ref " + fixture("mito13.json") + " --gen " + fixture("mito13.json") +
                         " --plan " + plan.string() + " --lexicon " + fixture("lexicon.jsonl"));
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc.at("metrics").at("f1").get<double>(), 1.0);
  EXPECT_EQ(doc.at("metrics").at("error_removal_rate").get<double>(), 1.0);
}

TEST(Cli, RunThenReport) {
  fixtures::TempDir tmp("cli-run");
  const auto spec = write_spec(tmp.path());
  const auto first = run_cli("run --spec " + spec.string() + " --concurrency 2");
  ASSERT_EQ(first.code, 0);
  EXPECT_NE(first.out.find("completed 2, skipped 0, failed 0"), std::string::npos);
  const auto again = run_cli("run --spec " + spec.string());
  EXPECT_NE(again.out.find("completed 0, skipped 2"), std::string::npos);

  const auto out = tmp.path() / "report";
  ASSERT_EQ(run_cli("report --results " + (tmp.path() / "results").string() + " --out " + out.string() +
                    " --resamples 200")
                .code,
            0);
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_TRUE(fs::exists(out / "aggregates.csv"));
}
