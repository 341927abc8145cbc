// Copyright 2026 The slsmig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "slsmig/pipeline.hpp"
#include "support.hpp"

namespace slsmig::pipeline {
namespace {

using slsmig::testing::fixture;
using slsmig::testing::run_cli;
using slsmig::testing::TempDir;

std::vector<std::string> with_dirs(const fs::path& project, const fs::path& out, std::vector<std::string> rest) {
  std::vector<std::string> args = {"--project", project.string(), "--out", out.string()};
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

TEST(Stages, PlanWithoutAnalysisIsPrecondition) {
  TempDir out;
  try {
    run_plan(out.path(), Config{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
    EXPECT_NE(std::string(e.what()).find("analyze"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_synthesize(out.path(), Config{}), Error);
  EXPECT_THROW(run_validate(out.path(), false), Error);
}

TEST(Stages, StepwiseEqualsAll) {
  TempDir a;
  TempDir b;
  Config config;
  run_analyze(fixture("bookstore_flask"), a.path(), config);
  run_plan(a.path(), config);
  run_synthesize(a.path(), config);
  auto stepwise = run_validate(a.path(), false);
  auto whole = run_all(fixture("bookstore_flask"), b.path(), config, false);
  EXPECT_EQ(stepwise.pass, whole.pass);
  EXPECT_EQ(slsmig::testing::snapshot_tree(a.path()), slsmig::testing::snapshot_tree(b.path()));
  for (const char* artifact : {kReportFile, kSymbolFile, kBlueprintFile, kTemplateFile, kValidationFile}) {
    EXPECT_TRUE(fs::exists(a / artifact)) << artifact;
  }
}

TEST(Stages, ScoreDefaultsToOwnArtifacts) {
  TempDir out;
  run_all(fixture("todo_flask"), out.path(), Config{}, false);
  auto card = run_score(out.path(), ScoreInputs{}, Config{});
  ASSERT_TRUE(card.coverage.has_value());
  // Auth routes are dropped from both sides, so every business route is covered.
  EXPECT_DOUBLE_EQ(card.coverage->micro.f1, 1.0);
  EXPECT_EQ(card.anti_patterns, 0u);
  EXPECT_FALSE(card.pass_rate.has_value());
  EXPECT_TRUE(fs::exists(out / kScoreFile));
}

TEST(Cli, ExitCodes) {
  TempDir out;
  const fs::path project = fixture("todo_flask");
  EXPECT_EQ(run_cli(with_dirs(project, out / "o", {"plan"})), 2);
  EXPECT_EQ(run_cli(with_dirs(project, out / "o", {"all"})), 0);
  EXPECT_EQ(run_cli(with_dirs(project, out / "o", {"validate"})), 0);
  // Break one function's route so validation reports a fatal finding.
  fs::path tmpl = out / "o/template.yaml";
  std::string text = read_text_file(tmpl);
  auto pos = text.find("Path: /todos");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 12, "Path: /nope");
  write_text_atomic(tmpl, text);
  EXPECT_EQ(run_cli(with_dirs(project, out / "o", {"validate"})), 1);
  Json report = Json::parse(read_text_file(out / "o/validation_report.json"));
  EXPECT_EQ(report["status"], "fail");
  EXPECT_EQ(run_cli({"--project", (out / "missing").string(), "--out", (out / "p").string(), "analyze"}), 2);
}

TEST(Cli, LintSeverityDrivesExitCode) {
  TempDir dir;
  write_text_atomic(dir / "broken.yaml", "Resources: [\n");
  EXPECT_NE(run_cli({"lint", (dir / "broken.yaml").string()}), 0);
  TempDir out;
  ASSERT_EQ(run_cli(with_dirs(fixture("todo_flask"), out.path(), {"all"})), 0);
  EXPECT_EQ(run_cli({"lint", (out / "template.yaml").string()}), 0);
}

TEST(Cli, FileTools) {
  TempDir dir;
  const fs::path log = dir / "log.txt";
  EXPECT_EQ(run_cli({"tool", "write", (dir / "a.json").string(), "--validate", "json", "--content", "{\"x\": 1}"}), 0);
  EXPECT_NE(run_cli({"tool", "write", (dir / "a.json").string(), "--validate", "json", "--content", "{oops"}), 0);
  EXPECT_EQ(Json::parse(read_text_file(dir / "a.json"))["x"], 1);
  EXPECT_EQ(run_cli({"tool", "merge", (dir / "a.json").string(), "y", "[1, 2]"}), 0);
  Json merged = Json::parse(read_text_file(dir / "a.json"));
  EXPECT_EQ(merged["x"], 1);
  EXPECT_EQ(merged["y"], Json::array({1, 2}));
  EXPECT_EQ(run_cli({"tool", "read", (dir / "a.json").string(), "--start", "1", "--end", "3"}, log), 0);
  EXPECT_NE(read_text_file(log).find("\"x\""), std::string::npos);
  EXPECT_EQ(run_cli({"--format", "json", "tool", "read", (dir / "a.json").string()}, log), 0);
  EXPECT_FALSE(Json::parse(read_text_file(log))["truncated"].get<bool>());
  EXPECT_EQ(run_cli({"tool", "list", dir.path().string()}, log), 0);
  EXPECT_NE(read_text_file(log).find("a.json"), std::string::npos);
  EXPECT_NE(run_cli({"tool", "read", (dir / "absent.txt").string()}), 0);
}

TEST(Cli, ScoreWithResultsFile) {
  TempDir out;
  ASSERT_EQ(run_cli(with_dirs(fixture("shop_express"), out.path(), {"all"})), 0);
  write_text_atomic(out / "results.json",
                    R"([{"app": "shop", "category": "core", "total": 8, "passed": 6},)"
                    R"( {"app": "shop", "category": "auth", "total": 2, "passed": 0}])");
  EXPECT_EQ(run_cli(with_dirs(fixture("shop_express"), out.path(),
                              {"score", "--app", "shop", "--results", (out / "results.json").string()})),
            0);
  Json card = Json::parse(read_text_file(out / kScoreFile));
  EXPECT_DOUBLE_EQ(card["e2epr"]["micro"].get<double>(), 0.75);
}

TEST(Cli, ProjectTreeIsNeverModified) {
  for (const auto& name : slsmig::testing::fixture_names()) {
    auto before = slsmig::testing::tree_hash(fixture(name));
    TempDir out;
    run_cli(with_dirs(fixture(name), out.path(), {"all", "--fix"}));
    EXPECT_EQ(slsmig::testing::tree_hash(fixture(name)), before) << name;
  }
}

}  // namespace
}  // namespace slsmig::pipeline
