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

#pragma once

#include <optional>
#include <string>

#include "slsmig/common.hpp"
#include "slsmig/config.hpp"
#include "slsmig/metrics.hpp"
#include "slsmig/source_facts.hpp"
#include "slsmig/validator.hpp"

// Stage orchestration over fixed artifact names under one output directory.
namespace slsmig::pipeline {

inline constexpr const char* kReportFile = "analysis_report.json";
inline constexpr const char* kSymbolFile = "symbol_table.json";
inline constexpr const char* kBlueprintFile = "blueprint.json";
inline constexpr const char* kTemplateFile = "template.yaml";
inline constexpr const char* kValidationFile = "validation_report.json";
inline constexpr const char* kScoreFile = "scorecard.json";

// Throws kPrecondition naming `stage` when `out/artifact` is missing.
void require_artifact(const fs::path& out, const std::string& artifact, const std::string& stage);

facts::Analysis run_analyze(const fs::path& project, const fs::path& out, const Config& config);
planner::Blueprint run_plan(const fs::path& out, const Config& config);
void run_synthesize(const fs::path& out, const Config& config);
// Writes validation_report.json; with `fix`, applies one mechanical batch.
validator::ValidationReport run_validate(const fs::path& out, bool fix);

struct ScoreInputs {
  std::string app = "app";
  std::optional<fs::path> generated;  // endpoint file; default <out>/template.yaml
  std::optional<fs::path> reference;  // endpoint file; default <out>/analysis_report.json
  std::optional<fs::path> results;    // test-result file; E2EPR skipped when absent
  bool coverage = true;
};

metrics::ScoreCard run_score(const fs::path& out, const ScoreInputs& inputs, const Config& config);

// analyze -> plan -> synthesize -> validate.
validator::ValidationReport run_all(const fs::path& project, const fs::path& out, const Config& config, bool fix);

}  // namespace slsmig::pipeline
