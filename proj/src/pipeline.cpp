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

#include "slsmig/pipeline.hpp"

#include "slsmig/synth.hpp"

namespace slsmig::pipeline {

void require_artifact(const fs::path& out, const std::string& artifact, const std::string& stage) {
  std::error_code ec;
  if (!fs::is_regular_file(out / artifact, ec)) {
    throw Error(ErrorCode::kPrecondition,
                (out / artifact).string() + " not found; run the '" + stage + "' stage first");
  }
}

namespace {

Json read_json(const fs::path& p) {
  try {
    return Json::parse(read_text_file(p));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, p.string() + ": " + e.what());
  }
}

}  // namespace

facts::Analysis run_analyze(const fs::path& project, const fs::path& out, const Config& config) {
  std::error_code ec;
  fs::path root = fs::weakly_canonical(fs::absolute(project), ec);
  if (ec) root = project;
  return facts::emit_analysis(root, out, config.framework);
}

planner::Blueprint run_plan(const fs::path& out, const Config& config) {
  require_artifact(out, kReportFile, "analyze");
  facts::AnalysisReport report = facts::report_from_json(read_json(out / kReportFile));
  planner::Blueprint b = planner::plan_blueprint(report, config.planner);
  write_text_atomic(out / kBlueprintFile, canonical_json(planner::to_json(b)));
  return b;
}

void run_synthesize(const fs::path& out, const Config& config) {
  require_artifact(out, kBlueprintFile, "plan");
  planner::Blueprint b = planner::blueprint_from_json(read_json(out / kBlueprintFile));
  synth::SynthOptions opts;
  opts.function_timeout = config.function_timeout;
  opts.function_memory = config.function_memory;
  synth::synthesize_workspace(b, out, opts);
}

validator::ValidationReport run_validate(const fs::path& out, bool fix) {
  require_artifact(out, kBlueprintFile, "plan");
  require_artifact(out, kTemplateFile, "synthesize");
  validator::ValidationReport r = validator::validate(out);
  if (fix && !r.pass) r = validator::apply_fixes(out, r);
  write_text_atomic(out / kValidationFile, canonical_json(validator::to_json(r)));
  return r;
}

metrics::ScoreCard run_score(const fs::path& out, const ScoreInputs& in, const Config& config) {
  metrics::ScoreCard card;
  const auto& auth_paths = config.planner.auth_paths;
  if (in.coverage) {
    metrics::EndpointSet g;
    if (in.generated) {
      g = metrics::endpoints_from_json(read_json(*in.generated), "generated");
    } else {
      require_artifact(out, kTemplateFile, "synthesize");
      g = metrics::endpoints_from_template(sam::load_template(out / kTemplateFile));
    }
    metrics::EndpointSet r;
    if (in.reference) {
      r = metrics::endpoints_from_json(read_json(*in.reference), "reference");
    } else {
      require_artifact(out, kReportFile, "analyze");
      r = metrics::endpoints_from_report(facts::report_from_json(read_json(out / kReportFile)), auth_paths);
    }
    card.coverage = metrics::api_f1({{in.app, g, r}});
    card.anti_patterns = metrics::anti_pattern_count(g, r, auth_paths);
  }
  if (in.results) {
    card.pass_rate = metrics::e2epr(metrics::results_from_json(read_json(*in.results)));
    for (const auto& app : card.pass_rate->excluded) {
      card.warnings.push_back("app " + app + " has no core/robustness tests; excluded from macro average");
    }
  }
  fs::create_directories(out);
  write_text_atomic(out / kScoreFile, canonical_json(metrics::to_json(card)));
  return card;
}

validator::ValidationReport run_all(const fs::path& project, const fs::path& out, const Config& config, bool fix) {
  run_analyze(project, out, config);
  run_plan(out, config);
  run_synthesize(out, config);
  return run_validate(out, fix);
}

}  // namespace slsmig::pipeline
