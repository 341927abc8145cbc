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

#include <iostream>
#include <limits>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slsmig/config.hpp"
#include "slsmig/pipeline.hpp"
#include "slsmig/sam_model.hpp"
#include "slsmig/workspace.hpp"

namespace {

using namespace slsmig;

struct Globals {
  std::string project = ".";
  std::string out = "out";
  std::string config_path;
  std::string format = "text";
  std::vector<std::string> auth_paths;
  std::vector<std::string> auth_decorators;
  std::optional<int> max_depth;
  std::optional<int> layer_threshold;
  std::optional<int> timeout;
  std::optional<int> memory;
};

Config resolve_config(const Globals& g) {
  Config c = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (!g.auth_paths.empty()) c.planner.auth_paths = g.auth_paths;
  if (!g.auth_decorators.empty()) {
    c.planner.auth_decorators = {g.auth_decorators.begin(), g.auth_decorators.end()};
    c.framework.auth_markers = {g.auth_decorators.begin(), g.auth_decorators.end()};
  }
  if (g.max_depth) {
    if (*g.max_depth < 1) throw Error(ErrorCode::kInvalidArgument, "--max-depth must be >= 1");
    c.planner.max_depth = *g.max_depth;
  }
  if (g.layer_threshold) c.planner.shared_layer_threshold = *g.layer_threshold;
  if (g.timeout) c.function_timeout = *g.timeout;
  if (g.memory) c.function_memory = *g.memory;
  return c;
}

void emit(const Globals& g, const Json& j, const std::string& text) {
  if (g.format == "json") {
    std::cout << canonical_json(j);
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
}

int validation_exit(const validator::ValidationReport& r) { return r.findings.empty() ? 0 : 1; }

std::string read_stdin() {
  return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slsmig: monolith-to-serverless migration toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--project", g.project, "monolith source tree (never modified)");
  app.add_option("--out", g.out, "artifact directory");
  app.add_option("--config", g.config_path, "JSON configuration file; flags take precedence")->check(CLI::ExistingFile);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--auth-path", g.auth_paths, "auth endpoint path (repeatable)");
  app.add_option("--auth-decorator", g.auth_decorators, "auth decorator or middleware name (repeatable)");
  app.add_option("--max-depth", g.max_depth, "deep call-trace depth");
  app.add_option("--layer-threshold", g.layer_threshold, "functions sharing a file before it moves to the layer");
  app.add_option("--timeout", g.timeout, "Lambda timeout in seconds");
  app.add_option("--memory", g.memory, "Lambda memory in MB");

  auto* analyze = app.add_subcommand("analyze", "extract entry points, tags, call graph and schema candidates");
  auto* plan = app.add_subcommand("plan", "derive blueprint.json from analysis_report.json");
  auto* synthesize = app.add_subcommand("synthesize", "write template.yaml, handler stubs and the shared layer");
  auto* validate = app.add_subcommand("validate", "run the eleven cross-artifact checks");
  bool fix = false;
  validate->add_flag("--fix", fix, "apply one batch of mechanical fixes and re-validate");
  auto* all = app.add_subcommand("all", "analyze, plan, synthesize and validate");
  all->add_flag("--fix", fix, "apply one batch of mechanical fixes and re-validate");

  auto* score = app.add_subcommand("score", "API-coverage F1 and end-to-end pass rate");
  pipeline::ScoreInputs si;
  std::string gen, ref, results;
  score->add_option("--app", si.app, "application name for per-app rows");
  score->add_option("--generated", gen, "generated endpoint list (default: template.yaml)")->check(CLI::ExistingFile);
  score->add_option("--reference", ref, "reference endpoint list (default: analysis_report.json)")
      ->check(CLI::ExistingFile);
  score->add_option("--results", results, "test results JSON")->check(CLI::ExistingFile);
  bool pass_rate_only = false;
  score->add_flag("--pass-rate-only", pass_rate_only, "skip API coverage");

  auto* lint = app.add_subcommand("lint", "lint a SAM template");
  std::string lint_path;
  lint->add_option("template", lint_path, "template path (default: <out>/template.yaml)");

  auto* tool = app.add_subcommand("tool", "file tools");
  tool->require_subcommand(1);
  auto* t_read = tool->add_subcommand("read", "read a file, optionally a line range");
  std::string t_path;
  std::optional<int> t_start, t_end;
  t_read->add_option("path", t_path)->required();
  t_read->add_option("--start", t_start, "first line (1-based)");
  t_read->add_option("--end", t_end, "last line (inclusive)");
  auto* t_write = tool->add_subcommand("write", "write a file after syntax validation");
  std::string t_validate = "none", t_content, t_from;
  bool have_content = false;
  t_write->add_option("path", t_path)->required();
  t_write->add_option("--validate", t_validate)->check(CLI::IsMember({"none", "python", "json", "yaml"}));
  t_write->add_option("--content", t_content, "content (default: stdin)")->each([&](const std::string&) {
    have_content = true;
  });
  t_write->add_option("--from-file", t_from, "read content from a file")->check(CLI::ExistingFile);
  auto* t_merge = tool->add_subcommand("merge", "set one top-level key of a JSON file");
  std::string t_key, t_value;
  t_merge->add_option("path", t_path)->required();
  t_merge->add_option("key", t_key)->required();
  t_merge->add_option("value", t_value, "JSON value")->required();
  auto* t_list = tool->add_subcommand("list", "list a directory");
  bool t_recursive = false;
  t_list->add_option("path", t_path)->required();
  t_list->add_flag("-r,--recursive", t_recursive);

  CLI11_PARSE(app, argc, argv);

  try {
    Config config = resolve_config(g);
    const fs::path out = g.out;
    if (*analyze) {
      auto a = pipeline::run_analyze(g.project, out, config);
      emit(g, {{"entry_points", a.report.entry_points.size()}, {"diagnostics", a.report.diagnostics.size()}},
           "analyzed " + std::to_string(a.report.entry_points.size()) + " entry points; wrote " +
               (out / pipeline::kReportFile).string() + " and " + (out / pipeline::kSymbolFile).string());
      return 0;
    }
    if (*plan) {
      auto b = pipeline::run_plan(out, config);
      emit(g, {{"lambda_functions", b.lambda_functions.size()}, {"dropped", b.dropped_functions.size()}},
           "planned " + std::to_string(b.lambda_functions.size()) + " functions (" +
               std::to_string(b.dropped_functions.size()) + " endpoints dropped); wrote " +
               (out / pipeline::kBlueprintFile).string());
      return 0;
    }
    if (*synthesize) {
      pipeline::run_synthesize(out, config);
      emit(g, {{"template", (out / pipeline::kTemplateFile).string()}},
           "wrote " + (out / pipeline::kTemplateFile).string() + " and handler stubs");
      return 0;
    }
    if (*validate || *all) {
      auto r = *all ? pipeline::run_all(g.project, out, config, fix) : pipeline::run_validate(out, fix);
      emit(g, validator::to_json(r), validator::summary_text(r));
      return validation_exit(r);
    }
    if (*score) {
      if (!gen.empty()) si.generated = gen;
      if (!ref.empty()) si.reference = ref;
      if (!results.empty()) si.results = results;
      si.coverage = !pass_rate_only;
      auto card = pipeline::run_score(out, si, config);
      for (const auto& w : card.warnings) std::cerr << "warning: " << w << "\n";
      emit(g, metrics::to_json(card), metrics::to_text(card));
      return card.warnings.empty() ? 0 : 1;
    }
    if (*lint) {
      fs::path p = lint_path.empty() ? out / pipeline::kTemplateFile : fs::path(lint_path);
      std::vector<sam::Finding> findings;
      try {
        findings = sam::lint_template(sam::load_template(p));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kParse) throw;
        sam::Finding f;
        f.check_id = "P0";
        f.severity = sam::Severity::kFatal;
        f.artifact = p.string();
        f.message = e.what();
        findings.push_back(f);
      }
      Json list = Json::array();
      std::string text;
      for (const auto& f : findings) {
        list.push_back(sam::to_json(f));
        text += "[" + f.check_id + " " + sam::severity_name(f.severity) + "] " + f.pointer + ": " + f.message + "\n";
      }
      if (findings.empty()) text = "no findings\n";
      emit(g, {{"findings", list}}, text);
      return sam::exit_code_for(findings);
    }
    if (*tool) {
      if (*t_read) {
        std::optional<std::pair<int, int>> range;
        if (t_start || t_end) range = std::make_pair(t_start.value_or(1), t_end.value_or(t_start.value_or(1)));
        if (t_start && !t_end) range->second = std::numeric_limits<int>::max();
        auto r = ws::read_file(t_path, range);
        if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
        emit(g, ws::to_json(r), r.content);
        return 0;
      }
      if (*t_write) {
        std::string content = !t_from.empty() ? read_text_file(t_from) : have_content ? t_content : read_stdin();
        auto r = ws::write_file(t_path, content, ws::validation_from_name(t_validate));
        emit(g, ws::to_json(r),
             r.ok ? "wrote " + std::to_string(r.bytes_written) + " bytes to " + r.path
                  : "rejected: " + r.error + (r.error_line > 0 ? " (line " + std::to_string(r.error_line) + ")" : ""));
        return r.ok ? 0 : 1;
      }
      if (*t_merge) {
        Json value;
        try {
          value = Json::parse(t_value);
        } catch (const Json::parse_error&) {
          value = t_value;
        }
        auto r = ws::merge_json_key(t_path, t_key, value);
        emit(g, ws::to_json(r), r.ok ? "merged key " + t_key + " into " + r.path : "rejected: " + r.error);
        return r.ok ? 0 : 1;
      }
      if (*t_list) {
        auto entries = ws::list_dir(t_path, t_recursive);
        std::string text;
        for (const auto& e : entries) text += (e.kind == ws::EntryKind::kDirectory ? e.path + "/" : e.path) + "\n";
        emit(g, ws::to_json(entries), text);
        return 0;
      }
    }
  } catch (const Error& e) {
    std::cerr << "slsmig: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "slsmig: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
