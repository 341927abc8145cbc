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
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slsmig/blueprint.hpp"
#include "slsmig/common.hpp"
#include "slsmig/sam_model.hpp"
#include "slsmig/source_facts.hpp"

// API-coverage and end-to-end pass-rate scoring.
namespace slsmig::metrics {

using Endpoint = std::pair<std::string, std::string>;  // (METHOD, normalized path)

// Unifies `{id}`, `:id` and `<conv:id>` into `{}`; drops a trailing slash.
std::string normalize_path(const std::string& path);

struct EndpointSet {
  std::set<Endpoint> endpoints;
  std::string source;  // "generated" or "reference"

  void add(const std::string& method, const std::string& path);
};

// Api/HttpApi events of every Serverless Function.
EndpointSet endpoints_from_template(const sam::Template& t);
// Monolith routes minus auth paths.
EndpointSet endpoints_from_report(const facts::AnalysisReport& report, const std::vector<std::string>& auth_paths);
// {"endpoints": [{"method", "path"}, ...]} or a bare list of "METHOD /path" strings.
EndpointSet endpoints_from_json(const Json& j, const std::string& source);

struct Coverage {
  std::size_t generated = 0;
  std::size_t reference = 0;
  std::size_t matched = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

double harmonic_mean(double p, double r);

// Throws kInvalidArgument when R is empty.
Coverage api_f1(const EndpointSet& g, const EndpointSet& r);

struct AppCoverage {
  std::string app;
  EndpointSet generated;
  EndpointSet reference;
};

struct CoverageSummary {
  std::vector<std::pair<std::string, Coverage>> per_app;
  Coverage micro;  // pooled counts
  Coverage macro;  // mean of per-app values
};

CoverageSummary api_f1(const std::vector<AppCoverage>& apps);

std::size_t anti_pattern_count(const EndpointSet& g, const EndpointSet& r, const std::vector<std::string>& auth_paths);

struct TestResult {
  std::string app;
  std::string category;  // core, robustness, auth, async
  int total = 0;
  int passed = 0;
};

const std::set<std::string>& default_categories();

struct PassRate {
  double micro = 0;
  double macro = 0;
  int total = 0;
  int passed = 0;
  std::vector<std::pair<std::string, double>> per_app;
  std::vector<std::string> excluded;  // apps with no tests after filtering
};

// Throws kInvalidArgument when passed > total or nothing remains to score.
PassRate e2epr(const std::vector<TestResult>& results,
               const std::set<std::string>& categories = default_categories());

// Accepts a single object or a list of {app, category, total, passed}.
std::vector<TestResult> results_from_json(const Json& j);

struct ScoreCard {
  std::optional<CoverageSummary> coverage;
  std::optional<PassRate> pass_rate;
  std::size_t anti_patterns = 0;
  std::vector<std::string> warnings;
};

Json to_json(const ScoreCard& card);
std::string to_text(const ScoreCard& card);

}  // namespace slsmig::metrics
