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

#include <map>
#include <string>
#include <vector>

#include "slsmig/blueprint.hpp"
#include "slsmig/common.hpp"
#include "slsmig/sam_model.hpp"

// Cross-artifact verification of (blueprint, template, handler code).
namespace slsmig::validator {

// Checks in execution order; the phase of each is fixed.
const std::vector<std::string>& check_ids();
char phase_of(const std::string& check_id);

struct ValidationReport {
  std::vector<sam::Finding> findings;  // in phase/check order
  std::vector<std::string> checks_run;
  bool pass = false;
  int fix_round = 0;
  std::vector<sam::Finding> applied_fixes;  // findings whose fix was applied
};

struct Workspace {
  fs::path root;
  planner::Blueprint blueprint;
  sam::Template tmpl;
};

// Loads blueprint.json and template.yaml and checks that lambdas/ exists.
// Throws kPrecondition (missing) or kParse (unparseable); no checks run then.
Workspace load_workspace(const fs::path& root);

ValidationReport validate(const Workspace& ws);
ValidationReport validate(const fs::path& root);

// Applies every mechanical fix of `report` in one batch, writes the patched
// artifacts and re-validates exactly once. The returned report has fix_round 1.
ValidationReport apply_fixes(const fs::path& root, const ValidationReport& report);

// Environment variable names a handler source reads.
std::vector<std::string> env_reads(const std::string& source);

Json to_json(const ValidationReport& r);
std::string summary_text(const ValidationReport& r);

}  // namespace slsmig::validator
