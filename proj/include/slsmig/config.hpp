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

#include "slsmig/blueprint.hpp"
#include "slsmig/common.hpp"
#include "slsmig/source_facts.hpp"

namespace slsmig {

struct Config {
  facts::FrameworkConfig framework;
  planner::PlannerConfig planner;
  int function_timeout = 30;
  int function_memory = 256;
};

// Recognised keys: auth_decorators, auth_paths, domain_map, library_domains,
// max_depth, shared_layer_threshold, flask_route_attrs, express_methods,
// default_receivers, function_timeout, function_memory. The auth decorator
// list feeds both entry-point marker detection and endpoint classification.
Config config_from_json(const Json& j);
Config load_config(const fs::path& path);

}  // namespace slsmig
