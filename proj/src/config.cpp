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

#include "slsmig/config.hpp"

namespace slsmig {
namespace {

std::set<std::string> string_set(const Json& j, const char* key) {
  std::set<std::string> out;
  for (const auto& v : j.at(key)) out.insert(v.get<std::string>());
  return out;
}

}  // namespace

Config config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config root must be a JSON object");
  static const std::set<std::string> kKnown = {
      "auth_decorators", "auth_paths",      "domain_map",        "library_domains",  "max_depth",
      "shared_layer_threshold", "flask_route_attrs", "express_methods", "default_receivers",
      "function_timeout", "function_memory"};
  Config c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (!kKnown.count(key)) throw Error(ErrorCode::kInvalidArgument, "unknown config key: " + key);
    }
    if (j.contains("auth_decorators")) {
      c.planner.auth_decorators = string_set(j, "auth_decorators");
      c.framework.auth_markers = c.planner.auth_decorators;
    }
    if (j.contains("auth_paths")) c.planner.auth_paths = j.at("auth_paths").get<std::vector<std::string>>();
    if (j.contains("domain_map")) c.planner.domain_map = j.at("domain_map").get<std::map<std::string, std::string>>();
    if (j.contains("library_domains")) c.planner.library_domains = string_set(j, "library_domains");
    if (j.contains("max_depth")) c.planner.max_depth = j.at("max_depth").get<int>();
    if (j.contains("shared_layer_threshold")) c.planner.shared_layer_threshold = j.at("shared_layer_threshold").get<int>();
    if (j.contains("flask_route_attrs")) c.framework.flask_route_attrs = string_set(j, "flask_route_attrs");
    if (j.contains("express_methods")) c.framework.express_methods = string_set(j, "express_methods");
    if (j.contains("default_receivers")) c.framework.default_receivers = string_set(j, "default_receivers");
    if (j.contains("function_timeout")) c.function_timeout = j.at("function_timeout").get<int>();
    if (j.contains("function_memory")) c.function_memory = j.at("function_memory").get<int>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed config: ") + e.what());
  }
  if (c.planner.max_depth < 1) throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 1");
  return c;
}

Config load_config(const fs::path& path) {
  try {
    return config_from_json(Json::parse(read_text_file(path)));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, "config is not valid JSON: " + std::string(e.what()));
  }
}

}  // namespace slsmig
