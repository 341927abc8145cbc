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

#include <map>
#include <set>

#include "slsmig/blueprint.hpp"
#include "slsmig/naming.hpp"
#include "slsmig/python_ast.hpp"
#include "slsmig/synth.hpp"
#include "support.hpp"

namespace slsmig::synth {
namespace {

using planner::Blueprint;
using planner::LambdaSpec;
using slsmig::testing::fixture;
using slsmig::testing::TempDir;

Blueprint plan_fixture(const std::string& name) {
  auto snap = facts::load_project(fixture(name));
  auto a = facts::analyze(snap, facts::FrameworkConfig{});
  return planner::plan_blueprint(a.report, snap, planner::PlannerConfig{});
}

std::vector<std::string> function_order(const sam::Template& t) {
  std::vector<std::string> out;
  for (const auto* r : t.of_kind(sam::ResourceKind::kFunction)) out.push_back(r->logical_id);
  return out;
}

LambdaSpec http_spec(const std::string& name, const std::string& path) {
  LambdaSpec s;
  s.name = name;
  s.method = "GET";
  s.path = path;
  s.runtime = planner::kPythonRuntime;
  s.handler_function = "h";
  return s;
}

TEST(Template, EveryReferenceResolves) {
  for (const auto& name : slsmig::testing::fixture_names()) {
    sam::Template t = synthesize_template(plan_fixture(name));
    std::set<std::string> ids;
    for (const auto& r : t.resources) ids.insert(r.logical_id);
    for (const auto& ref : sam::references(t)) {
      EXPECT_TRUE(ids.count(ref.target) || t.parameter_names().count(ref.target) ||
                  sam::is_pseudo_parameter(ref.target))
          << name << ": " << ref.from << " -> " << ref.target;
    }
  }
}

TEST(Template, CalleeDeclaredBeforeCaller) {
  sam::Template t = synthesize_template(plan_fixture("bookstore_flask"));
  auto order = function_order(t);
  auto at = [&](const std::string& lambda) {
    return std::find(order.begin(), order.end(), naming::function_logical_id(lambda)) - order.begin();
  };
  EXPECT_LT(at("get-inventory-by-book-id"), at("get-books-by-book-id"));
}

TEST(Template, InvokeCycleStillEmitsEveryFunction) {
  Blueprint b;
  auto a = http_spec("get-a", "/a");
  auto c = http_spec("get-c", "/c");
  a.invokes = {"get-c"};
  c.invokes = {"get-a"};
  b.lambda_functions = {a, c};
  EXPECT_EQ(function_order(synthesize_template(b)).size(), 2u);
}

TEST(Template, UndeclaredPublishTargetIsPrecondition) {
  Blueprint b;
  auto a = http_spec("post-a", "/a");
  a.publishes_to = {{"sqs_queue", "missing-queue"}};
  b.lambda_functions = {a};
  try {
    synthesize_template(b);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(Template, PublicRouteOverridesDefaultAuthorizer) {
  Blueprint b = plan_fixture("todo_flask");
  ASSERT_TRUE(b.api_gateway.default_authorizer.has_value());
  sam::Template t = synthesize_template(b);
  for (const auto& s : b.lambda_functions) {
    const sam::Resource* r = t.find(naming::function_logical_id(s.name));
    ASSERT_NE(r, nullptr);
    const auto& ev = r->properties["Events"]["Api"]["Properties"];
    if (s.auth == "none") {
      EXPECT_EQ(ev["Auth"]["Authorizer"], "NONE") << s.name;
    } else {
      EXPECT_FALSE(ev.contains("Auth")) << s.name;
    }
  }
}

TEST(Template, OptionsReachGlobals) {
  SynthOptions o;
  o.function_timeout = 12;
  o.function_memory = 1024;
  sam::Template t = synthesize_template(plan_fixture("todo_flask"), o);
  EXPECT_EQ(t.globals["Function"]["Timeout"], 12);
  EXPECT_EQ(t.globals["Function"]["MemorySize"], 1024);
}

TEST(Template, SerializedFormParsesBack) {
  sam::Template t = synthesize_template(plan_fixture("bookstore_flask"));
  sam::Template back = sam::parse_template(sam::serialize_template(t));
  ASSERT_EQ(back.resources.size(), t.resources.size());
  for (std::size_t i = 0; i < t.resources.size(); ++i) {
    EXPECT_EQ(back.resources[i].logical_id, t.resources[i].logical_id);
    EXPECT_EQ(back.resources[i].properties, t.resources[i].properties) << t.resources[i].logical_id;
  }
}

TEST(Template, EnvVarsCarryMatchingPolicies) {
  Blueprint b = plan_fixture("bookstore_flask");
  sam::Template t = synthesize_template(b);
  for (const auto& s : b.lambda_functions) {
    const sam::Resource* r = t.find(naming::function_logical_id(s.name));
    for (const auto& v : s.env_vars) {
      EXPECT_EQ(r->properties["Environment"]["Variables"][v], env_var_value(b, v)) << s.name << " " << v;
      auto policy = policy_for_env_var(b, v);
      if (policy.is_null()) continue;
      const auto& policies = r->properties["Policies"];
      EXPECT_NE(std::find(policies.begin(), policies.end(), policy), policies.end()) << s.name << " " << v;
    }
  }
}

TEST(Stubs, PythonStubsCompileAndDefineHandler) {
  Blueprint b = plan_fixture("bookstore_flask");
  int handlers = 0;
  for (const auto& f : render_stubs(b)) {
    if (!ends_with(f.path, ".py")) continue;
    EXPECT_FALSE(python::check_syntax(f.content, f.path).has_value()) << f.path;
    if (ends_with(f.path, "/handler.py")) {
      ++handlers;
      EXPECT_NE(f.content.find("def lambda_handler("), std::string::npos) << f.path;
    }
  }
  EXPECT_EQ(handlers, static_cast<int>(b.lambda_functions.size()));
}

TEST(Stubs, NodeManifestsAreValidJson) {
  Blueprint b = plan_fixture("shop_express");
  int manifests = 0;
  for (const auto& f : render_stubs(b)) {
    if (!ends_with(f.path, "package.json")) continue;
    ++manifests;
    Json j = Json::parse(f.content);
    EXPECT_TRUE(j.is_object()) << f.path;
    // A manifest exists only to declare something.
    ASSERT_FALSE(j.value("dependencies", Json::object()).empty()) << f.path;
    for (const auto& [dep, version] : j["dependencies"].items()) {
      EXPECT_FALSE(sam::builtin_packages("nodejs").count(dep)) << f.path << " " << dep;
    }
  }
  EXPECT_GT(manifests, 0);
}

TEST(Workspace, RefusesToOverwriteForeignFiles) {
  TempDir dir;
  Blueprint b = plan_fixture("todo_flask");
  const std::string victim = "lambdas/" + b.lambda_functions.front().name + "/handler.py";
  fs::create_directories((dir / victim).parent_path());
  write_text_atomic(dir / victim, "hand written\n");
  try {
    synthesize_workspace(b, dir.path());
    FAIL() << "expected a conflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
  EXPECT_EQ(read_text_file(dir / victim), "hand written\n");
  EXPECT_FALSE(fs::exists(dir / "template.yaml"));
}

TEST(Workspace, ResynthesisReplacesOwnOutputAndDropsStaleFiles) {
  TempDir dir;
  Blueprint b = plan_fixture("todo_flask");
  synthesize_workspace(b, dir.path());
  const std::string gone = b.lambda_functions.back().name;
  ASSERT_TRUE(fs::exists(dir / ("lambdas/" + gone + "/handler.py")));
  b.lambda_functions.pop_back();
  synthesize_workspace(b, dir.path());
  EXPECT_FALSE(fs::exists(dir / ("lambdas/" + gone + "/handler.py")));
  EXPECT_TRUE(fs::exists(dir / ("lambdas/" + b.lambda_functions.front().name + "/handler.py")));
}

TEST(Workspace, OutputIsByteStable) {
  TempDir one;
  TempDir two;
  Blueprint b = plan_fixture("shop_express");
  synthesize_workspace(b, one.path());
  synthesize_workspace(b, two.path());
  EXPECT_EQ(slsmig::testing::snapshot_tree(one.path()), slsmig::testing::snapshot_tree(two.path()));
}

}  // namespace
}  // namespace slsmig::synth
