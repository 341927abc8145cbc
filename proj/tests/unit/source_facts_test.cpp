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

#include <set>

#include "slsmig/source_facts.hpp"
#include "support.hpp"

namespace slsmig::facts {
namespace {

using slsmig::testing::fixture;
using slsmig::testing::TempDir;

std::set<std::string> keys(const std::vector<EntryPoint>& eps) {
  std::set<std::string> out;
  for (const auto& e : eps) out.insert(e.key());
  return out;
}

ProjectSnapshot project_of(const std::map<std::string, std::string>& files, Language lang) {
  ProjectSnapshot p;
  p.root = "/virtual";
  p.language = lang;
  p.files = files;
  return p;
}

TEST(FlaskRoutes, MethodsListAndShorthandDecorators) {
  const char* src = R"py(
from flask import Flask
app = Flask(__name__)

@app.route("/items", methods=["GET", "POST"])
def items():
    return "x"

@app.get("/items/<int:item_id>")
def item(item_id):
    return "x"

@app.route("/plain")
def plain():
    return "x"
)py";
  auto eps = extract_entry_points("app.py", src, Language::kPython, FrameworkConfig{});
  EXPECT_EQ(keys(eps), (std::set<std::string>{"GET /items", "POST /items", "GET /items/{item_id}", "GET /plain"}));
}

TEST(FlaskRoutes, AuthDecoratorRecorded) {
  const char* src = R"py(
from flask import Flask
app = Flask(__name__)

@app.route("/secret")
@login_required
def secret():
    return "x"
)py";
  auto eps = extract_entry_points("app.py", src, Language::kPython, FrameworkConfig{});
  ASSERT_EQ(eps.size(), 1u);
  EXPECT_EQ(eps[0].auth_markers, std::vector<std::string>{"login_required"});
  EXPECT_EQ(eps[0].handler_function, "secret");
}

TEST(FlaskRoutes, BlueprintPrefixesFromConstructorAndRegistration) {
  auto snap = load_project(fixture("bookstore_flask"));
  std::vector<Diagnostic> diags;
  auto eps = extract_entry_points(snap, FrameworkConfig{}, &diags);
  auto k = keys(eps);
  EXPECT_TRUE(k.count("GET /books"));
  EXPECT_TRUE(k.count("PUT /inventory/{book_id}"));
  EXPECT_TRUE(k.count("POST /auth/login"));
  EXPECT_TRUE(diags.empty());
}

TEST(ExpressRoutes, InlineHandlersAndRouteChains) {
  const char* src = R"js(
const express = require('express');
const app = express();
app.get('/a', (req, res) => res.send('a'));
app.route('/b').get(getB).post(postB);
function getB(req, res) {}
function postB(req, res) {}
)js";
  auto eps = extract_entry_points("server.js", src, Language::kJavaScript, FrameworkConfig{});
  EXPECT_EQ(keys(eps), (std::set<std::string>{"GET /a", "GET /b", "POST /b"}));
}

TEST(ExpressRoutes, ComputedPathIsDiagnosedNotGuessed) {
  auto snap = project_of({{"server.js", "const express = require('express');\nconst app = express();\n"
                                        "const p = '/x';\napp.get(p, h);\nfunction h(req, res) {}\n"}},
                         Language::kJavaScript);
  std::vector<Diagnostic> diags;
  auto eps = extract_entry_points(snap, FrameworkConfig{}, &diags);
  EXPECT_TRUE(eps.empty());
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].code, "computed-route");
}

TEST(ExpressRoutes, MountPrefixesAcrossFiles) {
  auto snap = load_project(fixture("shop_express"));
  std::vector<Diagnostic> diags;
  auto eps = extract_entry_points(snap, FrameworkConfig{}, &diags);
  auto k = keys(eps);
  EXPECT_TRUE(k.count("GET /api/products/{productId}"));
  EXPECT_TRUE(k.count("POST /api/orders"));
  EXPECT_TRUE(k.count("POST /auth/logout"));
  for (const auto& e : eps) {
    if (e.key() == "POST /api/orders") {
      EXPECT_EQ(e.auth_markers, std::vector<std::string>{"authenticate"});
      EXPECT_EQ(e.handler_file, "orders/routes.js");
    }
  }
}

TEST(CallGraph, JavaScriptFlags) {
  auto snap = project_of({{"a.js", R"js(
const { f, g, h, k } = require('./b');
async function handler(req, res) {
  const x = await f();
  await g();
  const y = h();
  k();
  return x + y;
}
module.exports = { handler };
)js"},
                          {"b.js", "async function f() {}\nasync function g() {}\nfunction h() {}\nfunction k() {}\n"
                                   "module.exports = { f, g, h, k };\n"}},
                         Language::kJavaScript);
  std::vector<Diagnostic> diags;
  auto edges = build_call_graph(snap, &diags);
  std::map<std::string, std::pair<bool, bool>> flags;
  for (const auto& e : edges) flags[e.callee_function] = {e.return_value_used, e.is_awaited};
  EXPECT_EQ(flags["f"], std::make_pair(true, true));
  EXPECT_EQ(flags["g"], std::make_pair(false, true));
  EXPECT_EQ(flags["h"], std::make_pair(true, false));
  EXPECT_EQ(flags["k"], std::make_pair(false, false));
}

TEST(CallGraph, SameFileCallsAreNotCrossFileEdges) {
  auto snap = project_of({{"a.py", "def a():\n    return b()\n\ndef b():\n    return 1\n"}}, Language::kPython);
  std::vector<Diagnostic> diags;
  EXPECT_TRUE(build_call_graph(snap, &diags).empty());
}

TEST(Tags, Detection) {
  auto t = tag_file("repo.py", "import boto3\ntable = boto3.resource('dynamodb').Table('x')\n");
  EXPECT_TRUE(t.tags.count(Tag::kAwsSdk));
  EXPECT_TRUE(t.tags.count(Tag::kDynamoDb));
  EXPECT_TRUE(tag_file("auth.js", "const jwt = require('jsonwebtoken');").tags.count(Tag::kAuth));
  EXPECT_TRUE(tag_file("up.py", "f = request.files['x']").tags.count(Tag::kFileUpload));
  EXPECT_TRUE(tag_file("plain.py", "x = 1\n").tags.empty());
}

TEST(Schema, TierRanking) {
  EXPECT_EQ(schema_tier("init_db.py"), 1);
  EXPECT_EQ(schema_tier("scripts/create-tables.js"), 1);
  EXPECT_EQ(schema_tier("models.py"), 2);
  EXPECT_EQ(schema_tier("db/users.py"), 2);
  EXPECT_EQ(schema_tier("catalog/store.py"), 3);
  EXPECT_EQ(schema_tier("pkg/__init__.py"), 3);
  std::vector<FileTag> tags = {{"z/store.py", {Tag::kDynamoDb}}, {"models.py", {Tag::kDynamoDb}},
                               {"init_db.py", {Tag::kDynamoDb}}, {"a/store.py", {Tag::kDynamoDb}},
                               {"other.py", {Tag::kAuth}}};
  EXPECT_EQ(locate_dynamodb_schemas(tags), (std::vector<std::string>{"init_db.py", "models.py", "a/store.py"}));
}

TEST(Project, MissingOrEmptyRootIsPrecondition) {
  TempDir dir;
  try {
    load_project(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
  EXPECT_THROW(load_project(dir / "missing"), Error);
}

TEST(Project, SkipsVendoredTrees) {
  TempDir dir;
  write_text_atomic(dir / "app.py", "x = 1\n");
  write_text_atomic(dir / "node_modules/lib/index.js", "module.exports = 1;\n");
  write_text_atomic(dir / "venv/lib/site.py", "y = 2\n");
  auto snap = load_project(dir.path());
  EXPECT_EQ(snap.language, Language::kPython);
  EXPECT_EQ(snap.files.size(), 1u);
}

TEST(Report, JsonRoundTrip) {
  auto a = analyze(load_project(fixture("bookstore_flask")), FrameworkConfig{});
  Json j = to_json(a.report);
  AnalysisReport back = report_from_json(j);
  EXPECT_EQ(canonical_json(to_json(back)), canonical_json(j));
  EXPECT_EQ(back.entry_point_dependencies.size(), a.report.entry_point_dependencies.size());
}

TEST(Report, MalformedIsParseError) {
  try {
    report_from_json(Json::parse(R"({"entry_points": 3})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(Symbols, FunctionsAndImports) {
  auto snap = load_project(fixture("todo_flask"));
  std::vector<Diagnostic> diags;
  auto table = build_symbol_table(snap, &diags);
  const FileSymbols* app = nullptr;
  for (const auto& f : table.files) {
    if (f.file == "app.py") app = &f;
  }
  ASSERT_NE(app, nullptr);
  std::set<std::string> fns;
  for (const auto& f : app->functions) fns.insert(f.name);
  EXPECT_TRUE(fns.count("get_todos"));
  bool repo_import = false;
  for (const auto& imp : app->imports) {
    if (imp.name == "list_todos") repo_import = imp.resolved_path == "repo.py" && !imp.external;
  }
  EXPECT_TRUE(repo_import);
}

TEST(Emit, WritesBothArtifacts) {
  TempDir out;
  emit_analysis(fixture("todo_flask"), out.path(), FrameworkConfig{});
  EXPECT_TRUE(fs::exists(out / "analysis_report.json"));
  EXPECT_TRUE(fs::exists(out / "symbol_table.json"));
  Json sym = Json::parse(read_text_file(out / "symbol_table.json"));
  EXPECT_TRUE(sym["files"].contains("app.py"));
}

}  // namespace
}  // namespace slsmig::facts
