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

#include <queue>
#include <random>
#include <set>

#include "slsmig/blueprint.hpp"
#include "slsmig/config.hpp"
#include "support.hpp"

namespace slsmig::planner {
namespace {

using facts::CallEdge;
using slsmig::testing::fixture;

Blueprint plan_fixture(const std::string& name, const PlannerConfig& cfg = {}) {
  auto snap = facts::load_project(fixture(name));
  auto a = facts::analyze(snap, facts::FrameworkConfig{});
  return plan_blueprint(a.report, snap, cfg);
}

TEST(AuthPath, ExactAndSuffix) {
  std::vector<std::string> paths = {"/register", "/login", "/logout"};
  EXPECT_TRUE(is_auth_path("/login", paths));
  EXPECT_TRUE(is_auth_path("/auth/login", paths));
  EXPECT_TRUE(is_auth_path("/api/v1/register", paths));
  EXPECT_FALSE(is_auth_path("/loginhistory", paths));
  EXPECT_FALSE(is_auth_path("/login/history", paths));
}

TEST(Classify, DropsAuthPathsAndMarksDecorated) {
  facts::AnalysisReport r;
  r.entry_points = {{"POST", "/login", "login", "app.py", 1, {}, "app.py"},
                    {"GET", "/items", "items", "app.py", 5, {"login_required"}, "app.py"},
                    {"GET", "/public", "pub", "app.py", 9, {}, "app.py"}};
  PlannerConfig cfg;
  auto c = classify_endpoints(r, cfg.auth_decorators, cfg.auth_paths);
  ASSERT_EQ(c.dropped.size(), 1u);
  EXPECT_EQ(c.dropped[0].path, "/login");
  ASSERT_EQ(c.business.size(), 2u);
  for (const auto& e : c.business) EXPECT_EQ(e.auth, e.entry.path == "/items" ? "required" : "none");
}

CallEdge edge(const std::string& from, const std::string& to, bool used = true) {
  CallEdge e;
  e.caller_file = from.substr(0, from.find(':'));
  e.caller_function = from.substr(from.find(':') + 1);
  e.callee_file = to.substr(0, to.find(':'));
  e.callee_function = to.substr(to.find(':') + 1);
  e.line = 1;
  e.return_value_used = used;
  return e;
}

TEST(Trace, DepthBoundAndCycles) {
  std::vector<CallEdge> all = {edge("h.py:h", "a.py:a"), edge("a.py:a", "b.py:b"), edge("b.py:b", "c.py:c"),
                               edge("c.py:c", "d.py:d"), edge("b.py:b", "a.py:a")};
  std::vector<facts::Diagnostic> diags;
  auto t2 = trace_deep_calls(all, {all[0]}, 2, &diags);
  EXPECT_EQ(t2.size(), 2u);
  auto t3 = trace_deep_calls(all, {all[0]}, 3, &diags);
  EXPECT_EQ(t3.size(), 4u);  // h->a, a->b, b->c, b->a
  bool cycle = false;
  for (const auto& d : diags) cycle = cycle || d.code == "call-cycle";
  EXPECT_TRUE(cycle);
}

// Oracle: BFS distances from the level-1 callees; an edge is traced when it
// is level-1 or its caller sits at distance < max_depth.
TEST(Trace, MatchesBreadthFirstOracleOnRandomGraphs) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 9);
    int m = static_cast<int>(rng() % 20);
    std::vector<CallEdge> all;
    for (int i = 0; i < m; ++i) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      auto e = edge("f" + std::to_string(a) + ".py:f", "f" + std::to_string(b) + ".py:f");
      e.line = i;
      all.push_back(e);
    }
    std::vector<CallEdge> level1;
    for (const auto& e : all) {
      if (e.caller_file == "f0.py") level1.push_back(e);
    }
    int depth = 1 + static_cast<int>(rng() % 4);
    std::map<std::string, int> dist;
    std::queue<std::string> q;
    for (const auto& e : level1) {
      if (!dist.count(e.callee_file)) {
        dist[e.callee_file] = 1;
        q.push(e.callee_file);
      }
    }
    while (!q.empty()) {
      std::string u = q.front();
      q.pop();
      for (const auto& e : all) {
        if (e.caller_file == u && !dist.count(e.callee_file)) {
          dist[e.callee_file] = dist[u] + 1;
          q.push(e.callee_file);
        }
      }
    }
    std::set<CallEdge> want(level1.begin(), level1.end());
    for (const auto& e : all) {
      auto it = dist.find(e.caller_file);
      if (it != dist.end() && it->second < depth) want.insert(e);
    }
    auto got = trace_deep_calls(all, level1, depth, nullptr);
    EXPECT_EQ(std::set<CallEdge>(got.begin(), got.end()), want) << "trial " << trial;
  }
}

TEST(Communication, Rules) {
  std::map<std::string, std::string> dom = {{"x/a.py", "x"}, {"y/b.py", "y"}, {"x/c.py", "x"}};
  auto e1 = edge("p/h.py:h", "x/a.py:a", false);
  auto e2 = edge("p/h.py:h", "y/b.py:b", false);
  auto e3 = edge("p/h.py:h", "x/c.py:c", false);
  EXPECT_EQ(select_communication({e1}, dom), Communication::kSqs);
  EXPECT_EQ(select_communication({e1, e3}, dom), Communication::kSqs);
  EXPECT_EQ(select_communication({e1, e2}, dom), Communication::kEventBridge);
  e2.return_value_used = true;
  EXPECT_EQ(select_communication({e1, e2}, dom), Communication::kSyncInvoke);
  EXPECT_THROW(select_communication({}, dom), Error);
}

TEST(Communication, AwaitedButUnusedIsAsync) {
  auto e = edge("p/h.py:h", "x/a.py:a", false);
  e.is_awaited = true;
  EXPECT_EQ(select_communication({e}, {{"x/a.py", "x"}}), Communication::kSqs);
}

TEST(Domain, MapAndTopLevel) {
  PlannerConfig cfg;
  cfg.domain_map = {{"src/billing", "payments"}, {"src", "core"}};
  EXPECT_EQ(domain_of("src/billing/charge.py", cfg), "payments");
  EXPECT_EQ(domain_of("src/other.py", cfg), "core");
  EXPECT_EQ(domain_of("orders/service.py", cfg), "orders");
  EXPECT_EQ(domain_of("app.py", cfg), "");
}

TEST(Tables, ParsesKeysFromCreateCalls) {
  auto tables = parse_table_declarations({{"init_db.py", R"py(
client.create_table(
    TableName="Orders",
    KeySchema=[{"AttributeName": "order_id", "KeyType": "HASH"}, {"AttributeName": "ts", "KeyType": "RANGE"}],
    AttributeDefinitions=[{"AttributeName": "order_id", "AttributeType": "N"}],
)
client.create_table(TableName="plain")
)py"}});
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_EQ(tables[0].name, "orders");
  EXPECT_EQ(tables[0].partition_key, "order_id");
  EXPECT_EQ(tables[0].type, "N");
  EXPECT_EQ(tables[0].env_var, "ORDERS_TABLE");
  EXPECT_EQ(tables[1].partition_key, "id");
}

TEST(Blueprint, BookstoreShape) {
  Blueprint b = plan_fixture("bookstore_flask");
  EXPECT_EQ(b.dropped_functions.size(), 3u);
  const LambdaSpec* book = b.find("get-books-by-book-id");
  ASSERT_NE(book, nullptr);
  EXPECT_EQ(book->invokes, std::vector<std::string>{"get-inventory-by-book-id"});
  ASSERT_EQ(b.eventbridge_rules.size(), 1u);
  EXPECT_EQ(b.eventbridge_rules[0].producer, "post-orders");
  EXPECT_EQ(b.eventbridge_rules[0].targets,
            (std::vector<std::string>{"reserve-subscriber", "send-confirmation-subscriber"}));
  ASSERT_EQ(b.sqs_queues.size(), 1u);
  EXPECT_EQ(b.sqs_queues[0].consumer, "log-restock-consumer");
  EXPECT_EQ(b.sqs_queues[0].producers, std::vector<std::string>{"put-inventory-by-book-id"});
  EXPECT_EQ(b.dynamodb_tables.size(), 3u);
  ASSERT_EQ(b.s3_buckets.size(), 1u);
  EXPECT_TRUE(b.find("post-books")->uses_shared_layer);
  EXPECT_FALSE(b.find("log-restock-consumer")->uses_shared_layer);
  // Upload permission follows the handler body, not the whole routes module.
  EXPECT_EQ(b.find("get-books")->env_vars, std::vector<std::string>{"BOOKS_TABLE"});
  ASSERT_TRUE(b.cognito.has_value());
  EXPECT_EQ(b.api_gateway.default_authorizer, b.cognito->authorizer);
  for (const auto& s : b.lambda_functions) {
    for (const auto& f : s.source_files) EXPECT_NE(f, "init_db.py") << s.name;
  }
}

TEST(Blueprint, LayerThresholdIsConfigurable) {
  PlannerConfig cfg;
  cfg.shared_layer_threshold = 100;
  Blueprint b = plan_fixture("bookstore_flask", cfg);
  for (const auto& s : b.lambda_functions) EXPECT_FALSE(s.uses_shared_layer);
}

TEST(Blueprint, DepthOneHidesDeepFanOut) {
  PlannerConfig cfg;
  cfg.max_depth = 1;
  Blueprint b = plan_fixture("bookstore_flask", cfg);
  EXPECT_TRUE(b.eventbridge_rules.empty());
  EXPECT_EQ(b.sqs_queues.size(), 1u);
}

TEST(Blueprint, ExpressFanOut) {
  Blueprint b = plan_fixture("shop_express");
  EXPECT_FALSE(b.is_python());
  ASSERT_EQ(b.eventbridge_rules.size(), 1u);
  EXPECT_EQ(b.find("post-api-orders")->env_vars, (std::vector<std::string>{"ORDERS_TABLE", "EVENT_BUS_NAME"}));
  EXPECT_EQ(b.find("get-health")->auth, "none");
}

TEST(Blueprint, JsonRoundTrip) {
  Blueprint b = plan_fixture("bookstore_flask");
  Json j = to_json(b);
  EXPECT_EQ(canonical_json(to_json(blueprint_from_json(j))), canonical_json(j));
  Json broken = j;
  broken.erase("sqs_queues");
  EXPECT_THROW(blueprint_from_json(broken), Error);
}

TEST(Blueprint, NoBusinessEndpointsIsPrecondition) {
  facts::AnalysisReport r;
  r.entry_points = {{"POST", "/login", "login", "app.py", 1, {}, "app.py"}};
  facts::ProjectSnapshot p;
  p.files = {{"app.py", "x = 1\n"}};
  try {
    plan_blueprint(r, p, PlannerConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

TEST(Config, KnownKeysAndRejection) {
  Config c = config_from_json(Json::parse(R"({"auth_paths": ["/signin"], "max_depth": 2, "function_timeout": 10})"));
  EXPECT_EQ(c.planner.auth_paths, std::vector<std::string>{"/signin"});
  EXPECT_EQ(c.planner.max_depth, 2);
  EXPECT_EQ(c.function_timeout, 10);
  EXPECT_THROW(config_from_json(Json::parse(R"({"runtime_magic": 1})")), Error);
  EXPECT_THROW(config_from_json(Json::parse(R"({"max_depth": 0})")), Error);
}

}  // namespace
}  // namespace slsmig::planner
