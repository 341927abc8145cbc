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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>

#include "slsmig/blueprint.hpp"
#include "slsmig/metrics.hpp"
#include "slsmig/naming.hpp"
#include "slsmig/pipeline.hpp"
#include "slsmig/sam_model.hpp"
#include "slsmig/source_facts.hpp"
#include "slsmig/validator.hpp"
#include "slsmig/workspace.hpp"
#include "support.hpp"

namespace {

using namespace slsmig;
using slsmig::testing::fixture;
using slsmig::testing::fixture_names;
using slsmig::testing::TempDir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
  return out;
}

// Hand-enumerated "METHOD /path" lines, placeholders written as {name}.
std::set<std::string> expected_routes(const std::string& name) {
  auto lines = slsmig::testing::expectation_lines(fixture(name) / "routes.txt");
  return {lines.begin(), lines.end()};
}

Outcome analyzer_fidelity() {
  std::string detail;
  bool ok = true;
  int express = 0, flask = 0, prefixed = 0;
  for (const auto& name : fixture_names()) {
    auto start = std::chrono::steady_clock::now();
    facts::ProjectSnapshot snap = facts::load_project(fixture(name));
    facts::Analysis a = facts::analyze(snap, facts::FrameworkConfig{});
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::set<std::string> got;
    std::size_t records = 0;
    for (const auto& e : a.report.entry_points) {
      got.insert(e.method + " " + e.path);
      ++records;
    }
    std::set<std::string> want = expected_routes(name);
    std::set<std::string> missing, spurious;
    for (const auto& r : want) {
      if (!got.count(r)) missing.insert(r);
    }
    for (const auto& r : got) {
      if (!want.count(r)) spurious.insert(r);
    }
    bool fixture_ok = missing.empty() && spurious.empty() && records == want.size() && secs < 5.0;
    ok = ok && fixture_ok;
    (snap.language == facts::Language::kPython ? flask : express)++;
    for (const auto& r : want) {
      if (std::count(r.begin(), r.end(), '/') >= 2) {
        ++prefixed;
        break;
      }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    detail += name + " " + std::to_string(got.size()) + "/" + std::to_string(want.size()) + " in " + buf;
    if (!missing.empty()) detail += " missing[" + join(missing) + "]";
    if (!spurious.empty()) detail += " spurious[" + join(spurious) + "]";
    detail += "; ";
  }
  ok = ok && flask >= 1 && express >= 1 && prefixed >= 1 && fixture_names().size() >= 3;
  return {ok, detail};
}

Outcome flag_correctness() {
  facts::ProjectSnapshot snap = facts::load_project(fixture("async_flags"));
  std::vector<facts::Diagnostic> diags;
  auto edges = facts::build_call_graph(snap, &diags);
  int correct = 0;
  int total = 0;
  std::string detail;
  for (const auto& line : slsmig::testing::expectation_lines(fixture("async_flags") / "expected_flags.txt")) {
    std::istringstream in(line);
    std::string callee, used, awaited;
    in >> callee >> used >> awaited;
    ++total;
    int matches = 0;
    bool right = false;
    for (const auto& e : edges) {
      if (e.callee_function != callee) continue;
      ++matches;
      right = e.return_value_used == (used == "true") && e.is_awaited == (awaited == "true");
    }
    if (matches == 1 && right) {
      ++correct;
    } else {
      detail += callee + " mislabeled; ";
    }
  }
  return {correct == total && total == 4, std::to_string(correct) + "/" + std::to_string(total) + " " + detail};
}

Outcome planner_partition() {
  planner::PlannerConfig cfg;
  bool ok = true;
  std::string detail;
  for (const auto& name : fixture_names()) {
    facts::ProjectSnapshot snap = facts::load_project(fixture(name));
    facts::Analysis a = facts::analyze(snap, facts::FrameworkConfig{});
    auto cls = planner::classify_endpoints(a.report, cfg.auth_decorators, cfg.auth_paths);
    std::multiset<std::string> all, business, dropped;
    for (const auto& e : a.report.entry_points) all.insert(e.method + " " + e.path);
    for (const auto& e : cls.business) business.insert(e.entry.method + " " + e.entry.path);
    for (const auto& d : cls.dropped) dropped.insert(d.method + " " + d.path);
    std::multiset<std::string> both;
    for (const auto& b : business) {
      if (dropped.count(b)) both.insert(b);
    }
    std::multiset<std::string> uni = business;
    uni.insert(dropped.begin(), dropped.end());
    bool partition = uni == all && both.empty();
    // Every route whose last segment is register/login/logout must be dropped.
    bool auth_dropped = true;
    int auth_routes = 0;
    for (const auto& r : all) {
      std::string path = r.substr(r.find(' ') + 1);
      std::string last = path.substr(path.rfind('/') + 1);
      if (last == "register" || last == "login" || last == "logout") {
        ++auth_routes;
        auth_dropped = auth_dropped && dropped.count(r) > 0;
      }
    }
    ok = ok && partition && auth_dropped;
    detail += name + " " + std::to_string(business.size()) + "+" + std::to_string(dropped.size()) + "=" +
              std::to_string(all.size()) + (auth_dropped ? "" : " auth-not-dropped") + "; ";
    (void)auth_routes;
  }
  return {ok, detail};
}

// Independent statement of the three rules.
planner::Communication oracle_pattern(const std::vector<bool>& used, const std::vector<int>& domain_of_consumer) {
  bool any_used = std::find(used.begin(), used.end(), true) != used.end();
  if (any_used) return planner::Communication::kSyncInvoke;
  std::set<int> domains(domain_of_consumer.begin(), domain_of_consumer.end());
  if (used.size() >= 2 && domains.size() >= 2) return planner::Communication::kEventBridge;
  return planner::Communication::kSqs;
}

Outcome communication_rules() {
  int cases = 0;
  int agree = 0;
  int eventbridge = 0;
  std::string first_bad;
  for (int consumers = 1; consumers <= 3; ++consumers) {
    for (int domains = 1; domains <= 3; ++domains) {
      if (domains > consumers) continue;  // each domain needs a consumer
      // Every surjective assignment of consumers to domains.
      int assignments = 1;
      for (int i = 0; i < consumers; ++i) assignments *= domains;
      for (int a = 0; a < assignments; ++a) {
        std::vector<int> dom(consumers);
        int x = a;
        for (int i = 0; i < consumers; ++i) {
          dom[i] = x % domains;
          x /= domains;
        }
        if (std::set<int>(dom.begin(), dom.end()).size() != static_cast<std::size_t>(domains)) continue;
        for (int mask = 0; mask < (1 << consumers); ++mask) {
          std::vector<bool> used(consumers);
          std::vector<facts::CallEdge> relation;
          std::map<std::string, std::string> callee_domains;
          for (int i = 0; i < consumers; ++i) {
            used[i] = (mask >> i) & 1;
            facts::CallEdge e;
            e.caller_file = "producer/handler.py";
            e.caller_function = "handle";
            e.callee_file = "svc" + std::to_string(dom[i]) + "/c" + std::to_string(i) + ".py";
            e.callee_function = "consume" + std::to_string(i);
            e.line = 10 + i;
            e.return_value_used = used[i];
            relation.push_back(e);
            callee_domains[e.callee_file] = "svc" + std::to_string(dom[i]);
          }
          auto got = planner::select_communication(relation, callee_domains);
          auto want = oracle_pattern(used, dom);
          ++cases;
          if (got == want) {
            ++agree;
          } else if (first_bad.empty()) {
            first_bad = "consumers=" + std::to_string(consumers) + " domains=" + std::to_string(domains) +
                        " mask=" + std::to_string(mask);
          }
          if (got == planner::Communication::kEventBridge) ++eventbridge;
        }
      }
    }
  }
  return {agree == cases && cases > 0, std::to_string(agree) + "/" + std::to_string(cases) + " shapes agree, " +
                                           std::to_string(eventbridge) + " eventbridge" +
                                           (first_bad.empty() ? "" : "; first mismatch " + first_bad)};
}

Outcome round_trip() {
  bool ok = true;
  std::string detail;
  for (const auto& name : fixture_names()) {
    TempDir out;
    auto r = pipeline::run_all(fixture(name), out.path(), Config{}, false);
    ok = ok && r.pass && r.findings.empty();
    detail += name + " " + (r.pass ? "pass" : "fail") + "/" + std::to_string(r.findings.size()) + "; ";
  }
  return {ok, detail};
}

void edit_template(const fs::path& root, const std::function<void(sam::Template&)>& edit) {
  sam::Template t = sam::load_template(root / "template.yaml");
  edit(t);
  write_text_atomic(root / "template.yaml", sam::serialize_template(t));
}

struct Mutation {
  std::string check;
  bool mechanical;
  std::function<void(const fs::path&)> apply;
};

std::vector<Mutation> mutations() {
  return {
      {"C1", false,
       [](const fs::path& r) {
         write_text_atomic(r / "lambdas/orphan-function/handler.py", "def lambda_handler(event, context):\n    return {}\n");
       }},
      {"C2", false,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           t.find("GetBooksFunction")->properties["CodeUri"] = "lambdas/get-book/";
         });
       }},
      {"C3", false,
       [](const fs::path& r) {
         fs::path h = r / "lambdas/get-books/handler.py";
         std::string s = read_text_file(h);
         s.replace(s.find("def lambda_handler"), 18, "def handle");
         write_text_atomic(h, s);
       }},
      {"C4", true,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           t.find("GetBooksFunction")->properties["Environment"]["Variables"].erase("BOOKS_TABLE");
         });
       }},
      {"C5", true,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           auto& policies = t.find("GetBooksFunction")->properties["Policies"];
           for (auto it = policies.begin(); it != policies.end(); ++it) {
             if (it->contains("DynamoDBCrudPolicy")) {
               policies.erase(it);
               break;
             }
           }
         });
       }},
      {"C6", true,
       [](const fs::path& r) {
         fs::rename(r / "layers/shared/python/shared_utils.py", r / "layers/shared/shared_utils.py");
       }},
      {"C7", false,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           t.find("PostBooksFunction")->properties["Events"]["Api"]["Properties"]["Path"] = "/book";
         });
       }},
      {"C8", false,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           t.find("GetBooksFunction")->properties["Events"]["Api"]["Properties"].erase("Auth");
         });
       }},
      {"C9", false,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           t.find("LogRestockConsumerFunction")->properties["Events"].erase("LogRestockQueueEvent");
         });
       }},
      {"C10", true,
       [](const fs::path& r) {
         edit_template(r, [](sam::Template& t) {
           auto& res = t.resources;
           res.erase(std::find_if(res.begin(), res.end(), [](const sam::Resource& x) {
             return x.logical_id == "PostOrdersEventsReserveSubscriberPermission";
           }));
         });
       }},
      {"C11", false,
       [](const fs::path& r) { write_text_atomic(r / "lambdas/get-books/requirements.txt", "boto3==1.34.0\n"); }},
  };
}

Outcome mutation_suite() {
  TempDir clean;
  auto base = pipeline::run_all(fixture("bookstore_flask"), clean.path(), Config{}, false);
  if (!base.pass || !base.findings.empty()) return {false, "clean fixture does not validate"};
  int isolated = 0;
  int mechanical = 0;
  int repaired = 0;
  std::string detail;
  for (const auto& m : mutations()) {
    TempDir work;
    fs::copy(clean.path(), work.path(), fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    m.apply(work.path());
    auto report = validator::validate(work.path());
    std::set<std::string> fired;
    for (const auto& f : report.findings) fired.insert(f.check_id);
    bool exact = fired == std::set<std::string>{m.check};
    isolated += exact;
    if (!exact) detail += m.check + " fired {" + join(fired) + "}; ";
    if (m.mechanical) {
      ++mechanical;
      auto fixed = validator::apply_fixes(work.path(), report);
      bool good = fixed.fix_round == 1 && fixed.pass && fixed.findings.empty();
      repaired += good;
      if (!good) detail += m.check + " not repaired; ";
    }
  }
  return {isolated == 11 && repaired == mechanical && mechanical > 0,
          std::to_string(isolated) + "/11 isolated, " + std::to_string(repaired) + "/" + std::to_string(mechanical) +
              " mechanical repaired in round 1; " + detail};
}

Outcome lint_taxonomy() {
  TempDir out;
  pipeline::run_all(fixture("bookstore_flask"), out.path(), Config{}, false);
  const std::string clean_text = read_text_file(out / "template.yaml");
  auto lint = [](const sam::Template& t) { return sam::lint_template(t); };
  auto fatal_ids = [](const std::vector<sam::Finding>& fs) {
    std::vector<std::string> ids;
    for (const auto& f : fs) {
      if (f.severity == sam::Severity::kFatal) ids.push_back(f.check_id);
    }
    return ids;
  };
  std::string detail;
  auto clean = lint(sam::parse_template(clean_text));
  bool ok = clean.empty();
  detail += "clean " + std::to_string(clean.size()) + " findings; ";

  struct Seed {
    std::string name;
    std::function<void(sam::Template&)> edit;
  };
  std::vector<Seed> seeds = {
      {"reserved-env",
       [](sam::Template& t) { t.globals["Function"]["Environment"]["Variables"]["AWS_REGION"] = "us-east-1"; }},
      {"cors-wildcard-credentials",
       [](sam::Template& t) {
         auto& cors = t.find(naming::kApiLogicalId)->properties["Cors"];
         cors["AllowCredentials"] = true;
       }},
      {"unsupported-globals", [](sam::Template& t) { t.globals["Function"]["Domain"] = "example.com"; }},
  };
  for (const auto& s : seeds) {
    sam::Template t = sam::parse_template(clean_text);
    s.edit(t);
    auto ids = fatal_ids(lint(sam::parse_template(sam::serialize_template(t))));
    bool one = ids.size() == 1;
    ok = ok && one;
    detail += s.name + " " + std::to_string(ids.size()) + " fatal" + (ids.empty() ? "" : " (" + ids[0] + ")") + "; ";
  }
  return {ok, detail};
}

std::vector<std::string> random_endpoints(std::mt19937& rng, int n) {
  static const char* methods[] = {"GET", "POST", "PUT", "DELETE"};
  std::vector<std::string> out;
  std::uniform_int_distribution<int> m(0, 3), seg(0, 11), param(0, 3);
  for (int i = 0; i < n; ++i) {
    std::string path = "/r" + std::to_string(seg(rng));
    if (param(rng) == 0) path += "/{id}";
    out.push_back(std::string(methods[m(rng)]) + " " + path);
  }
  return out;
}

Outcome metric_exactness() {
  std::string detail;
  metrics::EndpointSet r;
  for (const char* p : {"/a", "/b", "/c", "/d"}) r.add("GET", p);
  metrics::EndpointSet g = r;
  g.add("POST", "/login");
  auto c = metrics::api_f1(g, r);
  bool f1_ok = std::abs(c.f1 - 8.0 / 9.0) <= 1e-12 && std::abs(c.precision - 0.8) <= 1e-12 &&
               std::abs(c.recall - 1.0) <= 1e-12;
  auto pr = metrics::e2epr({{"a1", "core", 4, 2}, {"a2", "core", 3, 3}});
  bool e2e_ok = std::abs(pr.micro - 5.0 / 7.0) <= 1e-12 && std::abs(pr.macro - 0.75) <= 1e-12;
  detail += "f1=" + std::to_string(c.f1) + " micro=" + std::to_string(pr.micro) + " macro=" + std::to_string(pr.macro);

  std::mt19937 rng(20260517);
  std::uniform_int_distribution<int> size_r(1, 76), size_g(0, 80);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto rv = random_endpoints(rng, size_r(rng));
    auto gv = random_endpoints(rng, size_g(rng));
    // Brute force over de-duplicated lists.
    std::vector<std::string> ru, gu;
    for (const auto& x : rv) {
      if (std::find(ru.begin(), ru.end(), x) == ru.end()) ru.push_back(x);
    }
    for (const auto& x : gv) {
      if (std::find(gu.begin(), gu.end(), x) == gu.end()) gu.push_back(x);
    }
    int hit = 0;
    for (const auto& x : gu) {
      for (const auto& y : ru) hit += x == y;
    }
    double p = gu.empty() ? 0.0 : static_cast<double>(hit) / gu.size();
    double rec = static_cast<double>(hit) / ru.size();
    double f = p + rec == 0 ? 0.0 : 2 * p * rec / (p + rec);
    metrics::EndpointSet gs, rs;
    for (const auto& x : gu) gs.add(x.substr(0, x.find(' ')), x.substr(x.find(' ') + 1));
    for (const auto& x : ru) rs.add(x.substr(0, x.find(' ')), x.substr(x.find(' ') + 1));
    auto got = metrics::api_f1(gs, rs);
    agree += std::abs(got.precision - p) <= 1e-12 && std::abs(got.recall - rec) <= 1e-12 &&
             std::abs(got.f1 - f) <= 1e-12;
  }
  detail += "; oracle " + std::to_string(agree) + "/100";
  return {f1_ok && e2e_ok && agree == 100, detail};
}

Outcome determinism() {
  bool ok = true;
  std::string detail;
  for (const auto& name : fixture_names()) {
    std::uint64_t input_before = slsmig::testing::tree_hash(fixture(name));
    TempDir a, b;
    int ea = slsmig::testing::run_cli({"--project", fixture(name).string(), "--out", (a / "out").string(), "all"});
    int eb = slsmig::testing::run_cli({"--project", fixture(name).string(), "--out", (b / "out").string(), "all"});
    std::uint64_t ha = slsmig::testing::tree_hash(a / "out");
    std::uint64_t hb = slsmig::testing::tree_hash(b / "out");
    std::uint64_t input_after = slsmig::testing::tree_hash(fixture(name));
    bool same = ea == 0 && eb == 0 && ha == hb &&
                slsmig::testing::snapshot_tree(a / "out") == slsmig::testing::snapshot_tree(b / "out") &&
                input_before == input_after;
    ok = ok && same;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ha));
    detail += name + " " + buf + (same ? "" : " DIFFERS") + "; ";
  }
  return {ok, detail};
}

std::string random_invalid(std::mt19937& rng, ws::Validation v) {
  static const std::vector<std::string> python = {"def f(:\n    pass\n", "x = (1,\n", "if True\n    y = 2\n",
                                                   "class :\n", "return = 5\n", "print('a'\n"};
  static const std::vector<std::string> json = {"{", "{\"a\": }", "[1, 2,", "{'a': 1}", "nul", "{\"a\" 1}"};
  static const std::vector<std::string> yaml = {"a: [1, 2\n", "key: {x: 1\n", "- a\nb: c\n", "a: 'unterminated\n",
                                                "\"a\n", "a:\n  - b\n c: d\n"};
  const auto& pool = v == ws::Validation::kPython ? python : v == ws::Validation::kJson ? json : yaml;
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> pad(0, 5);
  std::string prefix;
  for (int i = pad(rng); i > 0; --i) prefix += v == ws::Validation::kJson ? " " : "\n";
  return prefix + pool[pick(rng)];
}

Outcome tool_contracts() {
  TempDir dir;
  std::mt19937 rng(7);
  int trials = 0;
  int intact = 0;
  const ws::Validation modes[] = {ws::Validation::kPython, ws::Validation::kJson, ws::Validation::kYaml};
  for (int i = 0; i < 90; ++i) {
    ws::Validation v = modes[i % 3];
    fs::path target = dir / ("target" + std::to_string(i % 6));
    bool existed = i % 2 == 0;
    std::string original = "original-" + std::to_string(i) + "\n";
    if (existed) {
      write_text_atomic(target, original);
    } else {
      fs::remove(target);
    }
    auto receipt = ws::write_file(target, random_invalid(rng, v), v);
    ++trials;
    bool same = existed ? fs::exists(target) && read_text_file(target) == original : !fs::exists(target);
    intact += !receipt.ok && same;
  }
  auto lines = [](int n) {
    std::string s;
    for (int i = 1; i <= n; ++i) s += "line " + std::to_string(i) + "\n";
    return s;
  };
  write_text_atomic(dir / "500.txt", lines(500));
  write_text_atomic(dir / "501.txt", lines(501));
  auto r500 = ws::read_file(dir / "500.txt");
  auto r501 = ws::read_file(dir / "501.txt");
  bool trunc_ok = !r500.truncated && r501.truncated && split_lines(r501.content).size() == 500 &&
                  r501.total_lines == 501 && !r501.warning.empty();
  return {intact == trials && trunc_ok, std::to_string(intact) + "/" + std::to_string(trials) +
                                            " rejected writes left targets intact; truncation at 501: " +
                                            (trunc_ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"analyzer fidelity", analyzer_fidelity},
      {"flag correctness", flag_correctness},
      {"planner partition", planner_partition},
      {"communication rules", communication_rules},
      {"round-trip", round_trip},
      {"mutation suite", mutation_suite},
      {"lint taxonomy", lint_taxonomy},
      {"metric exactness", metric_exactness},
      {"determinism", determinism},
      {"tool contracts", tool_contracts},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << (i + 1) << " [PRIMARY] " << criteria[i].first << ": " << (o.pass ? "PASS" : "FAIL")
              << " -- " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
