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

#include "slsmig/metrics.hpp"

#include <iomanip>
#include <regex>
#include <sstream>

namespace slsmig::metrics {

std::string normalize_path(const std::string& path) {
  static const std::regex brace(R"(\{[^}/]*\})");
  static const std::regex angle(R"(<[^>/]*>)");
  static const std::regex colon(R"((^|/):[A-Za-z_][A-Za-z0-9_]*)");
  std::string p = std::regex_replace(path, brace, "{}");
  p = std::regex_replace(p, angle, "{}");
  p = std::regex_replace(p, colon, "$1{}");
  if (p.empty() || p[0] != '/') p = "/" + p;
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  return p;
}

void EndpointSet::add(const std::string& method, const std::string& path) {
  endpoints.emplace(to_upper(method), normalize_path(path));
}

EndpointSet endpoints_from_template(const sam::Template& t) {
  EndpointSet s;
  s.source = "generated";
  for (const auto* r : t.of_kind(sam::ResourceKind::kFunction)) {
    if (!r->properties.contains("Events") || !r->properties["Events"].is_object()) continue;
    for (const auto& [name, ev] : r->properties["Events"].items()) {
      if (!ev.is_object()) continue;
      std::string type = ev.value("Type", std::string());
      if (type != "Api" && type != "HttpApi") continue;
      if (!ev.contains("Properties") || !ev["Properties"].is_object()) continue;
      const auto& p = ev["Properties"];
      if (!p.contains("Path") || !p["Path"].is_string() || !p.contains("Method") || !p["Method"].is_string()) continue;
      s.add(p["Method"].get<std::string>(), p["Path"].get<std::string>());
    }
  }
  return s;
}

EndpointSet endpoints_from_report(const facts::AnalysisReport& report, const std::vector<std::string>& auth_paths) {
  EndpointSet s;
  s.source = "reference";
  for (const auto& e : report.entry_points) {
    if (planner::is_auth_path(e.path, auth_paths)) continue;
    s.add(e.method, e.path);
  }
  return s;
}

EndpointSet endpoints_from_json(const Json& j, const std::string& source) {
  EndpointSet s;
  s.source = source;
  const Json& list = j.is_object() ? j.at("endpoints") : j;
  if (!list.is_array()) throw Error(ErrorCode::kParse, "endpoint list must be an array");
  for (const auto& e : list) {
    if (e.is_string()) {
      std::string text = trim(e.get<std::string>());
      auto sp = text.find(' ');
      if (sp == std::string::npos) throw Error(ErrorCode::kParse, "endpoint '" + text + "' is not 'METHOD /path'");
      s.add(text.substr(0, sp), trim(text.substr(sp + 1)));
    } else if (e.is_object() && e.contains("method") && e.contains("path")) {
      s.add(e["method"].get<std::string>(), e["path"].get<std::string>());
    } else {
      throw Error(ErrorCode::kParse, "malformed endpoint entry " + e.dump());
    }
  }
  return s;
}

double harmonic_mean(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

namespace {

Coverage from_counts(std::size_t g, std::size_t r, std::size_t m) {
  Coverage c;
  c.generated = g;
  c.reference = r;
  c.matched = m;
  c.precision = g == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(g);
  c.recall = r == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(r);
  c.f1 = harmonic_mean(c.precision, c.recall);
  return c;
}

}  // namespace

Coverage api_f1(const EndpointSet& g, const EndpointSet& r) {
  if (r.endpoints.empty()) throw Error(ErrorCode::kInvalidArgument, "reference endpoint set is empty");
  std::size_t m = 0;
  for (const auto& e : g.endpoints) m += r.endpoints.count(e);
  return from_counts(g.endpoints.size(), r.endpoints.size(), m);
}

CoverageSummary api_f1(const std::vector<AppCoverage>& apps) {
  if (apps.empty()) throw Error(ErrorCode::kInvalidArgument, "no applications to score");
  CoverageSummary s;
  std::size_t g = 0, r = 0, m = 0;
  for (const auto& a : apps) {
    Coverage c = api_f1(a.generated, a.reference);
    g += c.generated;
    r += c.reference;
    m += c.matched;
    s.macro.precision += c.precision;
    s.macro.recall += c.recall;
    s.macro.f1 += c.f1;
    s.per_app.emplace_back(a.app, c);
  }
  s.micro = from_counts(g, r, m);
  double n = static_cast<double>(apps.size());
  s.macro.generated = g;
  s.macro.reference = r;
  s.macro.matched = m;
  s.macro.precision /= n;
  s.macro.recall /= n;
  s.macro.f1 /= n;
  return s;
}

std::size_t anti_pattern_count(const EndpointSet& g, const EndpointSet& r, const std::vector<std::string>& auth_paths) {
  std::size_t n = 0;
  for (const auto& e : g.endpoints) {
    if (!r.endpoints.count(e) && planner::is_auth_path(e.second, auth_paths)) ++n;
  }
  return n;
}

const std::set<std::string>& default_categories() {
  static const std::set<std::string> c = {"core", "robustness"};
  return c;
}

PassRate e2epr(const std::vector<TestResult>& results, const std::set<std::string>& categories) {
  std::map<std::string, std::pair<int, int>> per_app;  // app -> (passed, total)
  std::vector<std::string> order;
  for (const auto& t : results) {
    if (t.total < 0 || t.passed < 0 || t.passed > t.total) {
      throw Error(ErrorCode::kInvalidArgument, "app " + t.app + ": passed must be within [0, total]");
    }
    if (!per_app.count(t.app)) order.push_back(t.app);
    auto& slot = per_app[t.app];
    if (!categories.empty() && !categories.count(t.category)) continue;
    slot.first += t.passed;
    slot.second += t.total;
  }
  PassRate pr;
  double sum = 0;
  for (const auto& app : order) {
    auto [passed, total] = per_app[app];
    if (total == 0) {
      pr.excluded.push_back(app);
      continue;
    }
    double rate = static_cast<double>(passed) / static_cast<double>(total);
    pr.per_app.emplace_back(app, rate);
    pr.passed += passed;
    pr.total += total;
    sum += rate;
  }
  if (pr.per_app.empty()) throw Error(ErrorCode::kInvalidArgument, "no test results remain after category filtering");
  pr.micro = static_cast<double>(pr.passed) / static_cast<double>(pr.total);
  pr.macro = sum / static_cast<double>(pr.per_app.size());
  return pr;
}

std::vector<TestResult> results_from_json(const Json& j) {
  std::vector<TestResult> out;
  auto one = [&](const Json& e) {
    try {
      out.push_back({e.at("app").get<std::string>(), e.at("category").get<std::string>(), e.at("total").get<int>(),
                     e.at("passed").get<int>()});
    } catch (const Json::exception& ex) {
      throw Error(ErrorCode::kParse, "malformed test result: " + std::string(ex.what()));
    }
  };
  if (j.is_array()) {
    for (const auto& e : j) one(e);
  } else if (j.is_object() && j.contains("results")) {
    for (const auto& e : j["results"]) one(e);
  } else {
    one(j);
  }
  return out;
}

namespace {

Json coverage_json(const Coverage& c) {
  return {{"generated", c.generated}, {"reference", c.reference}, {"matched", c.matched},
          {"precision", c.precision}, {"recall", c.recall},       {"f1", c.f1}};
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(3) << v;
  return o.str();
}

}  // namespace

Json to_json(const ScoreCard& card) {
  Json j = Json::object();
  if (card.coverage) {
    Json apps = Json::object();
    for (const auto& [app, c] : card.coverage->per_app) apps[app] = coverage_json(c);
    j["api_coverage"] = {{"micro", coverage_json(card.coverage->micro)},
                         {"macro",
                          {{"precision", card.coverage->macro.precision},
                           {"recall", card.coverage->macro.recall},
                           {"f1", card.coverage->macro.f1}}},
                         {"per_app", apps}};
    j["anti_pattern_count"] = card.anti_patterns;
  }
  if (card.pass_rate) {
    Json apps = Json::object();
    for (const auto& [app, rate] : card.pass_rate->per_app) apps[app] = rate;
    j["e2epr"] = {{"micro", card.pass_rate->micro},
                  {"macro", card.pass_rate->macro},
                  {"passed", card.pass_rate->passed},
                  {"total", card.pass_rate->total},
                  {"per_app", apps},
                  {"excluded", card.pass_rate->excluded}};
  }
  j["warnings"] = card.warnings;
  return j;
}

std::string to_text(const ScoreCard& card) {
  std::ostringstream o;
  if (card.coverage) {
    o << std::left << std::setw(20) << "app" << std::right << std::setw(6) << "|G|" << std::setw(6) << "|R|"
      << std::setw(6) << "hit" << std::setw(10) << "precision" << std::setw(8) << "recall" << std::setw(8) << "f1"
      << "\n";
    auto row = [&](const std::string& name, const Coverage& c, bool counts) {
      o << std::left << std::setw(20) << name << std::right;
      if (counts) {
        o << std::setw(6) << c.generated << std::setw(6) << c.reference << std::setw(6) << c.matched;
      } else {
        o << std::setw(18) << "";
      }
      o << std::setw(10) << fmt(c.precision) << std::setw(8) << fmt(c.recall) << std::setw(8) << fmt(c.f1) << "\n";
    };
    for (const auto& [app, c] : card.coverage->per_app) row(app, c, true);
    row("micro", card.coverage->micro, true);
    row("macro", card.coverage->macro, false);
    o << "anti-patterns (redundant auth endpoints): " << card.anti_patterns << "\n";
  }
  if (card.pass_rate) {
    if (card.coverage) o << "\n";
    o << std::left << std::setw(20) << "app" << std::right << std::setw(8) << "pass" << "\n";
    for (const auto& [app, rate] : card.pass_rate->per_app) {
      o << std::left << std::setw(20) << app << std::right << std::setw(8) << fmt(rate) << "\n";
    }
    o << std::left << std::setw(20) << "E2EPR micro" << std::right << std::setw(8) << fmt(card.pass_rate->micro)
      << "\n";
    o << std::left << std::setw(20) << "E2EPR macro" << std::right << std::setw(8) << fmt(card.pass_rate->macro)
      << "\n";
  }
  for (const auto& w : card.warnings) o << "warning: " << w << "\n";
  return o.str();
}

}  // namespace slsmig::metrics
