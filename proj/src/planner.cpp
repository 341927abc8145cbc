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

#include <algorithm>
#include <functional>
#include <regex>

#include "slsmig/blueprint.hpp"
#include "slsmig/naming.hpp"

namespace slsmig::planner {

const char* trigger_name(Trigger t) {
  switch (t) {
    case Trigger::kHttp:
      return "http";
    case Trigger::kSqs:
      return "sqs";
    case Trigger::kEventBridge:
      return "eventbridge";
  }
  return "http";
}

const char* communication_name(Communication c) {
  switch (c) {
    case Communication::kSyncInvoke:
      return "sync_invoke";
    case Communication::kSqs:
      return "sqs";
    case Communication::kEventBridge:
      return "eventbridge";
  }
  return "sync_invoke";
}

const LambdaSpec* Blueprint::find(const std::string& name) const {
  for (const auto& s : lambda_functions) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool Blueprint::is_python() const {
  return lambda_functions.empty() || lambda_functions.front().runtime == kPythonRuntime;
}

namespace {

using facts::CallEdge;
using Node = std::pair<std::string, std::string>;  // (file, function)

Node caller_of(const CallEdge& e) { return {e.caller_file, e.caller_function}; }
Node callee_of(const CallEdge& e) { return {e.callee_file, e.callee_function}; }

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

bool is_auth_path(const std::string& path, const std::vector<std::string>& auth_paths) {
  std::string p = path;
  while (p.size() > 1 && p.back() == '/') p.pop_back();
  for (std::string a : auth_paths) {
    while (a.size() > 1 && a.back() == '/') a.pop_back();
    if (a.empty()) continue;
    if (a[0] != '/') a = "/" + a;
    if (p == a || ends_with(p, a)) return true;
  }
  return false;
}

Classification classify_endpoints(const facts::AnalysisReport& report, const std::set<std::string>& auth_decorators,
                                  const std::vector<std::string>& auth_paths) {
  Classification c;
  for (const auto& ep : report.entry_points) {
    if (is_auth_path(ep.path, auth_paths)) {
      c.dropped.push_back({ep.method, ep.path, "cognito"});
      continue;
    }
    bool required = std::any_of(ep.auth_markers.begin(), ep.auth_markers.end(),
                                [&](const std::string& m) { return auth_decorators.count(m) > 0; });
    c.business.push_back({ep, required ? "required" : "none"});
  }
  return c;
}

std::vector<CallEdge> trace_deep_calls(const std::vector<CallEdge>& all_edges, const std::vector<CallEdge>& level1,
                                       int max_depth, std::vector<facts::Diagnostic>* diagnostics) {
  std::map<Node, std::vector<const CallEdge*>> out_edges;
  for (const auto& e : all_edges) out_edges[caller_of(e)].push_back(&e);
  std::set<CallEdge> result(level1.begin(), level1.end());
  std::map<Node, int> best_depth;
  std::set<Node> path;

  std::function<void(const Node&, int)> expand = [&](const Node& node, int depth) {
    if (depth >= max_depth) return;
    auto it = out_edges.find(node);
    if (it == out_edges.end()) return;
    for (const CallEdge* e : it->second) {
      result.insert(*e);
      Node next = callee_of(*e);
      if (path.count(next)) {
        if (diagnostics) {
          diagnostics->push_back({"warning", "call-cycle", e->caller_file, e->line,
                                  "call cycle through " + next.first + ":" + next.second});
        }
        continue;
      }
      auto bd = best_depth.find(next);
      if (bd != best_depth.end() && bd->second <= depth + 1) continue;
      best_depth[next] = depth + 1;
      path.insert(next);
      expand(next, depth + 1);
      path.erase(next);
    }
  };

  for (const auto& e : level1) {
    Node next = callee_of(e);
    auto bd = best_depth.find(next);
    if (bd != best_depth.end() && bd->second <= 1) continue;
    best_depth[next] = 1;
    path = {caller_of(e), next};
    expand(next, 1);
  }
  return {result.begin(), result.end()};
}

Communication select_communication(const std::vector<CallEdge>& relation,
                                   const std::map<std::string, std::string>& callee_domains) {
  if (relation.empty()) throw Error(ErrorCode::kInvalidArgument, "empty relation has no communication pattern");
  if (std::any_of(relation.begin(), relation.end(), [](const CallEdge& e) { return e.return_value_used; })) {
    return Communication::kSyncInvoke;
  }
  std::set<Node> consumers;
  std::set<std::string> domains;
  for (const auto& e : relation) {
    consumers.insert(callee_of(e));
    auto it = callee_domains.find(e.callee_file);
    domains.insert(it == callee_domains.end() ? e.callee_file : it->second);
  }
  if (consumers.size() >= 2 && domains.size() >= 2) return Communication::kEventBridge;
  return Communication::kSqs;
}

std::string domain_of(const std::string& file, const PlannerConfig& config) {
  std::string best_prefix;
  std::string best;
  for (const auto& [prefix, domain] : config.domain_map) {
    std::string p = prefix;
    while (!p.empty() && p.back() == '/') p.pop_back();
    bool match = file == p || starts_with(file, p + "/");
    if (match && p.size() >= best_prefix.size()) {
      best_prefix = p;
      best = domain;
    }
  }
  if (!best.empty()) return best;
  auto slash = file.find('/');
  return slash == std::string::npos ? std::string() : file.substr(0, slash);
}

std::vector<TableSpec> parse_table_declarations(const std::map<std::string, std::string>& files) {
  static const std::regex name_re(R"(TableName['"]?\s*[:=]\s*['"]([A-Za-z0-9_.\-]+)['"])");
  static const std::regex dict_re(R"(\{[^{}]*\})");
  static const std::regex attr_re(R"(AttributeName['"]?\s*[:=]\s*['"]([^'"]+)['"])");
  static const std::regex type_re(R"(AttributeType['"]?\s*[:=]\s*['"]([SNB])['"])");
  std::vector<TableSpec> out;
  std::set<std::string> seen;
  for (const auto& [file, text] : files) {
    std::vector<std::pair<std::size_t, std::string>> decls;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), name_re); it != std::sregex_iterator(); ++it) {
      decls.emplace_back(static_cast<std::size_t>(it->position(0)), (*it)[1].str());
    }
    for (std::size_t i = 0; i < decls.size(); ++i) {
      std::size_t begin = decls[i].first;
      std::size_t end = i + 1 < decls.size() ? decls[i + 1].first : std::min(text.size(), begin + 3000);
      // Attribute lists may precede TableName inside the same call.
      std::size_t look_back = i > 0 ? decls[i - 1].first + 1 : (begin > 600 ? begin - 600 : 0);
      std::size_t call_open = text.rfind("create_table", begin);
      if (call_open == std::string::npos || call_open < look_back) call_open = text.rfind("createTable", begin);
      if (call_open == std::string::npos || call_open < look_back) call_open = begin;
      std::string window = text.substr(call_open, end - call_open);
      TableSpec t;
      t.name = naming::slug(decls[i].second);
      if (t.name.empty() || seen.count(t.name)) continue;
      std::map<std::string, std::string> types;
      for (auto it = std::sregex_iterator(window.begin(), window.end(), dict_re); it != std::sregex_iterator(); ++it) {
        std::string dict = (*it)[0];
        std::smatch m;
        if (!std::regex_search(dict, m, attr_re)) continue;
        std::string attr = m[1];
        if (dict.find("HASH") != std::string::npos && t.partition_key.empty()) t.partition_key = attr;
        if (std::regex_search(dict, m, type_re)) types[attr] = m[1];
      }
      if (t.partition_key.empty()) t.partition_key = "id";
      if (types.count(t.partition_key)) t.type = types[t.partition_key];
      t.env_var = naming::table_env_var(t.name);
      seen.insert(t.name);
      out.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end(), [](const TableSpec& a, const TableSpec& b) { return a.name < b.name; });
  return out;
}

namespace {

struct TableRef {
  TableSpec spec;
  std::string declared;  // name as written in the monolith
};

std::vector<TableRef> discover_tables(const facts::AnalysisReport& report, const facts::ProjectSnapshot& project) {
  static const std::regex name_re(R"(TableName['"]?\s*[:=]\s*['"]([A-Za-z0-9_.\-]+)['"])");
  static const std::regex table_call(R"(\.Table\(\s*['"]([A-Za-z0-9_.\-]+)['"]\s*\))");
  std::map<std::string, std::string> candidates;
  for (const auto& f : report.dynamodb_schema_candidates) {
    auto it = project.files.find(f);
    if (it != project.files.end()) candidates[f] = it->second;
  }
  std::vector<TableRef> out;
  std::map<std::string, std::string> declared;  // slug -> declared
  for (const auto& [file, text] : candidates) {
    for (auto it = std::sregex_iterator(text.begin(), text.end(), name_re); it != std::sregex_iterator(); ++it) {
      declared.emplace(naming::slug((*it)[1].str()), (*it)[1].str());
    }
  }
  for (auto& t : parse_table_declarations(candidates)) out.push_back({t, declared[t.name]});
  if (!out.empty()) return out;
  // No explicit declarations: fall back to Table('Name') handles in tagged files.
  std::set<std::string> seen;
  for (const auto& tag : report.file_tags) {
    if (!tag.tags.count(facts::Tag::kDynamoDb)) continue;
    auto it = project.files.find(tag.file);
    if (it == project.files.end()) continue;
    const std::string& text = it->second;
    for (auto m = std::sregex_iterator(text.begin(), text.end(), table_call); m != std::sregex_iterator(); ++m) {
      std::string name = naming::slug((*m)[1].str());
      if (name.empty() || !seen.insert(name).second) continue;
      TableSpec t;
      t.name = name;
      t.partition_key = "id";
      t.env_var = naming::table_env_var(name);
      out.push_back({t, (*m)[1].str()});
    }
  }
  std::sort(out.begin(), out.end(), [](const TableRef& a, const TableRef& b) { return a.spec.name < b.spec.name; });
  return out;
}

bool mentions_quoted(const std::string& text, const std::string& name) {
  return text.find("'" + name + "'") != std::string::npos || text.find("\"" + name + "\"") != std::string::npos ||
         text.find("`" + name + "`") != std::string::npos;
}

// Files reachable from `start` over `edges` without crossing a boundary edge.
std::set<std::string> bundled_files(const Node& start, const std::vector<CallEdge>& edges,
                                    const std::set<CallEdge>& boundary) {
  std::map<Node, std::vector<const CallEdge*>> out_edges;
  for (const auto& e : edges) out_edges[caller_of(e)].push_back(&e);
  std::set<std::string> files = {start.first};
  std::set<Node> seen = {start};
  std::vector<Node> stack = {start};
  while (!stack.empty()) {
    Node n = stack.back();
    stack.pop_back();
    for (const CallEdge* e : out_edges[n]) {
      if (boundary.count(*e)) continue;
      files.insert(e->callee_file);
      if (seen.insert(callee_of(*e)).second) stack.push_back(callee_of(*e));
    }
  }
  return files;
}

struct Consumer {
  std::string name;
  Trigger trigger;
  Node node;
};

}  // namespace

Blueprint plan_blueprint(const facts::AnalysisReport& report, const facts::ProjectSnapshot& project,
                         const PlannerConfig& config, std::vector<facts::Diagnostic>* diagnostics) {
  Classification cls = classify_endpoints(report, config.auth_decorators, config.auth_paths);
  if (cls.business.empty()) {
    throw Error(ErrorCode::kPrecondition, "no business endpoints to migrate");
  }
  std::vector<facts::Diagnostic> diags;
  std::vector<CallEdge> edges = facts::build_call_graph(project, &diags);
  const std::string runtime = report.language == facts::Language::kPython ? kPythonRuntime : kNodeRuntime;

  std::set<std::string> infra_scripts;
  for (const auto& [file, text] : project.files) {
    if (facts::schema_tier(file) == 1) infra_scripts.insert(file);
  }
  std::map<std::string, std::set<facts::Tag>> tags;
  for (const auto& t : report.file_tags) tags[t.file] = t.tags;
  auto domain = [&](const std::string& file) { return domain_of(file, config); };
  auto service_domain = [&](const std::string& d) { return !d.empty() && !config.library_domains.count(d); };

  // Stable naming independent of report order.
  std::sort(cls.business.begin(), cls.business.end(), [](const Endpoint& a, const Endpoint& b) {
    return std::tie(a.entry.path, a.entry.method, a.entry.file, a.entry.line) <
           std::tie(b.entry.path, b.entry.method, b.entry.file, b.entry.line);
  });
  std::set<std::string> used_names;
  auto unique_name = [&](const std::string& base) {
    std::string name = base;
    for (int i = 2; used_names.count(name); ++i) name = base + "-" + std::to_string(i);
    used_names.insert(name);
    return name;
  };

  Blueprint bp;
  std::map<Node, std::string> handler_spec;
  std::vector<std::pair<LambdaSpec, Endpoint>> http;
  for (const auto& ep : cls.business) {
    LambdaSpec s;
    s.name = unique_name(naming::lambda_name(ep.entry.method, ep.entry.path));
    s.trigger = Trigger::kHttp;
    s.method = ep.entry.method;
    s.path = ep.entry.path;
    s.runtime = runtime;
    s.handler_function = ep.entry.handler_function;
    s.auth = ep.auth;
    std::string hfile = ep.entry.handler_file.empty() ? ep.entry.file : ep.entry.handler_file;
    handler_spec.emplace(Node{hfile, ep.entry.handler_function}, s.name);
    http.emplace_back(std::move(s), ep);
  }

  // Consumer naming: function slug, qualified by domain on collision.
  std::map<Node, std::string> consumer_slug;
  auto slug_for = [&](const Node& n) {
    auto it = consumer_slug.find(n);
    if (it != consumer_slug.end()) return it->second;
    std::string base = naming::slug(n.second);
    for (const auto& [other, s] : consumer_slug) {
      if (s == base && other != n) {
        base = naming::slug(domain(n.first) + "-" + n.second);
        break;
      }
    }
    consumer_slug[n] = base;
    return base;
  };

  std::map<std::string, QueueSpec> queues;
  std::map<std::string, RuleSpec> rules;
  std::map<std::pair<Node, Trigger>, std::string> consumers;
  std::vector<Consumer> consumer_list;
  auto consumer_for = [&](const Node& n, Trigger trigger) {
    auto key = std::make_pair(n, trigger);
    auto it = consumers.find(key);
    if (it != consumers.end()) return it->second;
    std::string suffix = trigger == Trigger::kSqs ? "-consumer" : "-subscriber";
    std::string name = unique_name(slug_for(n) + suffix);
    consumers[key] = name;
    consumer_list.push_back({name, trigger, n});
    return name;
  };

  std::map<std::string, std::set<std::string>> spec_files;
  for (auto& [spec, ep] : http) {
    std::string hfile = ep.entry.handler_file.empty() ? ep.entry.file : ep.entry.handler_file;
    Node self{hfile, ep.entry.handler_function};
    std::vector<CallEdge> level1;
    auto dep = report.entry_point_dependencies.find(ep.entry.key());
    if (dep != report.entry_point_dependencies.end()) {
      level1 = dep->second;
    } else {
      for (const auto& e : edges) {
        if (caller_of(e) == self) level1.push_back(e);
      }
    }
    std::vector<CallEdge> traced = trace_deep_calls(edges, level1, config.max_depth, &diags);
    const std::string producer_domain = domain(hfile);
    std::vector<CallEdge> sync_part;
    std::vector<CallEdge> async_part;
    for (const auto& e : traced) {
      std::string caller_d = domain(e.caller_file);
      std::string callee_d = domain(e.callee_file);
      bool from_producer = caller_d == producer_domain || !service_domain(caller_d);
      if (!from_producer || !service_domain(callee_d) || callee_d == producer_domain) continue;
      (e.return_value_used ? sync_part : async_part).push_back(e);
    }
    std::set<CallEdge> boundary;
    for (const auto& e : sync_part) {
      auto h = handler_spec.find(callee_of(e));
      if (h == handler_spec.end() || h->second == spec.name) continue;  // bundled helper
      push_unique(spec.invokes, h->second);
      boundary.insert(e);
    }
    if (!async_part.empty()) {
      std::map<std::string, std::string> callee_domains;
      for (const auto& e : async_part) callee_domains[e.callee_file] = domain(e.callee_file);
      Communication mode = select_communication(async_part, callee_domains);
      std::set<Node> targets;
      for (const auto& e : async_part) {
        targets.insert(callee_of(e));
        boundary.insert(e);
      }
      if (mode == Communication::kEventBridge) {
        RuleSpec rule;
        rule.name = spec.name + "-events";
        rule.producer = spec.name;
        rule.source = "app." + spec.name;
        rule.detail_type = naming::pascal(spec.name) + "Event";
        for (const auto& n : targets) rule.targets.push_back(consumer_for(n, Trigger::kEventBridge));
        std::sort(rule.targets.begin(), rule.targets.end());
        spec.publishes_to.push_back({"eventbridge_rule", rule.name});
        rules[rule.name] = rule;
      } else {
        for (const auto& n : targets) {
          std::string consumer = consumer_for(n, Trigger::kSqs);
          std::string qname = slug_for(n) + "-queue";
          auto& q = queues[qname];
          q.name = qname;
          q.consumer = consumer;
          q.env_var = naming::queue_env_var(qname);
          push_unique(q.producers, spec.name);
          push_unique(spec.publishes_to, AsyncTarget{"sqs_queue", qname});
        }
      }
    }
    std::set<std::string> files = bundled_files(self, traced, boundary);
    for (const auto& f : files) {
      if (f == hfile || !infra_scripts.count(f)) spec_files[spec.name].insert(f);
    }
  }

  for (auto& q : queues) std::sort(q.second.producers.begin(), q.second.producers.end());

  std::vector<LambdaSpec> specs;
  for (auto& [spec, ep] : http) specs.push_back(std::move(spec));
  for (const auto& c : consumer_list) {
    LambdaSpec s;
    s.name = c.name;
    s.trigger = c.trigger;
    s.runtime = runtime;
    s.handler_function = c.node.second;
    s.auth = "none";
    std::vector<CallEdge> level1;
    for (const auto& e : edges) {
      if (caller_of(e) == c.node) level1.push_back(e);
    }
    auto traced = trace_deep_calls(edges, level1, config.max_depth, &diags);
    for (const auto& f : bundled_files(c.node, traced, {})) {
      if (f == c.node.first || !infra_scripts.count(f)) spec_files[s.name].insert(f);
    }
    specs.push_back(std::move(s));
  }

  // Shared layer: non-handler modules bundled into enough Lambdas.
  std::set<std::string> handler_files;
  for (const auto& [node, name] : handler_spec) handler_files.insert(node.first);
  for (const auto& c : consumer_list) handler_files.insert(c.node.first);
  std::map<std::string, int> usage;
  for (const auto& [name, files] : spec_files) {
    for (const auto& f : files) {
      if (!handler_files.count(f)) ++usage[f];
    }
  }
  std::set<std::string> layer_files;
  for (const auto& [f, n] : usage) {
    if (n >= config.shared_layer_threshold) layer_files.insert(f);
  }

  std::vector<TableRef> tables = discover_tables(report, project);
  for (const auto& t : tables) bp.dynamodb_tables.push_back(t.spec);

  // Handler files are often shared by several routes; judge uploads there by
  // the handler's own body rather than the whole file.
  std::map<std::string, Node> spec_node;
  for (const auto& [node, name] : handler_spec) spec_node[name] = node;
  for (const auto& c : consumer_list) spec_node[c.name] = c.node;
  std::vector<facts::Diagnostic> ignored;
  std::map<Node, std::pair<int, int>> spans;
  for (const auto& fsyms : facts::build_symbol_table(project, &ignored).files) {
    for (const auto& f : fsyms.functions) spans[{fsyms.file, f.name}] = {f.start_line, f.end_line};
  }
  auto uploads_in = [&](const std::string& spec_name, const std::string& file) {
    auto n = spec_node.find(spec_name);
    if (n != spec_node.end() && n->second.first == file) {
      auto span = spans.find(n->second);
      auto text = project.files.find(file);
      if (span != spans.end() && text != project.files.end()) {
        std::string body;
        auto lines = split_lines(text->second);
        for (int i = span->second.first; i <= span->second.second && i <= static_cast<int>(lines.size()); ++i) {
          body += lines[static_cast<std::size_t>(i - 1)] + "\n";
        }
        return facts::tag_file(file, body).tags.count(facts::Tag::kFileUpload) > 0;
      }
    }
    return tags[file].count(facts::Tag::kFileUpload) > 0;
  };

  bool uploads = false;
  for (auto& s : specs) {
    const auto& files = spec_files[s.name];
    s.source_files.assign(files.begin(), files.end());
    s.uses_shared_layer = std::any_of(files.begin(), files.end(), [&](const auto& f) { return layer_files.count(f); });
    std::vector<std::string> env;
    for (const auto& t : tables) {
      bool touched = std::any_of(files.begin(), files.end(), [&](const std::string& f) {
        auto it = project.files.find(f);
        return it != project.files.end() && mentions_quoted(it->second, t.declared);
      });
      if (touched) env.push_back(t.spec.env_var);
    }
    bool upload = std::any_of(files.begin(), files.end(), [&](const std::string& f) { return uploads_in(s.name, f); });
    if (upload) {
      uploads = true;
      env.push_back(naming::bucket_env_var("uploads"));
    }
    bool events = false;
    for (const auto& p : s.publishes_to) {
      if (p.kind == "sqs_queue") {
        env.push_back(naming::queue_env_var(p.target_name));
      } else {
        events = true;
      }
    }
    if (events) env.push_back(naming::kEventBusEnvVar);
    std::sort(s.invokes.begin(), s.invokes.end());
    for (const auto& callee : s.invokes) {
      env.push_back(naming::function_env_var(callee));
      bp.lambda_invoke_permissions.push_back({s.name, callee});
    }
    for (const auto& v : env) push_unique(s.env_vars, v);
  }
  if (uploads) bp.s3_buckets.push_back({"uploads", naming::bucket_env_var("uploads")});

  std::sort(specs.begin(), specs.end(), [](const LambdaSpec& a, const LambdaSpec& b) { return a.name < b.name; });
  bp.lambda_functions = std::move(specs);
  for (auto& [name, q] : queues) bp.sqs_queues.push_back(q);
  for (auto& [name, r] : rules) bp.eventbridge_rules.push_back(r);
  std::sort(bp.lambda_invoke_permissions.begin(), bp.lambda_invoke_permissions.end(),
            [](const auto& a, const auto& b) { return std::tie(a.caller, a.callee) < std::tie(b.caller, b.callee); });

  bp.dropped_functions = cls.dropped;
  std::sort(bp.dropped_functions.begin(), bp.dropped_functions.end(), [](const auto& a, const auto& b) {
    return std::tie(a.path, a.method) < std::tie(b.path, b.method);
  });

  bool auth_tag = std::any_of(report.file_tags.begin(), report.file_tags.end(),
                              [](const facts::FileTag& t) { return t.tags.count(facts::Tag::kAuth) > 0; });
  bool auth_required = std::any_of(bp.lambda_functions.begin(), bp.lambda_functions.end(),
                                   [](const LambdaSpec& s) { return s.auth == "required"; });
  if (!bp.dropped_functions.empty() || auth_tag || auth_required) {
    bp.cognito = CognitoSpec{};
    bp.api_gateway.default_authorizer = bp.cognito->authorizer;
  }
  if (diagnostics) {
    diagnostics->insert(diagnostics->end(), diags.begin(), diags.end());
  }
  return bp;
}

Blueprint plan_blueprint(const facts::AnalysisReport& report, const PlannerConfig& config) {
  return plan_blueprint(report, facts::load_project(report.project_root), config);
}

Json to_json(const LambdaSpec& s) {
  Json publishes = Json::array();
  for (const auto& p : s.publishes_to) publishes.push_back({{"kind", p.kind}, {"target_name", p.target_name}});
  Json j = {{"name", s.name},
            {"trigger", trigger_name(s.trigger)},
            {"runtime", s.runtime},
            {"handler_function", s.handler_function},
            {"source_files", s.source_files},
            {"auth", s.auth},
            {"publishes_to", publishes},
            {"invokes", s.invokes},
            {"env_vars", s.env_vars},
            {"uses_shared_layer", s.uses_shared_layer}};
  if (s.trigger == Trigger::kHttp) {
    j["method"] = s.method;
    j["path"] = s.path;
  }
  return j;
}

Json to_json(const Blueprint& b) {
  Json fns = Json::array();
  for (const auto& s : b.lambda_functions) fns.push_back(to_json(s));
  Json tables = Json::array();
  for (const auto& t : b.dynamodb_tables) {
    tables.push_back({{"name", t.name}, {"partition_key", t.partition_key}, {"type", t.type}, {"env_var", t.env_var}});
  }
  Json buckets = Json::array();
  for (const auto& s3 : b.s3_buckets) buckets.push_back({{"name", s3.name}, {"env_var", s3.env_var}});
  Json cognito = nullptr;
  if (b.cognito) {
    cognito = {{"user_pool", b.cognito->user_pool},
               {"client", b.cognito->client},
               {"authorizer", b.cognito->authorizer}};
  }
  Json api = {{"name", b.api_gateway.name},
              {"stage_name", b.api_gateway.stage_name},
              {"cors", {{"allow_origin", b.api_gateway.cors_allow_origin},
                        {"allow_credentials", b.api_gateway.cors_allow_credentials}}}};
  api["default_authorizer"] = b.api_gateway.default_authorizer ? Json(*b.api_gateway.default_authorizer) : Json(nullptr);
  Json queues = Json::array();
  for (const auto& q : b.sqs_queues) {
    queues.push_back({{"name", q.name}, {"consumer", q.consumer}, {"producers", q.producers}, {"env_var", q.env_var}});
  }
  Json rules = Json::array();
  for (const auto& r : b.eventbridge_rules) {
    rules.push_back({{"name", r.name},
                     {"producer", r.producer},
                     {"source", r.source},
                     {"detail_type", r.detail_type},
                     {"targets", r.targets}});
  }
  Json perms = Json::array();
  for (const auto& p : b.lambda_invoke_permissions) perms.push_back({{"caller", p.caller}, {"callee", p.callee}});
  Json dropped = Json::array();
  for (const auto& d : b.dropped_functions) {
    dropped.push_back({{"method", d.method}, {"path", d.path}, {"reason", d.reason}});
  }
  return {{"lambda_functions", fns}, {"dynamodb_tables", tables},   {"s3_buckets", buckets},
          {"cognito", cognito},       {"api_gateway", api},         {"sqs_queues", queues},
          {"eventbridge_rules", rules}, {"lambda_invoke_permissions", perms}, {"dropped_functions", dropped}};
}

Blueprint blueprint_from_json(const Json& j) {
  try {
    static const std::vector<std::string> kKeys = {"lambda_functions", "dynamodb_tables", "s3_buckets",
                                                   "cognito",          "api_gateway",     "sqs_queues",
                                                   "eventbridge_rules", "lambda_invoke_permissions",
                                                   "dropped_functions"};
    for (const auto& k : kKeys) {
      if (!j.contains(k)) throw Error(ErrorCode::kParse, "blueprint is missing key: " + k);
    }
    Blueprint b;
    for (const auto& s : j.at("lambda_functions")) {
      LambdaSpec spec;
      spec.name = s.at("name").get<std::string>();
      std::string trig = s.at("trigger").get<std::string>();
      if (trig == "http") {
        spec.trigger = Trigger::kHttp;
      } else if (trig == "sqs") {
        spec.trigger = Trigger::kSqs;
      } else if (trig == "eventbridge") {
        spec.trigger = Trigger::kEventBridge;
      } else {
        throw Error(ErrorCode::kParse, "unknown trigger '" + trig + "' on " + spec.name);
      }
      spec.method = s.value("method", std::string());
      spec.path = s.value("path", std::string());
      spec.runtime = s.at("runtime").get<std::string>();
      spec.handler_function = s.value("handler_function", std::string());
      spec.source_files = s.value("source_files", std::vector<std::string>{});
      spec.auth = s.value("auth", std::string("none"));
      for (const auto& p : s.value("publishes_to", Json::array())) {
        spec.publishes_to.push_back({p.at("kind").get<std::string>(), p.at("target_name").get<std::string>()});
      }
      spec.invokes = s.value("invokes", std::vector<std::string>{});
      spec.env_vars = s.value("env_vars", std::vector<std::string>{});
      spec.uses_shared_layer = s.value("uses_shared_layer", false);
      b.lambda_functions.push_back(std::move(spec));
    }
    for (const auto& t : j.at("dynamodb_tables")) {
      TableSpec ts;
      ts.name = t.at("name").get<std::string>();
      ts.partition_key = t.value("partition_key", std::string("id"));
      ts.type = t.value("type", std::string("S"));
      ts.env_var = t.value("env_var", naming::table_env_var(ts.name));
      b.dynamodb_tables.push_back(std::move(ts));
    }
    for (const auto& s3 : j.at("s3_buckets")) {
      std::string name = s3.at("name").get<std::string>();
      b.s3_buckets.push_back({name, s3.value("env_var", naming::bucket_env_var(name))});
    }
    if (!j.at("cognito").is_null()) {
      CognitoSpec c;
      c.user_pool = j["cognito"].value("user_pool", c.user_pool);
      c.client = j["cognito"].value("client", c.client);
      c.authorizer = j["cognito"].value("authorizer", c.authorizer);
      b.cognito = c;
    }
    const Json& api = j.at("api_gateway");
    b.api_gateway.name = api.value("name", b.api_gateway.name);
    b.api_gateway.stage_name = api.value("stage_name", b.api_gateway.stage_name);
    if (api.contains("default_authorizer") && !api["default_authorizer"].is_null()) {
      b.api_gateway.default_authorizer = api["default_authorizer"].get<std::string>();
    }
    if (api.contains("cors")) {
      b.api_gateway.cors_allow_origin = api["cors"].value("allow_origin", b.api_gateway.cors_allow_origin);
      b.api_gateway.cors_allow_credentials = api["cors"].value("allow_credentials", false);
    }
    for (const auto& q : j.at("sqs_queues")) {
      QueueSpec qs;
      qs.name = q.at("name").get<std::string>();
      qs.consumer = q.at("consumer").get<std::string>();
      qs.producers = q.value("producers", std::vector<std::string>{});
      qs.env_var = q.value("env_var", naming::queue_env_var(qs.name));
      b.sqs_queues.push_back(std::move(qs));
    }
    for (const auto& r : j.at("eventbridge_rules")) {
      RuleSpec rs;
      rs.name = r.at("name").get<std::string>();
      rs.producer = r.at("producer").get<std::string>();
      rs.source = r.value("source", "app." + rs.producer);
      rs.detail_type = r.value("detail_type", naming::pascal(rs.producer) + "Event");
      rs.targets = r.at("targets").get<std::vector<std::string>>();
      b.eventbridge_rules.push_back(std::move(rs));
    }
    for (const auto& p : j.at("lambda_invoke_permissions")) {
      b.lambda_invoke_permissions.push_back({p.at("caller").get<std::string>(), p.at("callee").get<std::string>()});
    }
    for (const auto& d : j.at("dropped_functions")) {
      b.dropped_functions.push_back({d.at("method").get<std::string>(), d.at("path").get<std::string>(),
                                     d.value("reason", std::string("cognito"))});
    }
    return b;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed blueprint: ") + e.what());
  }
}

}  // namespace slsmig::planner
