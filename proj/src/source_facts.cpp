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

#include "slsmig/source_facts.hpp"

#include <algorithm>
#include <iostream>
#include <regex>

#include "facts_internal.hpp"

namespace slsmig::facts {

const char* language_name(Language lang) {
  return lang == Language::kPython ? "python" : "javascript";
}

Language language_from_name(std::string_view name) {
  if (name == "python") return Language::kPython;
  if (name == "javascript") return Language::kJavaScript;
  throw Error(ErrorCode::kInvalidArgument, "unknown language: " + std::string(name));
}

const char* tag_name(Tag tag) {
  switch (tag) {
    case Tag::kAwsSdk:
      return "AWS_SDK";
    case Tag::kDynamoDb:
      return "DynamoDB";
    case Tag::kAuth:
      return "Auth";
    case Tag::kFileUpload:
      return "FileUpload";
  }
  return "";
}

namespace {

const std::set<std::string>& skipped_dirs() {
  static const std::set<std::string> dirs = {"node_modules", ".git", "__pycache__", "venv", ".venv",
                                             "env",          "dist", "build",       "coverage", ".tox"};
  return dirs;
}

bool is_python(const std::string& ext) { return ext == ".py"; }

bool is_js(const std::string& ext) {
  return ext == ".js" || ext == ".mjs" || ext == ".cjs" || ext == ".ts" || ext == ".jsx" || ext == ".tsx";
}

}  // namespace

ProjectSnapshot load_project(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kPrecondition, "project root is not a directory: " + root.string());
  }
  ProjectSnapshot snap;
  snap.root = fs::canonical(root);
  std::map<std::string, std::string> py;
  std::map<std::string, std::string> js;
  for (auto it = fs::recursive_directory_iterator(snap.root); it != fs::recursive_directory_iterator(); ++it) {
    const std::string name = it->path().filename().string();
    if (it->is_directory()) {
      if (skipped_dirs().count(name)) it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    std::string ext = it->path().extension().string();
    std::string rel = relative_path(it->path(), snap.root);
    if (is_python(ext)) {
      py[rel] = read_text_file(it->path());
    } else if (is_js(ext) && !ends_with(name, ".min.js") && !ends_with(name, ".d.ts")) {
      js[rel] = read_text_file(it->path());
    }
  }
  if (py.empty() && js.empty()) {
    throw Error(ErrorCode::kPrecondition, "no Python or JavaScript source files under " + root.string());
  }
  if (py.size() >= js.size()) {
    snap.language = Language::kPython;
    snap.files = std::move(py);
  } else {
    snap.language = Language::kJavaScript;
    snap.files = std::move(js);
  }
  return snap;
}

namespace detail {

std::unique_ptr<FrontEnd> make_frontend(const ProjectSnapshot& project) {
  return project.language == Language::kPython ? make_python_frontend(project) : make_js_frontend(project);
}

std::string parent_dir(const std::string& rel) {
  auto pos = rel.rfind('/');
  return pos == std::string::npos ? std::string() : rel.substr(0, pos);
}

std::optional<std::string> normalize_rel(const std::string& rel) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= rel.size()) {
    std::size_t slash = rel.find('/', start);
    std::string part = rel.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (part == "..") {
      if (parts.empty()) return std::nullopt;
      parts.pop_back();
    } else if (!part.empty() && part != ".") {
      parts.push_back(part);
    }
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "/") + p;
  return out;
}

std::string to_template_path(const std::string& path) {
  static const std::regex flask_param(R"(<(?:[A-Za-z_]+:)?([A-Za-z_][A-Za-z0-9_]*)>)");
  static const std::regex express_param(R"(:([A-Za-z_][A-Za-z0-9_]*)\??)");
  std::string out = std::regex_replace(path, flask_param, "{$1}");
  out = std::regex_replace(out, express_param, "{$1}");
  if (out.empty() || out[0] != '/') out = "/" + out;
  return out;
}

void sort_entry_points(std::vector<EntryPoint>& eps) {
  std::sort(eps.begin(), eps.end(), [](const EntryPoint& a, const EntryPoint& b) {
    return std::tie(a.file, a.line, a.method, a.path) < std::tie(b.file, b.line, b.method, b.path);
  });
  eps.erase(std::unique(eps.begin(), eps.end(),
                        [](const EntryPoint& a, const EntryPoint& b) {
                          return a.file == b.file && a.line == b.line && a.method == b.method && a.path == b.path;
                        }),
            eps.end());
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
  auto key = [](const Diagnostic& d) { return std::tie(d.file, d.line, d.code, d.message, d.level); };
  std::sort(diags.begin(), diags.end(), [&](const Diagnostic& a, const Diagnostic& b) { return key(a) < key(b); });
  diags.erase(std::unique(diags.begin(), diags.end(),
                          [&](const Diagnostic& a, const Diagnostic& b) { return key(a) == key(b); }),
              diags.end());
}

}  // namespace detail

std::vector<EntryPoint> extract_entry_points(const ProjectSnapshot& project, const FrameworkConfig& config,
                                             std::vector<Diagnostic>* diagnostics) {
  auto fe = detail::make_frontend(project);
  auto eps = fe->entry_points(config);
  detail::sort_entry_points(eps);
  if (diagnostics) {
    diagnostics->insert(diagnostics->end(), fe->diagnostics().begin(), fe->diagnostics().end());
  }
  return eps;
}

std::vector<EntryPoint> extract_entry_points(const std::string& file, const std::string& source, Language lang,
                                             const FrameworkConfig& config) {
  ProjectSnapshot snap;
  snap.language = lang;
  snap.files[file] = source;
  return extract_entry_points(snap, config, nullptr);
}

FileTag tag_file(const std::string& file, const std::string& source) {
  using std::regex_constants::icase;
  static const std::regex aws_sdk(
      R"((^|\n)\s*(import\s+(boto3|botocore|aiobotocore)|from\s+(boto3|botocore|aiobotocore)[\s.])|require\(\s*['"](aws-sdk|@aws-sdk/)|from\s+['"](aws-sdk|@aws-sdk/))");
  static const std::regex dynamodb(
      R"(dynamodb|\b(put_item|get_item|update_item|delete_item|batch_write_item|batch_get_item|transact_write_items)\b|DocumentClient|\b(PutCommand|GetCommand|QueryCommand|ScanCommand|UpdateCommand|DeleteCommand)\b)",
      icase);
  static const std::regex auth(
      R"(jwt|jsonwebtoken|login_required|access_token|auth_token|bearer|verify_token|passport)", icase);
  static const std::regex upload(
      R"(multipart|\bmulter\b|FileStorage|request\.files|req\.files?\b|upload_file|UploadFile|secure_filename|formidable|busboy)");
  FileTag tag;
  tag.file = file;
  if (std::regex_search(source, aws_sdk)) tag.tags.insert(Tag::kAwsSdk);
  if (std::regex_search(source, dynamodb)) tag.tags.insert(Tag::kDynamoDb);
  if (std::regex_search(source, auth)) tag.tags.insert(Tag::kAuth);
  if (std::regex_search(source, upload)) tag.tags.insert(Tag::kFileUpload);
  return tag;
}

std::vector<CallEdge> build_call_graph(const ProjectSnapshot& project, std::vector<Diagnostic>* diagnostics) {
  auto fe = detail::make_frontend(project);
  auto edges = fe->call_edges();
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (diagnostics) {
    diagnostics->insert(diagnostics->end(), fe->diagnostics().begin(), fe->diagnostics().end());
  }
  return edges;
}

std::map<std::string, std::vector<CallEdge>> derive_entry_dependencies(const std::vector<CallEdge>& edges,
                                                                       const std::vector<EntryPoint>& entry_points) {
  std::map<std::string, std::vector<CallEdge>> out;
  for (const auto& ep : entry_points) {
    auto& list = out[ep.key()];
    const std::string& handler_file = ep.handler_file.empty() ? ep.file : ep.handler_file;
    for (const auto& e : edges) {
      if (e.caller_file == handler_file && e.caller_function == ep.handler_function) list.push_back(e);
    }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return out;
}

int schema_tier(const std::string& file) {
  std::string name = fs::path(file).stem().string();
  std::string lower = to_lower(name);
  std::string compact;
  for (char c : lower) {
    if (c != '_' && c != '-' && c != '.') compact.push_back(c);
  }
  if (lower != "__init__") {
    static const char* kInit[] = {"initdb", "createtable", "seed", "migrat", "bootstrap", "setupdb", "inittable"};
    for (const char* k : kInit) {
      if (compact.find(k) != std::string::npos) return 1;
    }
  }
  static const std::set<std::string> kConfig = {"db",     "database", "databases", "models", "model",
                                                "schema", "schemas",  "tables",    "table",  "dynamo",
                                                "dynamodb"};
  if (kConfig.count(compact)) return 2;
  std::string dir = detail::parent_dir(file);
  std::string last_dir = dir.substr(dir.rfind('/') == std::string::npos ? 0 : dir.rfind('/') + 1);
  last_dir = to_lower(last_dir);
  if (last_dir == "models" || last_dir == "db" || last_dir == "database") return 2;
  return 3;
}

std::vector<std::string> locate_dynamodb_schemas(const std::vector<FileTag>& file_tags) {
  std::vector<std::pair<int, std::string>> ranked;
  for (const auto& t : file_tags) {
    if (t.tags.count(Tag::kDynamoDb)) ranked.emplace_back(schema_tier(t.file), t.file);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) out.push_back(ranked[i].second);
  return out;
}

SymbolTable build_symbol_table(const ProjectSnapshot& project, std::vector<Diagnostic>* diagnostics) {
  auto fe = detail::make_frontend(project);
  SymbolTable table;
  table.files = fe->symbols();
  std::sort(table.files.begin(), table.files.end(),
            [](const FileSymbols& a, const FileSymbols& b) { return a.file < b.file; });
  if (diagnostics) {
    diagnostics->insert(diagnostics->end(), fe->diagnostics().begin(), fe->diagnostics().end());
  }
  return table;
}

Analysis analyze(const ProjectSnapshot& project, const FrameworkConfig& config) {
  auto fe = detail::make_frontend(project);
  Analysis a;
  AnalysisReport& r = a.report;
  r.project_root = project.root.generic_string();
  r.language = project.language;
  r.entry_points = fe->entry_points(config);
  detail::sort_entry_points(r.entry_points);
  for (const auto& [file, source] : project.files) r.file_tags.push_back(tag_file(file, source));
  auto edges = fe->call_edges();
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  r.entry_point_dependencies = derive_entry_dependencies(edges, r.entry_points);
  r.dynamodb_schema_candidates = locate_dynamodb_schemas(r.file_tags);
  a.symbols.files = fe->symbols();
  std::sort(a.symbols.files.begin(), a.symbols.files.end(),
            [](const FileSymbols& x, const FileSymbols& y) { return x.file < y.file; });
  r.diagnostics = fe->diagnostics();
  // Two methods on one path from different registrations collide on the key.
  std::map<std::string, int> seen;
  for (const auto& ep : r.entry_points) {
    if (++seen[ep.key()] == 2) {
      r.diagnostics.push_back({"warning", "duplicate-route", ep.file, ep.line,
                               "route " + ep.key() + " is registered more than once"});
    }
  }
  detail::sort_diagnostics(r.diagnostics);
  return a;
}

Analysis emit_analysis(const fs::path& project_root, const fs::path& out_dir, const FrameworkConfig& config) {
  ProjectSnapshot snap = load_project(project_root);
  Analysis a = analyze(snap, config);
  write_text_atomic(out_dir / "analysis_report.json", canonical_json(to_json(a.report)));
  write_text_atomic(out_dir / "symbol_table.json", canonical_json(to_json(a.symbols)));
  for (const auto& d : a.report.diagnostics) std::cerr << diagnostic_line(d) << "\n";
  return a;
}

Json to_json(const EntryPoint& ep) {
  Json j = {{"method", ep.method},
            {"path", ep.path},
            {"handler_function", ep.handler_function},
            {"file", ep.file},
            {"line", ep.line},
            {"auth_markers", ep.auth_markers}};
  j["handler_file"] = ep.handler_file.empty() ? ep.file : ep.handler_file;
  return j;
}

Json to_json(const CallEdge& e) {
  return {{"caller_file", e.caller_file},
          {"caller_function", e.caller_function},
          {"callee_file", e.callee_file},
          {"callee_function", e.callee_function},
          {"line", e.line},
          {"return_value_used", e.return_value_used},
          {"is_awaited", e.is_awaited}};
}

Json to_json(const Diagnostic& d) {
  return {{"level", d.level}, {"code", d.code}, {"file", d.file}, {"line", d.line}, {"message", d.message}};
}

Json to_json(const AnalysisReport& r) {
  Json eps = Json::array();
  for (const auto& ep : r.entry_points) eps.push_back(to_json(ep));
  Json tags = Json::array();
  for (const auto& t : r.file_tags) {
    Json names = Json::array();
    for (Tag tag : t.tags) names.push_back(tag_name(tag));
    tags.push_back({{"file", t.file}, {"tags", names}});
  }
  Json deps = Json::object();
  for (const auto& [key, edges] : r.entry_point_dependencies) {
    Json list = Json::array();
    for (const auto& e : edges) list.push_back(to_json(e));
    deps[key] = list;
  }
  Json diags = Json::array();
  for (const auto& d : r.diagnostics) diags.push_back(to_json(d));
  return {{"project_root", r.project_root},
          {"language", language_name(r.language)},
          {"entry_points", eps},
          {"file_tags", tags},
          {"entry_point_dependencies", deps},
          {"dynamodb_schema_candidates", r.dynamodb_schema_candidates},
          {"diagnostics", diags}};
}

Json to_json(const SymbolTable& table) {
  Json files = Json::object();
  for (const auto& f : table.files) {
    Json fns = Json::array();
    for (const auto& s : f.functions) {
      fns.push_back({{"name", s.name}, {"start_line", s.start_line}, {"end_line", s.end_line}, {"is_async", s.is_async}});
    }
    Json classes = Json::array();
    for (const auto& c : f.classes) {
      classes.push_back({{"name", c.name}, {"start_line", c.start_line}, {"end_line", c.end_line}});
    }
    Json imports = Json::array();
    for (const auto& i : f.imports) {
      Json rec = {{"name", i.name},
                  {"source_module", i.source_module},
                  {"imported", i.imported},
                  {"external", i.external},
                  {"line", i.line}};
      rec["resolved_path"] = i.external ? Json(nullptr) : Json(i.resolved_path);
      imports.push_back(rec);
    }
    files[f.file] = {{"functions", fns}, {"classes", classes}, {"imports", imports}};
  }
  return {{"files", files}};
}

CallEdge edge_from_json(const Json& j) {
  CallEdge e;
  e.caller_file = j.at("caller_file").get<std::string>();
  e.caller_function = j.at("caller_function").get<std::string>();
  e.callee_file = j.at("callee_file").get<std::string>();
  e.callee_function = j.at("callee_function").get<std::string>();
  e.line = j.value("line", 0);
  e.return_value_used = j.value("return_value_used", true);
  e.is_awaited = j.value("is_awaited", false);
  return e;
}

AnalysisReport report_from_json(const Json& j) {
  try {
    AnalysisReport r;
    r.project_root = j.value("project_root", std::string());
    r.language = language_from_name(j.at("language").get<std::string>());
    for (const auto& e : j.at("entry_points")) {
      EntryPoint ep;
      ep.method = e.at("method").get<std::string>();
      ep.path = e.at("path").get<std::string>();
      ep.handler_function = e.at("handler_function").get<std::string>();
      ep.file = e.at("file").get<std::string>();
      ep.line = e.value("line", 0);
      ep.auth_markers = e.value("auth_markers", std::vector<std::string>{});
      ep.handler_file = e.value("handler_file", ep.file);
      r.entry_points.push_back(std::move(ep));
    }
    static const std::map<std::string, Tag> kTags = {
        {"AWS_SDK", Tag::kAwsSdk}, {"DynamoDB", Tag::kDynamoDb}, {"Auth", Tag::kAuth}, {"FileUpload", Tag::kFileUpload}};
    for (const auto& t : j.value("file_tags", Json::array())) {
      FileTag ft;
      ft.file = t.at("file").get<std::string>();
      for (const auto& name : t.at("tags")) {
        auto it = kTags.find(name.get<std::string>());
        if (it != kTags.end()) ft.tags.insert(it->second);
      }
      r.file_tags.push_back(std::move(ft));
    }
    const Json deps = j.value("entry_point_dependencies", Json::object());
    for (const auto& [key, list] : deps.items()) {
      auto& out = r.entry_point_dependencies[key];
      for (const auto& e : list) out.push_back(edge_from_json(e));
    }
    r.dynamodb_schema_candidates = j.value("dynamodb_schema_candidates", std::vector<std::string>{});
    for (const auto& d : j.value("diagnostics", Json::array())) {
      r.diagnostics.push_back({d.value("level", std::string("warning")), d.value("code", std::string()),
                               d.value("file", std::string()), d.value("line", 0), d.value("message", std::string())});
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed analysis report: ") + e.what());
  }
}

std::string diagnostic_line(const Diagnostic& d) { return to_json(d).dump(); }

}  // namespace slsmig::facts
