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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slsmig/common.hpp"

// Structural facts about a monolith source tree: HTTP entry points, file
// tags, the cross-file call graph and DynamoDB schema locations.
namespace slsmig::facts {

enum class Language { kPython, kJavaScript };

const char* language_name(Language lang);
Language language_from_name(std::string_view name);

enum class Tag { kAwsSdk, kDynamoDb, kAuth, kFileUpload };

const char* tag_name(Tag tag);

struct EntryPoint {
  std::string method;
  std::string path;
  std::string handler_function;
  std::string file;  // route-registration file
  int line = 0;      // route-registration line
  std::vector<std::string> auth_markers;
  // File that defines the handler; equals `file` unless the handler is imported.
  std::string handler_file;

  std::string key() const { return method + " " + path; }
};

struct FileTag {
  std::string file;
  std::set<Tag> tags;
};

struct CallEdge {
  std::string caller_file;
  std::string caller_function;
  std::string callee_file;
  std::string callee_function;
  int line = 0;
  bool return_value_used = true;
  bool is_awaited = false;

  auto tie() const {
    return std::tie(caller_file, line, caller_function, callee_file, callee_function,
                    return_value_used, is_awaited);
  }
  bool operator==(const CallEdge& o) const { return tie() == o.tie(); }
  bool operator<(const CallEdge& o) const { return tie() < o.tie(); }
};

struct Diagnostic {
  std::string level;  // "warning" | "error"
  std::string code;
  std::string file;
  int line = 0;
  std::string message;
};

struct FunctionSymbol {
  std::string name;
  int start_line = 0;
  int end_line = 0;
  bool is_async = false;
};

struct ClassSymbol {
  std::string name;
  int start_line = 0;
  int end_line = 0;
};

struct ImportRecord {
  std::string name;           // locally bound name
  std::string source_module;  // module specifier as written
  std::string imported;       // original symbol name ("" for whole-module imports)
  std::string resolved_path;  // project-relative file, empty when external
  bool external = true;
  int line = 0;
};

struct FileSymbols {
  std::string file;
  std::vector<FunctionSymbol> functions;
  std::vector<ClassSymbol> classes;
  std::vector<ImportRecord> imports;
};

struct SymbolTable {
  std::vector<FileSymbols> files;
};

struct AnalysisReport {
  std::string project_root;
  Language language = Language::kPython;
  std::vector<EntryPoint> entry_points;
  std::vector<FileTag> file_tags;
  std::map<std::string, std::vector<CallEdge>> entry_point_dependencies;
  std::vector<std::string> dynamodb_schema_candidates;
  std::vector<Diagnostic> diagnostics;
};

// Route-shape configuration for both supported frameworks.
struct FrameworkConfig {
  // Decorator / middleware names recorded as auth markers when present.
  std::set<std::string> auth_markers = {"login_required", "warehouse_required", "jwt_required",
                                        "requires_auth", "authenticate"};
  // Flask decorator attributes that register routes.
  std::set<std::string> flask_route_attrs = {"route", "get", "post", "put", "patch", "delete"};
  // Receivers always treated as an app/router even without a visible constructor.
  std::set<std::string> default_receivers = {"app", "router"};
  // Express router methods that register routes.
  std::set<std::string> express_methods = {"get", "post", "put", "patch", "delete", "all"};
};

// In-memory copy of every analyzable source file, keyed by relative path.
struct ProjectSnapshot {
  fs::path root;
  Language language = Language::kPython;
  std::map<std::string, std::string> files;
};

// Loads the tree, detecting the language. Throws kPrecondition when the
// root is missing or contains no source files.
ProjectSnapshot load_project(const fs::path& root);

// Per-file facts produced by the language front ends.
struct FileFacts {
  std::string file;
  bool parsed = true;
  FileSymbols symbols;
  std::vector<Diagnostic> diagnostics;
};

std::vector<EntryPoint> extract_entry_points(const ProjectSnapshot& project,
                                             const FrameworkConfig& config,
                                             std::vector<Diagnostic>* diagnostics);

// Single-file convenience used by tests: the file is analysed as a project
// containing only itself.
std::vector<EntryPoint> extract_entry_points(const std::string& file, const std::string& source,
                                             Language lang, const FrameworkConfig& config);

FileTag tag_file(const std::string& file, const std::string& source);

std::vector<CallEdge> build_call_graph(const ProjectSnapshot& project,
                                       std::vector<Diagnostic>* diagnostics);

std::map<std::string, std::vector<CallEdge>> derive_entry_dependencies(
    const std::vector<CallEdge>& edges, const std::vector<EntryPoint>& entry_points);

// 1 = initialization script, 2 = database configuration module, 3 = other.
int schema_tier(const std::string& file);

std::vector<std::string> locate_dynamodb_schemas(const std::vector<FileTag>& file_tags);

SymbolTable build_symbol_table(const ProjectSnapshot& project, std::vector<Diagnostic>* diagnostics);

struct Analysis {
  AnalysisReport report;
  SymbolTable symbols;
};

Analysis analyze(const ProjectSnapshot& project, const FrameworkConfig& config);

// Runs analyze() and writes analysis_report.json + symbol_table.json into
// out_dir. Throws kPrecondition for an empty project; nothing is written then.
Analysis emit_analysis(const fs::path& project_root, const fs::path& out_dir,
                       const FrameworkConfig& config);

Json to_json(const EntryPoint& ep);
Json to_json(const CallEdge& edge);
Json to_json(const Diagnostic& d);
Json to_json(const AnalysisReport& report);
Json to_json(const SymbolTable& table);

CallEdge edge_from_json(const Json& j);
AnalysisReport report_from_json(const Json& j);

// One JSON object per line, for the diagnostics stream.
std::string diagnostic_line(const Diagnostic& d);

}  // namespace slsmig::facts
