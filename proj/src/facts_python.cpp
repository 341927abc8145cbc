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

// Python front end: routes, imports and call sites from the parsed AST.

#include <algorithm>
#include <map>
#include <set>

#include "facts_internal.hpp"
#include "slsmig/python_ast.hpp"

namespace slsmig::facts::detail {
namespace {

struct Binding {
  enum class Kind { kModule, kSymbol } kind = Kind::kModule;
  std::string file;    // resolved project file
  std::string symbol;  // for kSymbol
};

struct Module {
  std::string file;
  std::optional<Json> tree;
  std::map<std::string, Binding> bindings;              // local name -> binding
  std::map<std::string, std::string> dotted_modules;    // "pkg.mod" -> file
  std::vector<ImportRecord> imports;
};

// Flask application or Blueprint constructed in some module.
struct AppObject {
  bool blueprint = false;
  std::optional<std::string> ctor_prefix;
};

using ObjectKey = std::pair<std::string, std::string>;  // (file, variable)

const Json kNull;

const Json& field(const Json& node, const char* name) {
  if (!node.is_object()) return kNull;
  auto it = node.find(name);
  return it == node.end() ? kNull : *it;
}

std::string type_of(const Json& node) {
  const Json& t = field(node, "_t");
  return t.is_string() ? t.get<std::string>() : std::string();
}

int line_of(const Json& node) {
  const Json& l = field(node, "lineno");
  return l.is_number_integer() ? l.get<int>() : 0;
}

int end_line_of(const Json& node) {
  const Json& l = field(node, "end_lineno");
  return l.is_number_integer() ? l.get<int>() : line_of(node);
}

std::optional<std::string> string_constant(const Json& node) {
  if (type_of(node) != "Constant") return std::nullopt;
  const Json& v = field(node, "value");
  if (!v.is_string()) return std::nullopt;
  return v.get<std::string>();
}

// Dotted name of a Name/Attribute chain; empty for anything else.
std::string dotted_name(const Json& node) {
  std::string t = type_of(node);
  if (t == "Name") return field(node, "id").get<std::string>();
  if (t == "Attribute") {
    std::string base = dotted_name(field(node, "value"));
    if (base.empty()) return {};
    return base + "." + field(node, "attr").get<std::string>();
  }
  return {};
}

std::string last_component(const std::string& dotted) {
  auto pos = dotted.rfind('.');
  return pos == std::string::npos ? dotted : dotted.substr(pos + 1);
}

const Json* keyword(const Json& call, const char* name) {
  const Json& kws = field(call, "keywords");
  if (!kws.is_array()) return nullptr;
  for (const auto& kw : kws) {
    const Json& arg = field(kw, "arg");
    if (arg.is_string() && arg.get<std::string>() == name) return &field(kw, "value");
  }
  return nullptr;
}

const Json* positional(const Json& call, std::size_t index) {
  const Json& args = field(call, "args");
  if (!args.is_array() || index >= args.size()) return nullptr;
  return &args[index];
}

// Name used for auth-marker matching: `@a.b`, `@b`, `@b(...)` all yield "b".
std::string decorator_name(const Json& deco) {
  const Json& target = type_of(deco) == "Call" ? field(deco, "func") : deco;
  std::string dotted = dotted_name(target);
  return dotted.empty() ? std::string() : last_component(dotted);
}

std::string flask_join(const std::optional<std::string>& prefix, const std::string& rule) {
  if (!prefix) return rule;
  if (rule.empty()) return *prefix;
  std::string p = *prefix;
  while (!p.empty() && p.back() == '/') p.pop_back();
  std::size_t i = 0;
  while (i < rule.size() && rule[i] == '/') ++i;
  return p + "/" + rule.substr(i);
}

template <typename Fn>
void for_each_node(const Json& node, Fn&& fn) {
  if (node.is_object()) {
    if (node.contains("_t")) fn(node);
    for (const auto& [key, value] : node.items()) {
      if (value.is_structured()) for_each_node(value, fn);
    }
  } else if (node.is_array()) {
    for (const auto& item : node) for_each_node(item, fn);
  }
}

class PythonFrontEnd final : public FrontEnd {
 public:
  explicit PythonFrontEnd(const ProjectSnapshot& project) : project_(project) {
    for (const auto& [file, source] : project.files) {
      Module m;
      m.file = file;
      python::ParseResult parsed = python::parse(source, file);
      if (parsed.error) {
        warn("parse-error", file, parsed.error->line,
             "skipped unparseable Python file: " + parsed.error->message);
      } else {
        m.tree = std::move(parsed.tree);
      }
      modules_.emplace(file, std::move(m));
    }
    for (auto& [file, m] : modules_) {
      if (m.tree) collect_imports(m);
    }
  }

  std::vector<EntryPoint> entry_points(const FrameworkConfig& config) override {
    collect_app_objects();
    std::vector<EntryPoint> out;
    for (const auto& [file, m] : modules_) {
      if (!m.tree) continue;
      for_each_node(*m.tree, [&](const Json& node) {
        std::string t = type_of(node);
        if (t == "FunctionDef" || t == "AsyncFunctionDef") {
          routes_from_decorators(m, node, config, out);
        } else if (t == "Call" && last_component(dotted_name(field(node, "func"))) == "add_url_rule") {
          route_from_add_url_rule(m, node, config, out);
        }
      });
    }
    return out;
  }

  std::vector<CallEdge> call_edges() override {
    std::vector<CallEdge> edges;
    for (const auto& [file, m] : modules_) {
      if (!m.tree) continue;
      Scope module_scope;
      walk(m, *m.tree, module_scope, {}, edges);
    }
    return edges;
  }

  std::vector<FileSymbols> symbols() override {
    std::vector<FileSymbols> out;
    for (const auto& [file, m] : modules_) {
      FileSymbols fsyms;
      fsyms.file = file;
      fsyms.imports = m.imports;
      if (m.tree) {
        for (const auto& stmt : field(*m.tree, "body")) {
          std::string t = type_of(stmt);
          if (t == "FunctionDef" || t == "AsyncFunctionDef") {
            fsyms.functions.push_back({field(stmt, "name").get<std::string>(), line_of(stmt),
                                       end_line_of(stmt), t == "AsyncFunctionDef"});
          } else if (t == "ClassDef") {
            std::string cls = field(stmt, "name").get<std::string>();
            fsyms.classes.push_back({cls, line_of(stmt), end_line_of(stmt)});
            for (const auto& member : field(stmt, "body")) {
              std::string mt = type_of(member);
              if (mt == "FunctionDef" || mt == "AsyncFunctionDef") {
                fsyms.functions.push_back({cls + "." + field(member, "name").get<std::string>(),
                                           line_of(member), end_line_of(member),
                                           mt == "AsyncFunctionDef"});
              }
            }
          }
        }
        std::sort(fsyms.functions.begin(), fsyms.functions.end(),
                  [](const auto& a, const auto& b) { return a.start_line < b.start_line; });
      }
      out.push_back(std::move(fsyms));
    }
    return out;
  }

 private:
  struct Scope {
    std::string function;  // empty at module level
    bool is_async = false;
    std::string class_name;
  };

  struct Flags {
    bool bare = false;
    bool awaited = false;
  };

  // ---- module resolution ----

  std::optional<std::string> module_file(const std::string& base_dir, const std::string& dotted) const {
    std::string rel = base_dir;
    std::size_t start = 0;
    while (start <= dotted.size() && !dotted.empty()) {
      std::size_t dot = dotted.find('.', start);
      std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      rel = rel.empty() ? part : rel + "/" + part;
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (project_.files.count(rel + ".py")) return rel + ".py";
    if (project_.files.count(rel + "/__init__.py")) return rel + "/__init__.py";
    return std::nullopt;
  }

  std::optional<std::string> resolve_module(const std::string& from_file, const std::string& dotted,
                                            int level) const {
    if (level > 0) {
      std::string base = parent_dir(from_file);
      for (int i = 1; i < level; ++i) base = parent_dir(base);
      if (dotted.empty()) {
        std::string init = base.empty() ? "__init__.py" : base + "/__init__.py";
        if (project_.files.count(init)) return init;
        return std::nullopt;
      }
      return module_file(base, dotted);
    }
    if (auto f = module_file("", dotted)) return f;
    // Scripts that run from their own directory import siblings by bare name.
    std::string dir = parent_dir(from_file);
    if (!dir.empty()) return module_file(dir, dotted);
    return std::nullopt;
  }

  bool looks_internal(const std::string& dotted) const {
    std::string first = dotted.substr(0, dotted.find('.'));
    if (first.empty()) return false;
    for (const auto& [file, src] : project_.files) {
      if (starts_with(file, first + "/") || file == first + ".py") return true;
    }
    return false;
  }

  void collect_imports(Module& m) {
    for_each_node(*m.tree, [&](const Json& node) {
      std::string t = type_of(node);
      int line = line_of(node);
      if (t == "Import") {
        for (const auto& alias : field(node, "names")) {
          std::string name = field(alias, "name").get<std::string>();
          const Json& as = field(alias, "asname");
          auto resolved = resolve_module(m.file, name, 0);
          std::string local = as.is_string() ? as.get<std::string>() : name.substr(0, name.find('.'));
          if (resolved) {
            m.dotted_modules[as.is_string() ? local : name] = *resolved;
            if (!as.is_string()) {
              if (auto head = resolve_module(m.file, local, 0)) {
                m.bindings[local] = {Binding::Kind::kModule, *head, ""};
              }
            } else {
              m.bindings[local] = {Binding::Kind::kModule, *resolved, ""};
            }
          } else if (looks_internal(name)) {
            warn("unresolved-import", m.file, line, "cannot resolve import of " + name);
          }
          m.imports.push_back({local, name, "", resolved.value_or(""), !resolved, line});
        }
      } else if (t == "ImportFrom") {
        const Json& mod = field(node, "module");
        std::string module = mod.is_string() ? mod.get<std::string>() : std::string();
        int level = field(node, "level").is_number_integer() ? field(node, "level").get<int>() : 0;
        std::string spec = std::string(static_cast<std::size_t>(level), '.') + module;
        auto base_file = resolve_module(m.file, module, level);
        for (const auto& alias : field(node, "names")) {
          std::string name = field(alias, "name").get<std::string>();
          if (name == "*") continue;
          const Json& as = field(alias, "asname");
          std::string local = as.is_string() ? as.get<std::string>() : name;
          auto sub = resolve_module(m.file, module.empty() ? name : module + "." + name, level);
          if (sub) {
            m.bindings[local] = {Binding::Kind::kModule, *sub, ""};
            m.dotted_modules[local] = *sub;
            m.imports.push_back({local, spec, name, *sub, false, line});
          } else if (base_file) {
            m.bindings[local] = {Binding::Kind::kSymbol, *base_file, name};
            m.imports.push_back({local, spec, name, *base_file, false, line});
          } else {
            if (level > 0 || looks_internal(module)) {
              warn("unresolved-import", m.file, line, "cannot resolve import of " + spec);
            }
            m.imports.push_back({local, spec, name, "", true, line});
          }
        }
      }
    });
  }

  // ---- routes ----

  void collect_app_objects() {
    if (objects_collected_) return;
    objects_collected_ = true;
    for (const auto& [file, m] : modules_) {
      if (!m.tree) continue;
      for_each_node(*m.tree, [&](const Json& node) {
        std::string t = type_of(node);
        if (t == "Assign") {
          const Json& targets = field(node, "targets");
          const Json& value = field(node, "value");
          if (targets.size() != 1 || type_of(targets[0]) != "Name" || type_of(value) != "Call") return;
          std::string ctor = last_component(dotted_name(field(value, "func")));
          if (ctor != "Flask" && ctor != "Blueprint") return;
          AppObject obj;
          obj.blueprint = ctor == "Blueprint";
          if (const Json* p = keyword(value, "url_prefix")) obj.ctor_prefix = string_constant(*p);
          objects_[{file, field(targets[0], "id").get<std::string>()}] = obj;
        }
      });
    }
    // register_blueprint(bp, url_prefix=...) overrides the constructor prefix.
    for (const auto& [file, m] : modules_) {
      if (!m.tree) continue;
      for_each_node(*m.tree, [&](const Json& node) {
        if (type_of(node) != "Call") return;
        if (last_component(dotted_name(field(node, "func"))) != "register_blueprint") return;
        const Json* bp = positional(node, 0);
        if (!bp) return;
        auto key = resolve_object(m, dotted_name(*bp));
        if (!key) return;
        std::optional<std::string> prefix;
        if (const Json* p = keyword(node, "url_prefix")) prefix = string_constant(*p);
        if (!prefix) {
          auto it = objects_.find(*key);
          if (it != objects_.end()) prefix = it->second.ctor_prefix;
        }
        if (!registered_.count(*key)) registered_[*key] = prefix;
      });
    }
  }

  std::optional<ObjectKey> resolve_object(const Module& m, const std::string& dotted) const {
    if (dotted.empty()) return std::nullopt;
    auto dot = dotted.find('.');
    if (dot == std::string::npos) {
      auto b = m.bindings.find(dotted);
      if (b != m.bindings.end() && b->second.kind == Binding::Kind::kSymbol) {
        return ObjectKey{b->second.file, b->second.symbol};
      }
      return ObjectKey{m.file, dotted};
    }
    std::string head = dotted.substr(0, dotted.rfind('.'));
    auto mod = m.dotted_modules.find(head);
    if (mod != m.dotted_modules.end()) return ObjectKey{mod->second, last_component(dotted)};
    return std::nullopt;
  }

  // Returns the effective prefix for routes registered on `receiver`, or
  // nullopt when the receiver is not a Flask app or Blueprint.
  std::optional<std::optional<std::string>> receiver_prefix(const Module& m, const std::string& receiver,
                                                            const FrameworkConfig& config) const {
    auto key = resolve_object(m, receiver);
    if (key) {
      auto it = objects_.find(*key);
      if (it != objects_.end()) {
        if (!it->second.blueprint) return std::optional<std::string>{};
        auto reg = registered_.find(*key);
        if (reg != registered_.end()) return reg->second;
        return it->second.ctor_prefix;
      }
    }
    if (config.default_receivers.count(receiver)) return std::optional<std::string>{};
    return std::nullopt;
  }

  void emit_route(const Module& m, const std::string& method, const std::string& path, int line,
                  const std::string& handler, const std::string& handler_file,
                  std::vector<std::string> markers, std::vector<EntryPoint>& out) {
    EntryPoint ep;
    ep.method = method;
    ep.path = to_template_path(path);
    if (ep.path.empty() || ep.path[0] != '/') {
      warn("relative-route", m.file, line, "route path does not start with '/': " + path);
      ep.path = "/" + ep.path;
    }
    ep.handler_function = handler;
    ep.file = m.file;
    ep.line = line;
    ep.auth_markers = std::move(markers);
    ep.handler_file = handler_file;
    out.push_back(std::move(ep));
  }

  std::vector<std::string> methods_of(const Json& call, const std::string& attr, const std::string& file) {
    if (attr != "route" && attr != "add_url_rule") return {to_upper(attr)};
    const Json* methods = keyword(call, "methods");
    if (!methods) return {"GET"};
    std::vector<std::string> out;
    std::string mt = type_of(*methods);
    if (mt == "List" || mt == "Tuple" || mt == "Set") {
      for (const auto& elt : field(*methods, "elts")) {
        if (auto s = string_constant(elt)) {
          std::string up = to_upper(*s);
          if (std::find(out.begin(), out.end(), up) == out.end()) out.push_back(up);
        } else {
          warn("computed-method", file, line_of(call), "non-literal HTTP method ignored");
        }
      }
    } else {
      warn("computed-method", file, line_of(call), "non-literal methods list; defaulting to GET");
      out.push_back("GET");
    }
    return out;
  }

  std::vector<std::string> auth_markers_of(const Json& def, const FrameworkConfig& config) const {
    std::vector<std::string> markers;
    for (const auto& deco : field(def, "decorator_list")) {
      std::string name = decorator_name(deco);
      if (config.auth_markers.count(name) &&
          std::find(markers.begin(), markers.end(), name) == markers.end()) {
        markers.push_back(name);
      }
    }
    return markers;
  }

  void routes_from_decorators(const Module& m, const Json& def, const FrameworkConfig& config,
                              std::vector<EntryPoint>& out) {
    std::string handler = field(def, "name").get<std::string>();
    auto markers = auth_markers_of(def, config);
    for (const auto& deco : field(def, "decorator_list")) {
      if (type_of(deco) != "Call") continue;
      const Json& func = field(deco, "func");
      if (type_of(func) != "Attribute") continue;
      std::string attr = field(func, "attr").get<std::string>();
      if (!config.flask_route_attrs.count(attr)) continue;
      std::string receiver = dotted_name(field(func, "value"));
      auto prefix = receiver_prefix(m, receiver, config);
      if (!prefix) continue;
      const Json* rule = positional(deco, 0);
      if (!rule) rule = keyword(deco, "rule");
      std::optional<std::string> rule_text = rule ? string_constant(*rule) : std::nullopt;
      if (!rule_text) {
        warn("computed-route", m.file, line_of(deco), "route path is not a string literal");
        continue;
      }
      std::string path = flask_join(*prefix, *rule_text);
      for (const auto& method : methods_of(deco, attr, m.file)) {
        emit_route(m, method, path, line_of(deco), handler, m.file, markers, out);
      }
    }
  }

  void route_from_add_url_rule(const Module& m, const Json& call, const FrameworkConfig& config,
                               std::vector<EntryPoint>& out) {
    const Json& func = field(call, "func");
    if (type_of(func) != "Attribute") return;
    std::string receiver = dotted_name(field(func, "value"));
    auto prefix = receiver_prefix(m, receiver, config);
    if (!prefix) return;
    const Json* rule = positional(call, 0);
    if (!rule) rule = keyword(call, "rule");
    auto rule_text = rule ? string_constant(*rule) : std::nullopt;
    if (!rule_text) {
      warn("computed-route", m.file, line_of(call), "route path is not a string literal");
      return;
    }
    const Json* view = keyword(call, "view_func");
    if (!view) view = positional(call, 2);
    std::string view_name = view ? dotted_name(*view) : std::string();
    if (view_name.empty()) {
      warn("computed-handler", m.file, line_of(call), "add_url_rule without a named view function");
      return;
    }
    std::string handler = last_component(view_name);
    std::string handler_file = m.file;
    std::vector<std::string> markers;
    auto target = resolve_object(m, view_name);
    if (target) {
      handler_file = target->first;
      handler = target->second;
      auto mod = modules_.find(handler_file);
      if (mod != modules_.end() && mod->second.tree) {
        for_each_node(*mod->second.tree, [&](const Json& node) {
          std::string t = type_of(node);
          if ((t == "FunctionDef" || t == "AsyncFunctionDef") &&
              field(node, "name").get<std::string>() == handler) {
            markers = auth_markers_of(node, config);
          }
        });
      }
    }
    std::string path = flask_join(*prefix, *rule_text);
    for (const auto& method : methods_of(call, "add_url_rule", m.file)) {
      emit_route(m, method, path, line_of(call), handler, handler_file, markers, out);
    }
  }

  // ---- call graph ----

  std::optional<std::pair<std::string, std::string>> resolve_callee(const Module& m,
                                                                     const Json& func) const {
    std::string dotted = dotted_name(func);
    if (dotted.empty()) return std::nullopt;
    auto dot = dotted.find('.');
    if (dot == std::string::npos) {
      auto b = m.bindings.find(dotted);
      if (b != m.bindings.end() && b->second.kind == Binding::Kind::kSymbol) {
        return std::make_pair(b->second.file, b->second.symbol);
      }
      return std::nullopt;
    }
    // Longest dotted prefix naming a project module wins.
    for (std::size_t cut = dotted.rfind('.'); cut != std::string::npos && cut > 0;
         cut = cut == 0 ? std::string::npos : dotted.rfind('.', cut - 1)) {
      std::string head = dotted.substr(0, cut);
      std::string rest = dotted.substr(cut + 1);
      auto mod = m.dotted_modules.find(head);
      if (mod != m.dotted_modules.end()) return std::make_pair(mod->second, rest);
      if (head.find('.') == std::string::npos) {
        auto b = m.bindings.find(head);
        if (b != m.bindings.end()) {
          if (b->second.kind == Binding::Kind::kModule) return std::make_pair(b->second.file, rest);
          return std::make_pair(b->second.file, b->second.symbol + "." + rest);
        }
        break;
      }
    }
    return std::nullopt;
  }

  void walk(const Module& m, const Json& node, const Scope& scope, Flags flags,
            std::vector<CallEdge>& edges) {
    if (node.is_array()) {
      for (const auto& item : node) walk(m, item, scope, {}, edges);
      return;
    }
    if (!node.is_object()) return;
    std::string t = type_of(node);

    if (t == "FunctionDef" || t == "AsyncFunctionDef") {
      for (const char* f : {"decorator_list", "args", "returns"}) walk(m, field(node, f), scope, {}, edges);
      Scope inner;
      std::string name = field(node, "name").get<std::string>();
      inner.function = scope.class_name.empty() ? name : scope.class_name + "." + name;
      inner.is_async = t == "AsyncFunctionDef";
      walk(m, field(node, "body"), inner, {}, edges);
      return;
    }
    if (t == "ClassDef") {
      for (const char* f : {"decorator_list", "bases", "keywords"}) walk(m, field(node, f), scope, {}, edges);
      Scope inner = scope;
      if (scope.function.empty()) inner.class_name = field(node, "name").get<std::string>();
      walk(m, field(node, "body"), inner, {}, edges);
      return;
    }
    if (t == "Expr") {
      const Json& value = field(node, "value");
      std::string vt = type_of(value);
      Flags f;
      f.bare = vt == "Call" || (vt == "Await" && type_of(field(value, "value")) == "Call");
      walk(m, value, scope, f, edges);
      return;
    }
    if (t == "Await") {
      const Json& value = field(node, "value");
      Flags f;
      if (type_of(value) == "Call") {
        f.awaited = true;
        f.bare = flags.bare;
      }
      walk(m, value, scope, f, edges);
      return;
    }
    if (t == "Call") {
      if (!scope.function.empty()) {
        if (auto callee = resolve_callee(m, field(node, "func"))) {
          if (callee->first != m.file) {
            CallEdge e;
            e.caller_file = m.file;
            e.caller_function = scope.function;
            e.callee_file = callee->first;
            e.callee_function = callee->second;
            e.line = line_of(node);
            e.return_value_used = !flags.bare;
            e.is_awaited = flags.awaited && scope.is_async;
            edges.push_back(std::move(e));
          }
        }
      }
      for (const auto& [key, value] : node.items()) {
        if (value.is_structured()) walk(m, value, scope, {}, edges);
      }
      return;
    }
    for (const auto& [key, value] : node.items()) {
      if (value.is_structured()) walk(m, value, scope, {}, edges);
    }
  }

  const ProjectSnapshot& project_;
  std::map<std::string, Module> modules_;
  bool objects_collected_ = false;
  std::map<ObjectKey, AppObject> objects_;
  std::map<ObjectKey, std::optional<std::string>> registered_;
};

}  // namespace

std::unique_ptr<FrontEnd> make_python_frontend(const ProjectSnapshot& project) {
  return std::make_unique<PythonFrontEnd>(project);
}

}  // namespace slsmig::facts::detail
