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

// JavaScript/TypeScript front end. Express route shapes, CommonJS/ESM
// imports and call sites are recovered with a configurable table of regular
// expressions over a masked copy of the source (comments and string bodies
// blanked, offsets preserved). Known blind spots: routes whose path is
// computed or a template literal with substitutions, routers nested more
// than one mount deep, and functions defined through dynamic property
// assignment.

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>

#include "facts_internal.hpp"

namespace slsmig::facts::detail {
namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

// Two masked views of one file: `code` blanks comments only, `masked` also
// blanks string, template and regex literal bodies. Both keep offsets.
struct MaskedSource {
  std::string code;
  std::string masked;
};

MaskedSource mask_source(const std::string& src) {
  MaskedSource out{src, src};
  auto blank = [&](std::string& s, std::size_t i) {
    if (s[i] != '\n') s[i] = ' ';
  };
  std::size_t i = 0;
  const std::size_t n = src.size();
  char prev_sig = 0;  // last significant char outside comments/literals
  std::string prev_word;
  while (i < n) {
    char c = src[i];
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') {
        blank(out.code, i);
        blank(out.masked, i);
        ++i;
      }
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      std::size_t end = src.find("*/", i + 2);
      end = end == std::string::npos ? n : end + 2;
      for (; i < end; ++i) {
        blank(out.code, i);
        blank(out.masked, i);
      }
      continue;
    }
    if (c == '\'' || c == '"') {
      ++i;
      while (i < n && src[i] != c && src[i] != '\n') {
        if (src[i] == '\\' && i + 1 < n) {
          blank(out.masked, i);
          ++i;
        }
        blank(out.masked, i);
        ++i;
      }
      ++i;
      prev_sig = c;
      prev_word.clear();
      continue;
    }
    if (c == '`') {
      ++i;
      int depth = 0;
      while (i < n) {
        if (src[i] == '\\' && i + 1 < n) {
          blank(out.masked, i);
          blank(out.masked, i + 1);
          i += 2;
          continue;
        }
        if (depth == 0 && src[i] == '`') break;
        if (src[i] == '$' && i + 1 < n && src[i + 1] == '{') {
          ++depth;
          blank(out.masked, i);
          blank(out.masked, i + 1);
          i += 2;
          continue;
        }
        if (depth > 0 && src[i] == '{') ++depth;
        if (depth > 0 && src[i] == '}') --depth;
        blank(out.masked, i);
        ++i;
      }
      ++i;
      prev_sig = '`';
      prev_word.clear();
      continue;
    }
    if (c == '/') {
      static const std::string kRegexPrev = "(,=:[!&|?{};+-*%<>~^";
      bool regex_start = prev_sig == 0 || kRegexPrev.find(prev_sig) != std::string::npos ||
                         prev_word == "return" || prev_word == "typeof";
      if (regex_start) {
        ++i;
        bool in_class = false;
        while (i < n && src[i] != '\n') {
          if (src[i] == '\\' && i + 1 < n) {
            blank(out.masked, i);
            ++i;
          } else if (src[i] == '[') {
            in_class = true;
          } else if (src[i] == ']') {
            in_class = false;
          } else if (src[i] == '/' && !in_class) {
            break;
          }
          blank(out.masked, i);
          ++i;
        }
        ++i;
        prev_sig = '/';
        prev_word.clear();
        continue;
      }
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < n && ident_char(src[j])) ++j;
      prev_word = src.substr(i, j - i);
      prev_sig = src[j - 1];
      i = j;
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) {
      prev_sig = c;
      prev_word.clear();
    }
    ++i;
  }
  return out;
}

// Offset of the bracket matching the opener at `open`, or npos.
std::size_t match_bracket(const std::string& masked, std::size_t open) {
  char o = masked[open];
  char c = o == '(' ? ')' : o == '[' ? ']' : '}';
  int depth = 0;
  for (std::size_t i = open; i < masked.size(); ++i) {
    if (masked[i] == o) ++depth;
    if (masked[i] == c && --depth == 0) return i;
  }
  return std::string::npos;
}

std::size_t skip_ws(const std::string& s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

std::size_t skip_ws_back(const std::string& s, std::size_t i) {
  // Returns index of last non-space char before i, or npos.
  while (i > 0) {
    --i;
    if (!std::isspace(static_cast<unsigned char>(s[i]))) return i;
  }
  return std::string::npos;
}

struct ScopeSpan {
  std::string name;
  std::size_t body_open = 0;
  std::size_t body_close = 0;
  bool is_async = false;
  bool inline_handler = false;
};

struct Binding {
  bool module = true;  // whole-module alias vs imported symbol
  std::string file;
  std::string symbol;
};

struct RouterInfo {
  bool is_app = false;
};

struct JsFile {
  std::string file;
  MaskedSource src;
  std::vector<ScopeSpan> scopes;
  std::map<std::string, Binding> bindings;
  std::vector<ImportRecord> imports;
  std::map<std::string, RouterInfo> routers;  // local var -> kind
  std::string default_export;                 // `module.exports = X`
};

struct Arg {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

std::vector<Arg> split_args(const std::string& masked, std::size_t open, std::size_t close) {
  std::vector<Arg> args;
  int depth = 0;
  std::size_t start = open + 1;
  for (std::size_t i = open + 1; i < close; ++i) {
    char c = masked[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      args.push_back({start, i});
      start = i + 1;
    }
  }
  if (close > start && !trim(masked.substr(start, close - start)).empty()) args.push_back({start, close});
  for (auto& a : args) {
    while (a.begin < a.end && std::isspace(static_cast<unsigned char>(masked[a.begin]))) ++a.begin;
    while (a.end > a.begin && std::isspace(static_cast<unsigned char>(masked[a.end - 1]))) --a.end;
  }
  return args;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "if", "for", "while", "switch", "catch", "function", "return", "typeof", "new", "await",
      "async", "super", "import", "require", "else", "do", "try", "with", "yield", "delete",
      "void", "in", "of", "instanceof", "constructor", "class", "extends", "throw", "case"};
  return kw;
}

class JsFrontEnd final : public FrontEnd {
 public:
  explicit JsFrontEnd(const ProjectSnapshot& project) : project_(project) {
    for (const auto& [file, source] : project.files) {
      JsFile f;
      f.file = file;
      f.src = mask_source(source);
      files_.emplace(file, std::move(f));
    }
    for (auto& [file, f] : files_) {
      collect_imports(f);
      collect_scopes(f);
      collect_routers(f);
    }
  }

  std::vector<EntryPoint> entry_points(const FrameworkConfig& config) override {
    if (!routes_done_) {
      collect_mounts(config);
      for (auto& [file, f] : files_) collect_routes(f, config);
      routes_done_ = true;
    }
    return routes_;
  }

  std::vector<CallEdge> call_edges() override {
    // Inline route handlers become scopes, so routes are collected first.
    entry_points(FrameworkConfig{});
    std::vector<CallEdge> edges;
    for (const auto& [file, f] : files_) collect_calls(f, edges);
    return edges;
  }

  std::vector<FileSymbols> symbols() override {
    static const std::regex class_re(R"(\bclass\s+([A-Za-z_$][\w$]*)[^{;]*\{)");
    std::vector<FileSymbols> out;
    for (const auto& [file, f] : files_) {
      FileSymbols s;
      s.file = file;
      s.imports = f.imports;
      const std::string& text = f.src.masked;
      std::vector<ScopeSpan> sorted;
      for (const auto& sc : f.scopes) {
        if (!sc.inline_handler) sorted.push_back(sc);
      }
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.body_open < b.body_open; });
      std::size_t covered_until = 0;
      for (const auto& sc : sorted) {
        if (sc.body_open < covered_until && covered_until != 0) continue;  // nested
        s.functions.push_back({sc.name, line_of_offset(text, sc.body_open), line_of_offset(text, sc.body_close),
                               sc.is_async});
        covered_until = sc.body_close;
      }
      for (auto it = std::sregex_iterator(text.begin(), text.end(), class_re); it != std::sregex_iterator();
           ++it) {
        std::size_t open = static_cast<std::size_t>(it->position(0) + it->length(0) - 1);
        std::size_t close = match_bracket(text, open);
        if (close == std::string::npos) continue;
        s.classes.push_back({(*it)[1].str(), line_of_offset(text, static_cast<std::size_t>(it->position(0))),
                             line_of_offset(text, close)});
      }
      out.push_back(std::move(s));
    }
    return out;
  }

 private:
  // ---- imports ----

  std::optional<std::string> resolve_spec(const std::string& from_file, const std::string& spec) const {
    if (spec.empty() || spec[0] != '.') return std::nullopt;
    std::string dir = parent_dir(from_file);
    auto base = normalize_rel(dir.empty() ? spec : dir + "/" + spec);
    if (!base) return std::nullopt;
    static const char* kSuffixes[] = {"", ".js", ".ts", ".mjs", ".cjs", ".jsx", ".tsx",
                                      "/index.js", "/index.ts"};
    for (const char* suffix : kSuffixes) {
      std::string cand = *base + suffix;
      if (project_.files.count(cand)) return cand;
    }
    return std::nullopt;
  }

  void add_import(JsFile& f, const std::string& local, const std::string& spec, const std::string& imported,
                  bool module, int line) {
    auto resolved = resolve_spec(f.file, spec);
    if (!resolved && !spec.empty() && spec[0] == '.') {
      warn("unresolved-import", f.file, line, "cannot resolve import of " + spec);
    }
    f.imports.push_back({local, spec, imported, resolved.value_or(""), !resolved, line});
    if (resolved) f.bindings[local] = {module, *resolved, imported};
  }

  static std::vector<std::pair<std::string, std::string>> destructured(const std::string& list,
                                                                        const char* rename_sep) {
    // "a, b: c" (CJS) or "a, b as c" (ESM) -> {(a,a), (b,c)} as (imported, local)
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t start = 0;
    while (start <= list.size()) {
      std::size_t comma = list.find(',', start);
      std::string item = trim(list.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (!item.empty()) {
        std::size_t sep = item.find(rename_sep);
        if (sep != std::string::npos) {
          out.emplace_back(trim(item.substr(0, sep)), trim(item.substr(sep + std::string(rename_sep).size())));
        } else {
          out.emplace_back(item, item);
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  void collect_imports(JsFile& f) {
    static const std::regex cjs_default(
        R"(\b(?:const|let|var)\s+([A-Za-z_$][\w$]*)\s*=\s*require\(\s*['"]([^'"]+)['"]\s*\)(\s*\.\s*([A-Za-z_$][\w$]*))?)");
    static const std::regex cjs_destructure(
        R"(\b(?:const|let|var)\s*\{([^}]*)\}\s*=\s*require\(\s*['"]([^'"]+)['"]\s*\))");
    static const std::regex esm_default(R"(\bimport\s+([A-Za-z_$][\w$]*)\s+from\s+['"]([^'"]+)['"])");
    static const std::regex esm_named(R"(\bimport\s*\{([^}]*)\}\s*from\s+['"]([^'"]+)['"])");
    static const std::regex esm_namespace(R"(\bimport\s*\*\s*as\s+([A-Za-z_$][\w$]*)\s+from\s+['"]([^'"]+)['"])");
    static const std::regex cjs_export(R"(\bmodule\.exports\s*=\s*([A-Za-z_$][\w$]*)\s*(;|\n|$))");
    static const std::regex esm_export(R"(\bexport\s+default\s+([A-Za-z_$][\w$]*)\s*(;|\n|$))");

    const std::string& text = f.src.code;
    auto line_at = [&](const std::smatch& m) {
      return line_of_offset(text, static_cast<std::size_t>(m.position(0)));
    };
    for (auto it = std::sregex_iterator(text.begin(), text.end(), cjs_default); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (m[4].matched) {
        add_import(f, m[1], m[2], m[4], false, line_at(m));
      } else {
        add_import(f, m[1], m[2], "", true, line_at(m));
      }
    }
    for (auto it = std::sregex_iterator(text.begin(), text.end(), cjs_destructure); it != std::sregex_iterator();
         ++it) {
      for (const auto& [imported, local] : destructured((*it)[1], ":")) {
        add_import(f, local, (*it)[2], imported, false, line_at(*it));
      }
    }
    for (auto it = std::sregex_iterator(text.begin(), text.end(), esm_default); it != std::sregex_iterator(); ++it) {
      add_import(f, (*it)[1], (*it)[2], "", true, line_at(*it));
    }
    for (auto it = std::sregex_iterator(text.begin(), text.end(), esm_named); it != std::sregex_iterator(); ++it) {
      for (const auto& [imported, local] : destructured((*it)[1], " as ")) {
        add_import(f, local, (*it)[2], imported, false, line_at(*it));
      }
    }
    for (auto it = std::sregex_iterator(text.begin(), text.end(), esm_namespace); it != std::sregex_iterator();
         ++it) {
      add_import(f, (*it)[1], (*it)[2], "", true, line_at(*it));
    }
    std::smatch m;
    if (std::regex_search(text, m, cjs_export) || std::regex_search(text, m, esm_export)) {
      f.default_export = m[1];
    }
    std::sort(f.imports.begin(), f.imports.end(),
              [](const auto& a, const auto& b) { return std::tie(a.line, a.name) < std::tie(b.line, b.name); });
  }

  // ---- function scopes ----

  // Given the '(' of a parameter list, returns the '{' opening the body
  // (skipping an optional "=>"), or npos for expression-bodied arrows.
  static std::size_t body_after_params(const std::string& masked, std::size_t paren) {
    std::size_t close = match_bracket(masked, paren);
    if (close == std::string::npos) return std::string::npos;
    std::size_t i = skip_ws(masked, close + 1);
    // TypeScript return annotation.
    if (i < masked.size() && masked[i] == ':') {
      while (i < masked.size() && masked[i] != '{' && masked[i] != '=' && masked[i] != ';') ++i;
    }
    if (masked.compare(i, 2, "=>") == 0) i = skip_ws(masked, i + 2);
    if (i < masked.size() && masked[i] == '{') return i;
    return std::string::npos;
  }

  void add_scope(JsFile& f, const std::string& name, std::size_t open, bool is_async, bool inline_handler) {
    std::size_t close = match_bracket(f.src.masked, open);
    if (close == std::string::npos) return;
    for (const auto& s : f.scopes) {
      if (s.body_open == open) return;
    }
    f.scopes.push_back({name, open, close, is_async, inline_handler});
  }

  void collect_scopes(JsFile& f) {
    static const std::regex named_fn(R"(\b(async\s+)?function\s*\*?\s*([A-Za-z_$][\w$]*)\s*\()");
    static const std::regex assigned_fn(
        R"(\b(?:const|let|var)\s+([A-Za-z_$][\w$]*)\s*=\s*(async\s+)?(?:function\b\s*\*?\s*[\w$]*\s*)?\()");
    static const std::regex assigned_arrow1(
        R"(\b(?:const|let|var)\s+([A-Za-z_$][\w$]*)\s*=\s*(async\s+)?[A-Za-z_$][\w$]*\s*=>\s*\{)");
    static const std::regex exported_fn(
        R"(\b(?:module\.)?exports\.([A-Za-z_$][\w$]*)\s*=\s*(async\s+)?(?:function\b\s*\*?\s*[\w$]*\s*)?\()");
    static const std::regex method_def(R"((^|\n)[ \t]*(static\s+)?(async\s+)?([A-Za-z_$][\w$]*)\s*\()");

    const std::string& text = f.src.masked;
    auto scan = [&](const std::regex& re, int name_group, int async_group, bool paren_at_end) {
      for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        std::size_t end = static_cast<std::size_t>(m.position(0) + m.length(0));
        std::size_t open = paren_at_end ? body_after_params(text, end - 1) : end - 1;
        if (open == std::string::npos) continue;
        std::string name = m[name_group];
        if (keywords().count(name)) continue;
        add_scope(f, name, open, m[async_group].matched, false);
      }
    };
    scan(named_fn, 2, 1, true);
    scan(assigned_fn, 1, 2, true);
    scan(assigned_arrow1, 1, 2, false);
    scan(exported_fn, 1, 2, true);
    scan(method_def, 4, 3, true);
  }

  const ScopeSpan* innermost_scope(const JsFile& f, std::size_t offset) const {
    const ScopeSpan* best = nullptr;
    for (const auto& s : f.scopes) {
      if (s.body_open < offset && offset < s.body_close) {
        if (!best || s.body_open > best->body_open) best = &s;
      }
    }
    return best;
  }

  // ---- routers and mounts ----

  void collect_routers(JsFile& f) {
    static const std::regex app_re(R"(\b(?:const|let|var)\s+([A-Za-z_$][\w$]*)\s*=\s*express\s*\(\s*\))");
    static const std::regex router_re(
        R"(\b(?:const|let|var)\s+([A-Za-z_$][\w$]*)\s*=\s*(?:express\s*\.\s*)?Router\s*\()");
    const std::string& text = f.src.masked;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), app_re); it != std::sregex_iterator(); ++it) {
      f.routers[(*it)[1]] = {true};
    }
    for (auto it = std::sregex_iterator(text.begin(), text.end(), router_re); it != std::sregex_iterator(); ++it) {
      f.routers[(*it)[1]] = {false};
    }
  }

  std::optional<RouterInfo> receiver_kind(const JsFile& f, const std::string& name,
                                          const FrameworkConfig& config) const {
    auto it = f.routers.find(name);
    if (it != f.routers.end()) return it->second;
    if (config.default_receivers.count(name)) return RouterInfo{name == "app"};
    return std::nullopt;
  }

  // (file, router variable) addressed by a mount argument.
  std::optional<std::pair<std::string, std::string>> resolve_router(const JsFile& f, const std::string& name) const {
    if (f.routers.count(name)) return std::make_pair(f.file, name);
    auto b = f.bindings.find(name);
    if (b == f.bindings.end()) return std::nullopt;
    auto target = files_.find(b->second.file);
    if (target == files_.end()) return std::nullopt;
    std::string var = b->second.module ? target->second.default_export : b->second.symbol;
    if (var.empty()) return std::nullopt;
    return std::make_pair(b->second.file, var);
  }

  // Literal text of a string argument, or nullopt when computed.
  std::optional<std::string> string_arg(const JsFile& f, const Arg& a) const {
    const std::string& code = f.src.code;
    if (a.end <= a.begin + 1) return std::nullopt;
    char q = code[a.begin];
    if ((q != '\'' && q != '"' && q != '`') || code[a.end - 1] != q) return std::nullopt;
    std::string body = code.substr(a.begin + 1, a.end - a.begin - 2);
    if (q == '`' && body.find("${") != std::string::npos) return std::nullopt;
    return body;
  }

  struct CallSite {
    std::string chain;        // "app.get" / "router.route"
    std::size_t chain_begin;  // offset of first identifier
    std::size_t open;         // '('
    std::size_t close;        // ')'
  };

  // Every `a.b.c(` occurrence in masked text whose chain is preceded by a non-member position.
  std::vector<CallSite> call_sites(const std::string& masked) const {
    std::vector<CallSite> out;
    for (std::size_t i = 0; i < masked.size(); ++i) {
      if (masked[i] != '(') continue;
      std::size_t j = skip_ws_back(masked, i);
      if (j == std::string::npos || !ident_char(masked[j])) continue;
      // Walk back over identifier(.identifier)* chain.
      std::size_t begin = j + 1;
      std::string chain;
      while (true) {
        std::size_t e = begin;
        std::size_t b = e;
        while (b > 0 && ident_char(masked[b - 1])) --b;
        if (b == e || !ident_start(masked[b])) break;
        chain = masked.substr(b, e - b) + (chain.empty() ? "" : "." + chain);
        begin = b;
        std::size_t k = skip_ws_back(masked, b);
        if (k != std::string::npos && masked[k] == '.' && !(k > 0 && masked[k - 1] == '.')) {
          std::size_t before_dot = skip_ws_back(masked, k);
          if (before_dot != std::string::npos && ident_char(masked[before_dot])) {
            begin = before_dot + 1;
            continue;
          }
          chain = "." + chain;  // member of a call result / literal
        }
        break;
      }
      if (chain.empty() || chain[0] == '.') {
        if (!chain.empty()) out.push_back({chain, begin, i, match_bracket(masked, i)});
        continue;
      }
      std::size_t close = match_bracket(masked, i);
      if (close == std::string::npos) continue;
      out.push_back({chain, begin, i, close});
    }
    return out;
  }

  void collect_mounts(const FrameworkConfig& config) {
    for (const auto& [file, f] : files_) {
      for (const auto& site : call_sites(f.src.masked)) {
        auto dot = site.chain.find('.');
        if (dot == std::string::npos || site.chain.substr(dot + 1) != "use") continue;
        std::string recv = site.chain.substr(0, dot);
        auto kind = receiver_kind(f, recv, config);
        if (!kind) continue;
        auto args = split_args(f.src.masked, site.open, site.close);
        if (args.empty()) continue;
        std::string prefix;
        std::size_t first = 0;
        if (auto s = string_arg(f, args[0])) {
          prefix = *s;
          first = 1;
        } else if (f.src.code[args[0].begin] == '`' || f.src.code[args[0].begin] == '\'' ||
                   f.src.code[args[0].begin] == '"') {
          warn("computed-route", file, line_of_offset(f.src.masked, site.open), "mount prefix is computed");
          continue;
        }
        if (first >= args.size()) continue;
        std::string last = trim(f.src.masked.substr(args.back().begin, args.back().end - args.back().begin));
        if (last.empty() || !std::all_of(last.begin(), last.end(), ident_char)) continue;
        auto router = resolve_router(f, last);
        if (!router) continue;
        Mount mnt{prefix, !kind->is_app, file, line_of_offset(f.src.masked, site.open)};
        mounts_[*router].push_back(mnt);
      }
    }
    for (auto& [key, list] : mounts_) {
      std::sort(list.begin(), list.end(),
                [](const Mount& a, const Mount& b) { return std::tie(a.file, a.line) < std::tie(b.file, b.line); });
    }
  }

  static std::string express_join(const std::string& prefix, const std::string& path) {
    std::string p = prefix;
    while (!p.empty() && p.back() == '/') p.pop_back();
    std::string r = path;
    if (!r.empty() && r[0] != '/') r = "/" + r;
    std::string joined = p + r;
    while (joined.size() > 1 && joined.back() == '/') joined.pop_back();
    if (joined.empty()) joined = "/";
    return joined;
  }

  struct HandlerRef {
    std::string name;
    std::string file;
  };

  std::optional<HandlerRef> handler_of(JsFile& f, const Arg& arg, const std::string& method, int line) {
    const std::string& masked = f.src.masked;
    std::string text = trim(masked.substr(arg.begin, arg.end - arg.begin));
    static const std::regex member_re(R"(^([A-Za-z_$][\w$]*)(\s*\.\s*([A-Za-z_$][\w$]*))*$)");
    static const std::regex inline_fn(R"(^(async\s+)?(function\b\s*\*?\s*([A-Za-z_$][\w$]*)?\s*)?\()");
    static const std::regex inline_arrow1(R"(^(async\s+)?[A-Za-z_$][\w$]*\s*=>\s*\{)");
    std::smatch m;
    if (std::regex_match(text, m, member_re)) {
      std::vector<std::string> parts;
      std::string cur;
      for (char c : text) {
        if (c == '.') {
          parts.push_back(trim(cur));
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      parts.push_back(trim(cur));
      HandlerRef h{parts.back(), f.file};
      auto b = f.bindings.find(parts.front());
      if (b != f.bindings.end()) {
        h.file = b->second.file;
        if (parts.size() == 1 && !b->second.module) h.name = b->second.symbol;
      }
      return h;
    }
    if (std::regex_search(text, m, inline_fn)) {
      std::size_t paren = arg.begin + (text.find('(', static_cast<std::size_t>(m.position(0) + m.length(0) - 1)));
      std::size_t open = body_after_params(masked, paren);
      std::string name = m[3].matched ? m[3].str() : "<anonymous:L" + std::to_string(line) + ">";
      if (open != std::string::npos) add_scope(f, name, open, m[1].matched, true);
      return HandlerRef{name, f.file};
    }
    if (std::regex_search(text, m, inline_arrow1)) {
      std::size_t open = arg.begin + static_cast<std::size_t>(m.length(0)) - 1;
      std::string name = "<anonymous:L" + std::to_string(line) + ">";
      add_scope(f, name, open, m[1].matched, true);
      return HandlerRef{name, f.file};
    }
    // Wrapped handler such as asyncHandler(ctrl.create): use its last argument.
    std::size_t paren = text.find('(');
    if (paren != std::string::npos && ident_start(text[0])) {
      std::size_t open = arg.begin + paren;
      std::size_t close = match_bracket(masked, open);
      if (close != std::string::npos && close < arg.end) {
        auto inner = split_args(masked, open, close);
        if (!inner.empty()) return handler_of(f, inner.back(), method, line);
      }
    }
    warn("computed-handler", f.file, line, "unrecognised handler expression for " + method + " route");
    return std::nullopt;
  }

  std::vector<std::string> markers_of(const JsFile& f, const std::vector<Arg>& middleware,
                                      const FrameworkConfig& config) const {
    std::vector<std::string> out;
    for (const auto& a : middleware) {
      std::string text = trim(f.src.masked.substr(a.begin, a.end - a.begin));
      std::size_t paren = text.find('(');
      if (paren != std::string::npos) text = trim(text.substr(0, paren));
      std::size_t dot = text.rfind('.');
      std::string name = trim(dot == std::string::npos ? text : text.substr(dot + 1));
      if (config.auth_markers.count(name) && std::find(out.begin(), out.end(), name) == out.end()) {
        out.push_back(name);
      }
    }
    return out;
  }

  std::vector<std::string> prefixes_for(const JsFile& f, const std::string& recv, int line) {
    auto it = mounts_.find({f.file, recv});
    if (it == mounts_.end()) return {""};
    std::vector<std::string> out;
    for (const auto& mnt : it->second) {
      if (mnt.by_router) {
        std::string key = f.file + ":" + recv;
        if (nested_warned_.insert(key).second) {
          warn("nested-mount", f.file, line,
               "router '" + recv + "' is mounted by another router; only the innermost prefix is applied");
        }
      }
      if (std::find(out.begin(), out.end(), mnt.prefix) == out.end()) out.push_back(mnt.prefix);
    }
    return out;
  }

  void emit(JsFile& f, const std::string& method_lower, const std::string& path, const std::vector<std::string>& prefixes,
            int line, const HandlerRef& h, const std::vector<std::string>& markers) {
    std::vector<std::string> methods;
    if (method_lower == "all") {
      methods = {"GET", "POST", "PUT", "PATCH", "DELETE"};
    } else {
      methods = {to_upper(method_lower)};
    }
    for (const auto& prefix : prefixes) {
      for (const auto& method : methods) {
        EntryPoint ep;
        ep.method = method;
        ep.path = to_template_path(express_join(prefix, path));
        ep.handler_function = h.name;
        ep.file = f.file;
        ep.line = line;
        ep.auth_markers = markers;
        ep.handler_file = h.file;
        routes_.push_back(std::move(ep));
      }
    }
  }

  void collect_routes(JsFile& f, const FrameworkConfig& config) {
    const std::string& masked = f.src.masked;
    for (const auto& site : call_sites(masked)) {
      auto dot = site.chain.find('.');
      if (dot == std::string::npos || site.chain.find('.', dot + 1) != std::string::npos) continue;
      std::string recv = site.chain.substr(0, dot);
      std::string method = site.chain.substr(dot + 1);
      if (!receiver_kind(f, recv, config)) continue;
      int line = line_of_offset(masked, site.chain_begin);
      if (method == "route") {
        auto args = split_args(masked, site.open, site.close);
        if (args.size() != 1) continue;
        auto path = string_arg(f, args[0]);
        if (!path) {
          warn("computed-route", f.file, line, "route path is not a string literal");
          continue;
        }
        auto prefixes = prefixes_for(f, recv, line);
        // Chained .get(h).post(h2) calls on the route object.
        std::size_t i = site.close + 1;
        static const std::regex chained(R"(^\s*\.\s*([A-Za-z_$][\w$]*)\s*\()");
        while (i < masked.size()) {
          std::smatch m;
          std::string rest = masked.substr(i, 200);
          if (!std::regex_search(rest, m, chained)) break;
          std::size_t open = i + static_cast<std::size_t>(m.length(0)) - 1;
          std::size_t close = match_bracket(masked, open);
          if (close == std::string::npos) break;
          std::string chained_method = m[1];
          if (config.express_methods.count(chained_method)) {
            auto cargs = split_args(masked, open, close);
            if (!cargs.empty()) {
              int cline = line_of_offset(masked, i + static_cast<std::size_t>(m.position(1)));
              std::vector<Arg> middleware(cargs.begin(), cargs.end() - 1);
              if (auto h = handler_of(f, cargs.back(), to_upper(chained_method), cline)) {
                emit(f, chained_method, *path, prefixes, cline, *h, markers_of(f, middleware, config));
              }
            }
          }
          i = close + 1;
        }
        continue;
      }
      if (!config.express_methods.count(method)) continue;
      auto args = split_args(masked, site.open, site.close);
      if (args.size() < 2) continue;  // app.get('setting') is a getter, not a route
      auto path = string_arg(f, args[0]);
      if (!path) {
        warn("computed-route", f.file, line, "route path is not a string literal");
        continue;
      }
      std::vector<Arg> middleware(args.begin() + 1, args.end() - 1);
      auto h = handler_of(f, args.back(), to_upper(method), line);
      if (!h) continue;
      emit(f, method, *path, prefixes_for(f, recv, line), line, *h, markers_of(f, middleware, config));
    }
  }

  // ---- call graph ----

  bool statement_start(const std::string& masked, std::size_t begin) const {
    std::size_t k = skip_ws_back(masked, begin);
    if (k == std::string::npos) return true;
    char c = masked[k];
    if (c == ';' || c == '{' || c == '}') return true;
    if (ident_char(c)) {
      std::size_t b = k;
      while (b > 0 && ident_char(masked[b - 1])) --b;
      std::string word = masked.substr(b, k - b + 1);
      return word == "else" || word == "do";
    }
    if (c == ')') {
      // `if (...) call();` style single-statement bodies.
      int depth = 0;
      for (std::size_t i = k + 1; i-- > 0;) {
        if (masked[i] == ')') ++depth;
        if (masked[i] == '(' && --depth == 0) {
          std::size_t w = skip_ws_back(masked, i);
          if (w == std::string::npos || !ident_char(masked[w])) return false;
          std::size_t b = w;
          while (b > 0 && ident_char(masked[b - 1])) --b;
          std::string word = masked.substr(b, w - b + 1);
          return word == "if" || word == "for" || word == "while";
        }
      }
    }
    return false;
  }

  bool statement_end(const std::string& masked, std::size_t close) const {
    std::size_t i = close + 1;
    bool newline = false;
    while (i < masked.size() && std::isspace(static_cast<unsigned char>(masked[i]))) {
      if (masked[i] == '\n') newline = true;
      ++i;
    }
    if (i >= masked.size()) return true;
    char c = masked[i];
    if (c == ';' || c == '}') return true;
    if (newline) {
      static const std::string kContinues = ".?:+-*/%&|^=<>,([";
      return kContinues.find(c) == std::string::npos;
    }
    return false;
  }

  void collect_calls(const JsFile& f, std::vector<CallEdge>& edges) const {
    const std::string& masked = f.src.masked;
    for (const auto& site : call_sites(masked)) {
      if (site.chain.empty() || site.chain[0] == '.') continue;
      std::size_t dot = site.chain.find('.');
      std::string head = site.chain.substr(0, dot);
      if (keywords().count(head)) continue;
      // Skip definitions: `name(params) {` and `function name(`.
      std::size_t after = skip_ws(masked, site.close + 1);
      if (after < masked.size() && masked[after] == '{') continue;
      std::size_t before = skip_ws_back(masked, site.chain_begin);
      std::string prev_word;
      if (before != std::string::npos && ident_char(masked[before])) {
        std::size_t b = before;
        while (b > 0 && ident_char(masked[b - 1])) --b;
        prev_word = masked.substr(b, before - b + 1);
      }
      if (prev_word == "function" || prev_word == "new") continue;

      auto b = f.bindings.find(head);
      if (b == f.bindings.end()) continue;
      std::string callee;
      if (dot == std::string::npos) {
        if (b->second.module) continue;
        callee = b->second.symbol;
      } else {
        callee = site.chain.substr(dot + 1);
        if (!b->second.module) callee = b->second.symbol + "." + callee;
      }
      if (b->second.file == f.file) continue;
      const ScopeSpan* scope = innermost_scope(f, site.chain_begin);
      if (!scope) continue;

      bool awaited = prev_word == "await";
      std::size_t stmt_begin = site.chain_begin;
      if (awaited) {
        std::size_t b2 = before;
        while (b2 > 0 && ident_char(masked[b2 - 1])) --b2;
        stmt_begin = b2;
      }
      CallEdge e;
      e.caller_file = f.file;
      e.caller_function = scope->name;
      e.callee_file = b->second.file;
      e.callee_function = callee;
      e.line = line_of_offset(masked, site.chain_begin);
      e.return_value_used = !(statement_start(masked, stmt_begin) && statement_end(masked, site.close));
      e.is_awaited = awaited && scope->is_async;
      edges.push_back(std::move(e));
    }
  }

  struct Mount {
    std::string prefix;
    bool by_router = false;
    std::string file;
    int line = 0;
  };

  const ProjectSnapshot& project_;
  std::map<std::string, JsFile> files_;
  std::map<std::pair<std::string, std::string>, std::vector<Mount>> mounts_;
  std::set<std::string> nested_warned_;
  std::vector<EntryPoint> routes_;
  bool routes_done_ = false;
};

}  // namespace

std::unique_ptr<FrontEnd> make_js_frontend(const ProjectSnapshot& project) {
  return std::make_unique<JsFrontEnd>(project);
}

}  // namespace slsmig::facts::detail
