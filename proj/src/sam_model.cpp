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

#include "slsmig/sam_model.hpp"
#include "slsmig/python_ast.hpp"

#include <yaml-cpp/yaml.h>

#include <regex>

namespace slsmig::sam {

const char* kind_name(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::kFunction:
      return "Function";
    case ResourceKind::kTable:
      return "Table";
    case ResourceKind::kBucket:
      return "Bucket";
    case ResourceKind::kUserPool:
      return "UserPool";
    case ResourceKind::kUserPoolClient:
      return "UserPoolClient";
    case ResourceKind::kApi:
      return "Api";
    case ResourceKind::kQueue:
      return "Queue";
    case ResourceKind::kRule:
      return "Rule";
    case ResourceKind::kLayerVersion:
      return "LayerVersion";
    case ResourceKind::kPermission:
      return "Permission";
    case ResourceKind::kUnknown:
      return "Unknown";
  }
  return "Unknown";
}

ResourceKind kind_of_type(std::string_view type) {
  static const std::map<std::string, ResourceKind, std::less<>> kTypes = {
      {"AWS::Serverless::Function", ResourceKind::kFunction},
      {"AWS::Lambda::Function", ResourceKind::kFunction},
      {"AWS::DynamoDB::Table", ResourceKind::kTable},
      {"AWS::Serverless::SimpleTable", ResourceKind::kTable},
      {"AWS::S3::Bucket", ResourceKind::kBucket},
      {"AWS::Cognito::UserPool", ResourceKind::kUserPool},
      {"AWS::Cognito::UserPoolClient", ResourceKind::kUserPoolClient},
      {"AWS::Serverless::Api", ResourceKind::kApi},
      {"AWS::Serverless::HttpApi", ResourceKind::kApi},
      {"AWS::ApiGateway::RestApi", ResourceKind::kApi},
      {"AWS::SQS::Queue", ResourceKind::kQueue},
      {"AWS::Events::Rule", ResourceKind::kRule},
      {"AWS::Serverless::LayerVersion", ResourceKind::kLayerVersion},
      {"AWS::Lambda::LayerVersion", ResourceKind::kLayerVersion},
      {"AWS::Lambda::Permission", ResourceKind::kPermission},
  };
  auto it = kTypes.find(type);
  return it == kTypes.end() ? ResourceKind::kUnknown : it->second;
}

const char* severity_name(Severity s) { return s == Severity::kFatal ? "fatal" : "warning"; }

Json to_json(const Finding& f) {
  return {{"check_id", f.check_id},
          {"severity", severity_name(f.severity)},
          {"locus", {{"artifact", f.artifact}, {"pointer", f.pointer}}},
          {"message", f.message},
          {"mechanical_fix", f.mechanical_fix},
          {"fix_hint", f.fix_hint}};
}

Finding finding_from_json(const Json& j) {
  Finding f;
  f.check_id = j.at("check_id").get<std::string>();
  f.severity = j.value("severity", std::string("fatal")) == "warning" ? Severity::kWarning : Severity::kFatal;
  f.artifact = j.at("locus").value("artifact", std::string());
  f.pointer = j.at("locus").value("pointer", std::string());
  f.message = j.value("message", std::string());
  f.mechanical_fix = j.value("mechanical_fix", Json());
  f.fix_hint = j.value("fix_hint", std::string());
  return f;
}

const Resource* Template::find(std::string_view logical_id) const {
  for (const auto& r : resources) {
    if (r.logical_id == logical_id) return &r;
  }
  return nullptr;
}

Resource* Template::find(std::string_view logical_id) {
  for (auto& r : resources) {
    if (r.logical_id == logical_id) return &r;
  }
  return nullptr;
}

std::vector<const Resource*> Template::of_kind(ResourceKind kind) const {
  std::vector<const Resource*> out;
  for (const auto& r : resources) {
    if (r.kind == kind) out.push_back(&r);
  }
  return out;
}

std::set<std::string> Template::parameter_names() const {
  std::set<std::string> out;
  if (header.contains("Parameters") && header["Parameters"].is_object()) {
    for (const auto& [k, v] : header["Parameters"].items()) out.insert(k);
  }
  return out;
}

std::optional<Intrinsic> as_ref(const OJson& node) {
  if (!node.is_object() || node.size() != 1) return std::nullopt;
  if (node.contains("Ref") && node["Ref"].is_string()) {
    return Intrinsic{RefKind::kRef, node["Ref"].get<std::string>(), ""};
  }
  if (node.contains("Fn::GetAtt")) {
    const OJson& v = node["Fn::GetAtt"];
    if (v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_string()) {
      return Intrinsic{RefKind::kGetAtt, v[0].get<std::string>(), v[1].get<std::string>()};
    }
  }
  return std::nullopt;
}

OJson make_ref(std::string_view target) { return OJson{{"Ref", std::string(target)}}; }

OJson make_getatt(std::string_view target, std::string_view attribute) {
  return OJson{{"Fn::GetAtt", OJson::array({std::string(target), std::string(attribute)})}};
}

OJson make_sub(std::string_view text) { return OJson{{"Fn::Sub", std::string(text)}}; }

bool is_pseudo_parameter(std::string_view name) {
  static const std::set<std::string, std::less<>> kPseudo = {
      "AWS::AccountId", "AWS::NotificationARNs", "AWS::NoValue",  "AWS::Partition",
      "AWS::Region",    "AWS::StackId",          "AWS::StackName", "AWS::URLSuffix"};
  return kPseudo.count(name) > 0;
}

std::string pointer_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> sub_variables(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while ((i = text.find("${", i)) != std::string_view::npos) {
    std::size_t end = text.find('}', i + 2);
    if (end == std::string_view::npos) break;
    std::string name = trim(text.substr(i + 2, end - i - 2));
    if (!name.empty() && name[0] != '!') out.push_back(name);
    i = end + 1;
  }
  return out;
}

namespace {

// Short-form tags whose long form is "Fn::<Name>".
const std::set<std::string>& fn_tags() {
  static const std::set<std::string> tags = {"And",    "Base64", "Cidr",   "Equals",  "FindInMap", "GetAZs",
                                             "If",     "ImportValue", "Join", "Not",  "Or",        "Select",
                                             "Split",  "Sub",    "Transform", "Length", "ToJsonString"};
  return tags;
}

bool is_int_text(const std::string& s) {
  static const std::regex re(R"([-+]?(0|[1-9][0-9]*))");
  return std::regex_match(s, re);
}

bool is_float_text(const std::string& s) {
  static const std::regex re(R"([-+]?(\.[0-9]+|[0-9]+\.[0-9]*|[0-9]+)([eE][-+]?[0-9]+)?)");
  static const std::regex special(R"([-+]?\.(inf|Inf|INF)|\.(nan|NaN|NAN))");
  return (std::regex_match(s, re) && !is_int_text(s)) || std::regex_match(s, special);
}

bool is_null_text(const std::string& s) { return s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL"; }

bool is_bool_text(const std::string& s) {
  return s == "true" || s == "True" || s == "TRUE" || s == "false" || s == "False" || s == "FALSE";
}

OJson resolve_plain(const std::string& s) {
  if (is_null_text(s)) return nullptr;
  if (is_bool_text(s)) return s[0] == 't' || s[0] == 'T';
  if (is_int_text(s)) {
    try {
      return std::stoll(s);
    } catch (const std::out_of_range&) {
      return s;
    }
  }
  if (is_float_text(s)) {
    std::string lower = to_lower(s);
    if (lower.find("inf") != std::string::npos || lower.find("nan") != std::string::npos) return s;
    return std::stod(s);
  }
  return s;
}

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

OJson convert(const YAML::Node& n);

OJson convert_untagged(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      if (n.Tag() == "?") return resolve_plain(n.Scalar());
      return n.Scalar();
    case YAML::NodeType::Sequence: {
      OJson arr = OJson::array();
      for (const auto& item : n) arr.push_back(convert(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      OJson obj = OJson::object();
      for (const auto& kv : n) obj[kv.first.as<std::string>()] = convert(kv.second);
      return obj;
    }
  }
  return nullptr;
}

OJson convert(const YAML::Node& n) {
  const std::string& tag = n.Tag();
  if (tag.size() > 1 && tag[0] == '!' && tag[1] != '!') {
    std::string name = tag.substr(1);
    if (name == "Ref") return OJson{{"Ref", n.IsScalar() ? n.Scalar() : std::string()}};
    if (name == "GetAtt") {
      if (n.IsScalar()) {
        std::string s = n.Scalar();
        auto dot = s.find('.');
        OJson arr = OJson::array({s.substr(0, dot), dot == std::string::npos ? std::string() : s.substr(dot + 1)});
        return OJson{{"Fn::GetAtt", arr}};
      }
      return OJson{{"Fn::GetAtt", convert_untagged(n)}};
    }
    if (name == "Condition") return OJson{{"Condition", n.IsScalar() ? OJson(n.Scalar()) : convert_untagged(n)}};
    OJson inner = n.IsScalar() ? OJson(n.Scalar()) : convert_untagged(n);
    return OJson{{"Fn::" + name, inner}};
  }
  return convert_untagged(n);
}

void emit(YAML::Emitter& out, const OJson& v);

void emit_string(YAML::Emitter& out, const std::string& s) {
  if (s.find('\n') != std::string::npos) {
    out << YAML::Literal << s;
  } else if (!resolve_plain(s).is_string()) {
    out << YAML::DoubleQuoted << s;
  } else {
    out << s;
  }
}

bool emit_short_form(YAML::Emitter& out, const OJson& v) {
  if (!v.is_object() || v.size() != 1) return false;
  const auto& [key, value] = *v.items().begin();
  if (key == "Ref" && value.is_string()) {
    out << YAML::LocalTag("Ref");
    emit_string(out, value.get<std::string>());
    return true;
  }
  if (key == "Fn::GetAtt" && value.is_array() && value.size() == 2 && value[0].is_string() && value[1].is_string()) {
    out << YAML::LocalTag("GetAtt");
    emit_string(out, value[0].get<std::string>() + "." + value[1].get<std::string>());
    return true;
  }
  if (starts_with(key, "Fn::") && fn_tags().count(key.substr(4))) {
    // A tag on an empty collection does not round-trip through yaml-cpp.
    if ((value.is_object() || value.is_array()) && value.empty()) return false;
    out << YAML::LocalTag(key.substr(4));
    emit(out, value);
    return true;
  }
  return false;
}

void emit(YAML::Emitter& out, const OJson& v) {
  if (emit_short_form(out, v)) return;
  switch (v.type()) {
    case OJson::value_t::null:
      out << YAML::Null;
      break;
    case OJson::value_t::boolean:
      out << v.get<bool>();
      break;
    case OJson::value_t::number_integer:
      out << v.get<std::int64_t>();
      break;
    case OJson::value_t::number_unsigned:
      out << v.get<std::uint64_t>();
      break;
    case OJson::value_t::number_float: {
      std::string text = v.dump();
      if (!is_float_text(text)) text += ".0";
      out << text;
      break;
    }
    case OJson::value_t::string:
      emit_string(out, v.get<std::string>());
      break;
    case OJson::value_t::array:
      if (v.empty()) {
        out << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
        break;
      }
      out << YAML::BeginSeq;
      for (const auto& item : v) emit(out, item);
      out << YAML::EndSeq;
      break;
    case OJson::value_t::object:
      if (v.empty()) {
        out << YAML::Flow << YAML::BeginMap << YAML::EndMap;
        break;
      }
      out << YAML::BeginMap;
      for (const auto& [key, value] : v.items()) {
        out << YAML::Key;
        emit_string(out, key);
        out << YAML::Value;
        emit(out, value);
      }
      out << YAML::EndMap;
      break;
    default:
      out << YAML::Null;
  }
}

}  // namespace

Template parse_template(const std::string& yaml_text, const std::string& artifact) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kParse, artifact + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (auto p = python::check_yaml(yaml_text)) {
    throw Error(ErrorCode::kParse, artifact + ":" + std::to_string(p->line) + ": " + p->message);
  }
  if (!root.IsMap()) throw Error(ErrorCode::kParse, artifact + ": template root must be a mapping");
  Template t;
  std::set<std::string> top_seen;
  for (const auto& kv : root) {
    std::string key = kv.first.as<std::string>();
    if (!top_seen.insert(key).second) {
      throw Error(ErrorCode::kParse,
                  artifact + ":" + std::to_string(line_of(kv.first)) + ": duplicate top-level key " + key);
    }
    if (key == "Globals") {
      t.globals = convert(kv.second);
      if (t.globals.is_null()) t.globals = OJson::object();
    } else if (key == "Outputs") {
      t.outputs = convert(kv.second);
      if (t.outputs.is_null()) t.outputs = OJson::object();
    } else if (key == "Resources") {
      if (!kv.second.IsMap()) {
        throw Error(ErrorCode::kParse, artifact + ":" + std::to_string(line_of(kv.second)) + ": Resources must be a mapping");
      }
      std::set<std::string> ids;
      for (const auto& res : kv.second) {
        Resource r;
        r.logical_id = res.first.as<std::string>();
        r.line = line_of(res.first);
        if (!ids.insert(r.logical_id).second) {
          throw Error(ErrorCode::kParse,
                      artifact + ":" + std::to_string(r.line) + ": duplicate logical id " + r.logical_id);
        }
        if (!res.second.IsMap() || !res.second["Type"] || !res.second["Type"].IsScalar()) {
          throw Error(ErrorCode::kParse,
                      artifact + ":" + std::to_string(r.line) + ": resource " + r.logical_id + " has no Type");
        }
        for (const auto& field : res.second) {
          std::string fkey = field.first.as<std::string>();
          if (fkey == "Type") {
            r.type = field.second.Scalar();
          } else if (fkey == "Properties") {
            r.properties = convert(field.second);
            if (r.properties.is_null()) r.properties = OJson::object();
          } else {
            r.attributes[fkey] = convert(field.second);
          }
        }
        r.kind = kind_of_type(r.type);
        if (r.kind == ResourceKind::kUnknown) {
          Finding w;
          w.check_id = "P1";
          w.severity = Severity::kWarning;
          w.artifact = artifact;
          w.pointer = "/Resources/" + pointer_token(r.logical_id) + "/Type";
          w.message = "resource " + r.logical_id + " has unmodelled type " + r.type + "; kept as-is";
          t.parse_warnings.push_back(std::move(w));
        }
        t.resources.push_back(std::move(r));
      }
    } else {
      t.header[key] = convert(kv.second);
    }
  }
  return t;
}

Template load_template(const fs::path& path) {
  return parse_template(read_text_file(path), path.filename().string());
}

std::string serialize_template(const Template& t) {
  YAML::Emitter out;
  out.SetIndent(2);
  out.SetBoolFormat(YAML::TrueFalseBool);
  out << YAML::BeginMap;
  for (const auto& [key, value] : t.header.items()) {
    out << YAML::Key << key << YAML::Value;
    emit(out, value);
  }
  if (!t.globals.empty()) {
    out << YAML::Key << "Globals" << YAML::Value;
    emit(out, t.globals);
  }
  out << YAML::Key << "Resources" << YAML::Value << YAML::BeginMap;
  for (const auto& r : t.resources) {
    out << YAML::Key << r.logical_id << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "Type" << YAML::Value << r.type;
    for (const auto& [key, value] : r.attributes.items()) {
      if (key == "Metadata") continue;
      out << YAML::Key << key << YAML::Value;
      emit(out, value);
    }
    if (!r.properties.empty()) {
      out << YAML::Key << "Properties" << YAML::Value;
      emit(out, r.properties);
    }
    if (r.attributes.contains("Metadata")) {
      out << YAML::Key << "Metadata" << YAML::Value;
      emit(out, r.attributes["Metadata"]);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  if (!t.outputs.empty()) {
    out << YAML::Key << "Outputs" << YAML::Value;
    emit(out, t.outputs);
  }
  out << YAML::EndMap;
  if (!out.good()) throw Error(ErrorCode::kIo, "template serialization failed: " + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

namespace {

void collect_refs(const std::string& from, const OJson& node, const std::string& pointer, std::vector<Reference>& out) {
  if (auto ref = as_ref(node)) {
    out.push_back({from, ref->target, ref->attribute, ref->kind, pointer});
    return;
  }
  if (node.is_object() && node.size() == 1 && node.contains("Fn::Sub")) {
    const OJson& v = node["Fn::Sub"];
    std::string text;
    std::set<std::string> local;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_array() && !v.empty() && v[0].is_string()) {
      text = v[0].get<std::string>();
      if (v.size() > 1 && v[1].is_object()) {
        for (const auto& [k, val] : v[1].items()) {
          local.insert(k);
          collect_refs(from, val, pointer + "/Fn::Sub/1/" + pointer_token(k), out);
        }
      }
    }
    for (const auto& var : sub_variables(text)) {
      auto dot = var.find('.');
      std::string target = var.substr(0, dot);
      if (local.count(var) || local.count(target)) continue;
      out.push_back({from, target, dot == std::string::npos ? "" : var.substr(dot + 1), RefKind::kSub, pointer});
    }
    return;
  }
  if (node.is_object()) {
    for (const auto& [k, v] : node.items()) collect_refs(from, v, pointer + "/" + pointer_token(k), out);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) collect_refs(from, node[i], pointer + "/" + std::to_string(i), out);
  }
}

}  // namespace

std::vector<Reference> references(const Template& t) {
  std::vector<Reference> out;
  collect_refs("Globals", t.globals, "/Globals", out);
  for (const auto& r : t.resources) {
    std::string base = "/Resources/" + pointer_token(r.logical_id);
    collect_refs(r.logical_id, r.properties, base + "/Properties", out);
    for (const auto& [key, value] : r.attributes.items()) {
      if (key == "DependsOn") {
        OJson deps = value.is_array() ? value : OJson::array({value});
        for (std::size_t i = 0; i < deps.size(); ++i) {
          if (deps[i].is_string()) {
            out.push_back({r.logical_id, deps[i].get<std::string>(), "", RefKind::kRef,
                           base + "/DependsOn" + (value.is_array() ? "/" + std::to_string(i) : "")});
          }
        }
        continue;
      }
      collect_refs(r.logical_id, value, base + "/" + pointer_token(key), out);
    }
  }
  for (const auto& [name, value] : t.outputs.items()) {
    collect_refs("Outputs." + name, value, "/Outputs/" + pointer_token(name), out);
  }
  return out;
}

}  // namespace slsmig::sam
