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

#include "slsmig/synth.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "slsmig/naming.hpp"

namespace slsmig::synth {

using planner::Blueprint;
using planner::LambdaSpec;
using planner::Trigger;
using sam::make_getatt;
using sam::make_ref;
using sam::make_sub;
using sam::OJson;

bool is_node(const std::string& runtime) { return starts_with(runtime, "nodejs"); }

std::string code_uri(const std::string& lambda_name) { return "lambdas/" + lambda_name + "/"; }

std::string handler_property(const std::string& runtime) {
  return is_node(runtime) ? "handler.handler" : "handler.lambda_handler";
}

std::string handler_file(const std::string& runtime) { return is_node(runtime) ? "handler.js" : "handler.py"; }

std::string layer_subdir(const std::string& runtime) { return is_node(runtime) ? "nodejs/node_modules" : "python"; }

namespace {

const planner::TableSpec* table_by_var(const Blueprint& b, const std::string& var) {
  for (const auto& t : b.dynamodb_tables) {
    if (t.env_var == var) return &t;
  }
  return nullptr;
}

const planner::BucketSpec* bucket_by_var(const Blueprint& b, const std::string& var) {
  for (const auto& s3 : b.s3_buckets) {
    if (s3.env_var == var) return &s3;
  }
  return nullptr;
}

const planner::QueueSpec* queue_by_var(const Blueprint& b, const std::string& var) {
  for (const auto& q : b.sqs_queues) {
    if (q.env_var == var) return &q;
  }
  return nullptr;
}

const LambdaSpec* function_by_var(const Blueprint& b, const std::string& var) {
  for (const auto& s : b.lambda_functions) {
    if (naming::function_env_var(s.name) == var) return &s;
  }
  return nullptr;
}

const planner::QueueSpec* queue_by_name(const Blueprint& b, const std::string& name) {
  for (const auto& q : b.sqs_queues) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

const planner::RuleSpec* rule_by_name(const Blueprint& b, const std::string& name) {
  for (const auto& r : b.eventbridge_rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::string runtime_of(const Blueprint& b) {
  return b.lambda_functions.empty() ? planner::kPythonRuntime : b.lambda_functions.front().runtime;
}

bool any_layer(const Blueprint& b) {
  return std::any_of(b.lambda_functions.begin(), b.lambda_functions.end(),
                     [](const LambdaSpec& s) { return s.uses_shared_layer; });
}

// Callees before callers so every !Ref points backwards; ties by name.
std::vector<const LambdaSpec*> topological(const Blueprint& b) {
  std::map<std::string, const LambdaSpec*> by_name;
  for (const auto& s : b.lambda_functions) by_name[s.name] = &s;
  std::map<std::string, int> pending;
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& s : b.lambda_functions) {
    pending[s.name];
    for (const auto& callee : s.invokes) {
      if (!by_name.count(callee) || callee == s.name) continue;
      ++pending[s.name];
      dependents[callee].push_back(s.name);
    }
  }
  std::set<std::string> ready;
  for (const auto& [name, n] : pending) {
    if (n == 0) ready.insert(name);
  }
  std::vector<const LambdaSpec*> out;
  std::set<std::string> emitted;
  while (out.size() < by_name.size()) {
    if (ready.empty()) {
      // Invoke cycle: release the smallest remaining name.
      for (const auto& [name, spec] : by_name) {
        if (!emitted.count(name)) {
          ready.insert(name);
          break;
        }
      }
    }
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    if (!emitted.insert(next).second) continue;
    out.push_back(by_name[next]);
    for (const auto& d : dependents[next]) {
      if (--pending[d] == 0 && !emitted.count(d)) ready.insert(d);
    }
  }
  return out;
}

void add_resource(sam::Template& t, const std::string& id, const std::string& type, OJson props) {
  sam::Resource r;
  r.logical_id = id;
  r.type = type;
  r.kind = sam::kind_of_type(type);
  r.properties = std::move(props);
  t.resources.push_back(std::move(r));
}

std::string target_id(const std::string& name) {
  std::string id = naming::pascal(name) + "Target";
  return id.size() > 64 ? id.substr(0, 64) : id;
}

}  // namespace

OJson env_var_value(const Blueprint& b, const std::string& var) {
  if (auto t = table_by_var(b, var)) return make_ref(naming::table_logical_id(t->name));
  if (auto s3 = bucket_by_var(b, var)) return make_ref(naming::bucket_logical_id(s3->name));
  if (auto q = queue_by_var(b, var)) return make_ref(naming::queue_logical_id(q->name));
  if (var == naming::kEventBusEnvVar) return "default";
  if (auto f = function_by_var(b, var)) return make_ref(naming::function_logical_id(f->name));
  return "";
}

OJson policy_for_env_var(const Blueprint& b, const std::string& var) {
  if (auto t = table_by_var(b, var)) {
    return OJson{{"DynamoDBCrudPolicy", {{"TableName", make_ref(naming::table_logical_id(t->name))}}}};
  }
  if (auto s3 = bucket_by_var(b, var)) {
    return OJson{{"S3CrudPolicy", {{"BucketName", make_ref(naming::bucket_logical_id(s3->name))}}}};
  }
  if (auto q = queue_by_var(b, var)) {
    return OJson{{"SQSSendMessagePolicy", {{"QueueName", make_getatt(naming::queue_logical_id(q->name), "QueueName")}}}};
  }
  if (var == naming::kEventBusEnvVar) return OJson{{"EventBridgePutEventsPolicy", {{"EventBusName", "default"}}}};
  if (auto f = function_by_var(b, var)) {
    return OJson{{"LambdaInvokePolicy", {{"FunctionName", make_ref(naming::function_logical_id(f->name))}}}};
  }
  return nullptr;
}

sam::Template synthesize_template(const Blueprint& b, const SynthOptions& options) {
  for (const auto& s : b.lambda_functions) {
    for (const auto& p : s.publishes_to) {
      bool known = p.kind == "sqs_queue" ? queue_by_name(b, p.target_name) != nullptr
                                         : rule_by_name(b, p.target_name) != nullptr;
      if (!known) {
        throw Error(ErrorCode::kPrecondition,
                    "lambda " + s.name + " publishes to undeclared " + p.kind + " " + p.target_name);
      }
    }
    for (const auto& callee : s.invokes) {
      if (!b.find(callee)) throw Error(ErrorCode::kPrecondition, "lambda " + s.name + " invokes unknown " + callee);
    }
  }
  const std::string runtime = runtime_of(b);
  sam::Template t;
  t.header["AWSTemplateFormatVersion"] = "2010-09-09";
  t.header["Transform"] = "AWS::Serverless-2016-10-31";
  t.header["Description"] = "Serverless application migrated from a monolith";
  t.globals["Function"] = OJson{{"Timeout", options.function_timeout}, {"MemorySize", options.function_memory}};

  // Shared stateful resources.
  if (any_layer(b)) {
    add_resource(t, naming::kLayerLogicalId, "AWS::Serverless::LayerVersion",
                 OJson{{"LayerName", make_sub("${AWS::StackName}-shared")},
                       {"ContentUri", std::string(naming::kLayerDir) + "/"},
                       {"CompatibleRuntimes", OJson::array({runtime})},
                       {"RetentionPolicy", "Delete"}});
  }
  for (const auto& tb : b.dynamodb_tables) {
    add_resource(t, naming::table_logical_id(tb.name), "AWS::DynamoDB::Table",
                 OJson{{"BillingMode", "PAY_PER_REQUEST"},
                       {"AttributeDefinitions",
                        OJson::array({OJson{{"AttributeName", tb.partition_key}, {"AttributeType", tb.type}}})},
                       {"KeySchema", OJson::array({OJson{{"AttributeName", tb.partition_key}, {"KeyType", "HASH"}}})}});
  }
  for (const auto& s3 : b.s3_buckets) {
    add_resource(t, naming::bucket_logical_id(s3.name), "AWS::S3::Bucket",
                 OJson{{"PublicAccessBlockConfiguration",
                        {{"BlockPublicAcls", true},
                         {"BlockPublicPolicy", true},
                         {"IgnorePublicAcls", true},
                         {"RestrictPublicBuckets", true}}}});
  }
  for (const auto& q : b.sqs_queues) {
    add_resource(t, naming::queue_logical_id(q.name), "AWS::SQS::Queue",
                 OJson{{"VisibilityTimeout", std::max(options.function_timeout * 6, 30)}});
  }
  if (b.cognito) {
    add_resource(t, naming::kUserPoolLogicalId, "AWS::Cognito::UserPool",
                 OJson{{"UserPoolName", make_sub("${AWS::StackName}-users")},
                       {"UsernameAttributes", OJson::array({"email"})},
                       {"AutoVerifiedAttributes", OJson::array({"email"})}});
    add_resource(t, naming::kUserPoolClientLogicalId, "AWS::Cognito::UserPoolClient",
                 OJson{{"UserPoolId", make_ref(naming::kUserPoolLogicalId)},
                       {"GenerateSecret", false},
                       {"ExplicitAuthFlows", OJson::array({"ALLOW_USER_PASSWORD_AUTH", "ALLOW_REFRESH_TOKEN_AUTH"})}});
  }
  OJson api{{"StageName", b.api_gateway.stage_name},
            {"Cors",
             {{"AllowMethods", "'GET,POST,PUT,PATCH,DELETE,OPTIONS'"},
              {"AllowHeaders", "'Content-Type,Authorization'"},
              {"AllowOrigin", "'" + b.api_gateway.cors_allow_origin + "'"}}}};
  if (b.api_gateway.cors_allow_credentials) api["Cors"]["AllowCredentials"] = true;
  if (b.cognito) {
    OJson auth{{"Authorizers", {{b.cognito->authorizer, {{"UserPoolArn", make_getatt(naming::kUserPoolLogicalId, "Arn")}}}}}};
    if (b.api_gateway.default_authorizer) {
      auth["DefaultAuthorizer"] = *b.api_gateway.default_authorizer;
      auth["AddDefaultAuthorizerToCorsPreflight"] = false;
    }
    api["Auth"] = auth;
  }
  add_resource(t, naming::kApiLogicalId, "AWS::Serverless::Api", api);

  // One Function per spec.
  for (const LambdaSpec* s : topological(b)) {
    OJson props{{"CodeUri", code_uri(s->name)}, {"Handler", handler_property(s->runtime)}, {"Runtime", s->runtime}};
    if (s->uses_shared_layer) props["Layers"] = OJson::array({make_ref(naming::kLayerLogicalId)});
    if (!s->env_vars.empty()) {
      OJson vars = OJson::object();
      for (const auto& v : s->env_vars) vars[v] = env_var_value(b, v);
      props["Environment"] = {{"Variables", vars}};
    }
    OJson policies = OJson::array();
    for (const auto& v : s->env_vars) {
      OJson p = policy_for_env_var(b, v);
      if (!p.is_null() && std::find(policies.begin(), policies.end(), p) == policies.end()) policies.push_back(p);
    }
    if (!policies.empty()) props["Policies"] = policies;
    OJson events = OJson::object();
    if (s->trigger == Trigger::kHttp) {
      OJson ev{{"RestApiId", make_ref(naming::kApiLogicalId)}, {"Path", s->path}, {"Method", to_lower(s->method)}};
      if (s->auth == "none" && b.api_gateway.default_authorizer) {
        ev["Auth"] = {{"Authorizer", "NONE"}};
      } else if (s->auth == "required" && !b.api_gateway.default_authorizer && b.cognito) {
        ev["Auth"] = {{"Authorizer", b.cognito->authorizer}};
      }
      events["Api"] = {{"Type", "Api"}, {"Properties", ev}};
    } else if (s->trigger == Trigger::kSqs) {
      for (const auto& q : b.sqs_queues) {
        if (q.consumer != s->name) continue;
        events[naming::queue_logical_id(q.name) + "Event"] = {
            {"Type", "SQS"},
            {"Properties", {{"Queue", make_getatt(naming::queue_logical_id(q.name), "Arn")}, {"BatchSize", 10}}}};
      }
    }
    if (!events.empty()) props["Events"] = events;
    add_resource(t, naming::function_logical_id(s->name), "AWS::Serverless::Function", props);
  }

  // Async wiring and outputs.
  for (const auto& r : b.eventbridge_rules) {
    OJson targets = OJson::array();
    for (const auto& target : r.targets) {
      targets.push_back({{"Arn", make_getatt(naming::function_logical_id(target), "Arn")}, {"Id", target_id(target)}});
    }
    add_resource(t, naming::rule_logical_id(r.name), "AWS::Events::Rule",
                 OJson{{"EventBusName", "default"},
                       {"EventPattern", {{"source", OJson::array({r.source})},
                                         {"detail-type", OJson::array({r.detail_type})}}},
                       {"State", "ENABLED"},
                       {"Targets", targets}});
  }
  for (const auto& r : b.eventbridge_rules) {
    for (const auto& target : r.targets) {
      add_resource(t, naming::permission_logical_id(r.name, target), "AWS::Lambda::Permission",
                   OJson{{"Action", "lambda:InvokeFunction"},
                         {"FunctionName", make_ref(naming::function_logical_id(target))},
                         {"Principal", "events.amazonaws.com"},
                         {"SourceArn", make_getatt(naming::rule_logical_id(r.name), "Arn")}});
    }
  }
  for (const auto& s : b.lambda_functions) {
    if (s.trigger != Trigger::kHttp) continue;
    t.outputs[naming::pascal(s.name) + "Url"] = {
        {"Description", s.method + " " + s.path},
        {"Value", make_sub("https://${" + std::string(naming::kApiLogicalId) +
                           "}.execute-api.${AWS::Region}.amazonaws.com/" + b.api_gateway.stage_name + s.path)}};
  }
  if (b.cognito) {
    t.outputs["UserPoolId"] = {{"Description", "Cognito user pool id"}, {"Value", make_ref(naming::kUserPoolLogicalId)}};
  }
  return t;
}

namespace {

struct StubPlan {
  std::vector<std::pair<std::string, std::string>> tables;  // (env var, table)
  std::vector<std::string> buckets;
  std::vector<std::string> queues;  // env vars
  const planner::RuleSpec* rule = nullptr;
  std::vector<std::string> invokes;  // env vars
  std::vector<std::string> other;
};

StubPlan plan_stub(const LambdaSpec& s, const Blueprint& b) {
  StubPlan p;
  for (const auto& v : s.env_vars) {
    if (auto t = table_by_var(b, v)) {
      p.tables.emplace_back(v, t->name);
    } else if (bucket_by_var(b, v)) {
      p.buckets.push_back(v);
    } else if (queue_by_var(b, v)) {
      p.queues.push_back(v);
    } else if (function_by_var(b, v)) {
      p.invokes.push_back(v);
    } else if (v != naming::kEventBusEnvVar) {
      p.other.push_back(v);
    }
  }
  for (const auto& pub : s.publishes_to) {
    if (pub.kind == "eventbridge_rule") p.rule = rule_by_name(b, pub.target_name);
  }
  return p;
}

std::string py_stub(const LambdaSpec& s, const Blueprint& b) {
  StubPlan p = plan_stub(s, b);
  bool aws = !p.tables.empty() || !p.buckets.empty() || !p.queues.empty() || p.rule || !p.invokes.empty();
  std::ostringstream o;
  o << "\"\"\"Lambda entry point for " << s.name << " (replaces " << s.handler_function << ").\"\"\"\n\n";
  o << "import json\nimport os\n";
  if (aws) o << "\nimport boto3\n";
  if (s.uses_shared_layer) o << "from " << naming::kSharedModule << " import json_response\n";
  o << "\n";
  for (const auto& v : s.env_vars) o << v << " = os.environ[\"" << v << "\"]\n";
  if (!s.env_vars.empty()) o << "\n";
  if (!p.tables.empty()) o << "dynamodb = boto3.resource(\"dynamodb\")\n";
  if (!p.buckets.empty()) o << "s3 = boto3.client(\"s3\")\n";
  if (!p.queues.empty()) o << "sqs = boto3.client(\"sqs\")\n";
  if (p.rule) o << "events = boto3.client(\"events\")\n";
  if (!p.invokes.empty()) o << "lambda_client = boto3.client(\"lambda\")\n";
  if (aws) o << "\n";
  o << "\ndef lambda_handler(event, context):\n";
  o << "    claims = ((event.get(\"requestContext\") or {}).get(\"authorizer\") or {}).get(\"claims\") or {}\n";
  o << "    payload = {\n";
  o << "        \"function\": \"" << s.name << "\",\n";
  o << "        \"user\": claims.get(\"sub\"),\n";
  o << "        \"path_parameters\": event.get(\"pathParameters\"),\n";
  o << "        \"body\": event.get(\"body\"),\n";
  o << "    }\n";
  for (const auto& [var, table] : p.tables) o << "    dynamodb.Table(" << var << ").scan(Limit=1)\n";
  for (const auto& var : p.buckets) o << "    s3.list_objects_v2(Bucket=" << var << ", MaxKeys=1)\n";
  for (const auto& var : p.queues) {
    o << "    sqs.send_message(QueueUrl=" << var << ", MessageBody=json.dumps(payload))\n";
  }
  if (p.rule) {
    o << "    events.put_events(Entries=[{\n";
    o << "        \"EventBusName\": " << naming::kEventBusEnvVar << ",\n";
    o << "        \"Source\": \"" << p.rule->source << "\",\n";
    o << "        \"DetailType\": \"" << p.rule->detail_type << "\",\n";
    o << "        \"Detail\": json.dumps(payload),\n";
    o << "    }])\n";
  }
  for (const auto& var : p.invokes) {
    o << "    lambda_client.invoke(FunctionName=" << var << ", Payload=json.dumps(payload).encode(\"utf-8\"))\n";
  }
  if (s.uses_shared_layer) {
    o << "    return json_response(200, payload)\n";
  } else {
    o << "    return {\n";
    o << "        \"statusCode\": 200,\n";
    o << "        \"headers\": {\"Content-Type\": \"application/json\", \"Access-Control-Allow-Origin\": \"*\"},\n";
    o << "        \"body\": json.dumps(payload),\n";
    o << "    }\n";
  }
  return o.str();
}

std::string js_stub(const LambdaSpec& s, const Blueprint& b) {
  StubPlan p = plan_stub(s, b);
  std::ostringstream o;
  o << "// Lambda entry point for " << s.name << " (replaces " << s.handler_function << ").\n";
  o << "'use strict';\n\n";
  if (!p.tables.empty()) {
    o << "const { DynamoDBClient } = require('@aws-sdk/client-dynamodb');\n";
    o << "const { DynamoDBDocumentClient, ScanCommand } = require('@aws-sdk/lib-dynamodb');\n";
  }
  if (!p.buckets.empty()) o << "const { S3Client, ListObjectsV2Command } = require('@aws-sdk/client-s3');\n";
  if (!p.queues.empty()) o << "const { SQSClient, SendMessageCommand } = require('@aws-sdk/client-sqs');\n";
  if (p.rule) o << "const { EventBridgeClient, PutEventsCommand } = require('@aws-sdk/client-eventbridge');\n";
  if (!p.invokes.empty()) o << "const { LambdaClient, InvokeCommand } = require('@aws-sdk/client-lambda');\n";
  if (s.uses_shared_layer) o << "const { jsonResponse } = require('" << naming::kSharedModule << "');\n";
  bool any_require = !p.tables.empty() || !p.buckets.empty() || !p.queues.empty() || p.rule || !p.invokes.empty() ||
                     s.uses_shared_layer;
  if (any_require) o << "\n";
  for (const auto& v : s.env_vars) o << "const " << v << " = process.env." << v << ";\n";
  if (!s.env_vars.empty()) o << "\n";
  if (!p.tables.empty()) o << "const ddb = DynamoDBDocumentClient.from(new DynamoDBClient({}));\n";
  if (!p.buckets.empty()) o << "const s3 = new S3Client({});\n";
  if (!p.queues.empty()) o << "const sqs = new SQSClient({});\n";
  if (p.rule) o << "const eventBridge = new EventBridgeClient({});\n";
  if (!p.invokes.empty()) o << "const lambda = new LambdaClient({});\n";
  if (!p.tables.empty() || !p.buckets.empty() || !p.queues.empty() || p.rule || !p.invokes.empty()) o << "\n";
  o << "exports.handler = async (event) => {\n";
  o << "  const claims = (event.requestContext && event.requestContext.authorizer &&\n";
  o << "    event.requestContext.authorizer.claims) || {};\n";
  o << "  const payload = {\n";
  o << "    function: '" << s.name << "',\n";
  o << "    user: claims.sub,\n";
  o << "    pathParameters: event.pathParameters,\n";
  o << "    body: event.body,\n";
  o << "  };\n";
  for (const auto& [var, table] : p.tables) {
    o << "  await ddb.send(new ScanCommand({ TableName: " << var << ", Limit: 1 }));\n";
  }
  for (const auto& var : p.buckets) {
    o << "  await s3.send(new ListObjectsV2Command({ Bucket: " << var << ", MaxKeys: 1 }));\n";
  }
  for (const auto& var : p.queues) {
    o << "  await sqs.send(new SendMessageCommand({ QueueUrl: " << var << ", MessageBody: JSON.stringify(payload) }));\n";
  }
  if (p.rule) {
    o << "  await eventBridge.send(new PutEventsCommand({\n";
    o << "    Entries: [{\n";
    o << "      EventBusName: " << naming::kEventBusEnvVar << ",\n";
    o << "      Source: '" << p.rule->source << "',\n";
    o << "      DetailType: '" << p.rule->detail_type << "',\n";
    o << "      Detail: JSON.stringify(payload),\n";
    o << "    }],\n";
    o << "  }));\n";
  }
  for (const auto& var : p.invokes) {
    o << "  await lambda.send(new InvokeCommand({ FunctionName: " << var
      << ", Payload: Buffer.from(JSON.stringify(payload)) }));\n";
  }
  if (s.uses_shared_layer) {
    o << "  return jsonResponse(200, payload);\n";
  } else {
    o << "  return {\n";
    o << "    statusCode: 200,\n";
    o << "    headers: { 'Content-Type': 'application/json', 'Access-Control-Allow-Origin': '*' },\n";
    o << "    body: JSON.stringify(payload),\n";
    o << "  };\n";
  }
  o << "};\n";
  return o.str();
}

const char* kPyLayer = R"py("""Helpers shared by every function through the Lambda layer."""

import json


def json_response(status, payload):
    return {
        "statusCode": status,
        "headers": {"Content-Type": "application/json", "Access-Control-Allow-Origin": "*"},
        "body": json.dumps(payload, default=str),
    }
)py";

const char* kJsLayer = R"js(// Helpers shared by every function through the Lambda layer.
'use strict';

function jsonResponse(status, payload) {
  return {
    statusCode: status,
    headers: { 'Content-Type': 'application/json', 'Access-Control-Allow-Origin': '*' },
    body: JSON.stringify(payload),
  };
}

module.exports = { jsonResponse };
)js";

}  // namespace

std::map<std::string, std::string> stub_dependencies(const LambdaSpec& s, const Blueprint& b) {
  StubPlan p = plan_stub(s, b);
  std::map<std::string, std::string> deps;
  bool aws = !p.tables.empty() || !p.buckets.empty() || !p.queues.empty() || p.rule || !p.invokes.empty();
  if (!is_node(s.runtime)) {
    if (aws) deps["boto3"] = "";
  } else {
    const char* v = "^3.600.0";
    if (!p.tables.empty()) {
      deps["@aws-sdk/client-dynamodb"] = v;
      deps["@aws-sdk/lib-dynamodb"] = v;
    }
    if (!p.buckets.empty()) deps["@aws-sdk/client-s3"] = v;
    if (!p.queues.empty()) deps["@aws-sdk/client-sqs"] = v;
    if (p.rule) deps["@aws-sdk/client-eventbridge"] = v;
    if (!p.invokes.empty()) deps["@aws-sdk/client-lambda"] = v;
  }
  const auto& builtins = sam::builtin_packages(is_node(s.runtime) ? "nodejs" : "python");
  for (auto it = deps.begin(); it != deps.end();) {
    it = builtins.count(it->first) ? deps.erase(it) : std::next(it);
  }
  return deps;
}

std::vector<GeneratedFile> render_stubs(const Blueprint& b) {
  std::vector<GeneratedFile> out;
  for (const auto& s : b.lambda_functions) {
    std::string dir = "lambdas/" + s.name + "/";
    bool node = is_node(s.runtime);
    out.push_back({dir + handler_file(s.runtime), node ? js_stub(s, b) : py_stub(s, b)});
    auto deps = stub_dependencies(s, b);
    if (deps.empty()) continue;
    if (node) {
      Json pkg = {{"name", s.name}, {"version", "1.0.0"}, {"private", true}, {"main", "handler.js"}};
      pkg["dependencies"] = Json::object();
      for (const auto& [name, version] : deps) pkg["dependencies"][name] = version;
      out.push_back({dir + "package.json", canonical_json(pkg)});
    } else {
      std::string req;
      for (const auto& [name, version] : deps) req += name + version + "\n";
      out.push_back({dir + "requirements.txt", req});
    }
  }
  if (any_layer(b)) {
    std::string runtime = runtime_of(b);
    std::string base = std::string(naming::kLayerDir) + "/" + layer_subdir(runtime) + "/" + naming::kSharedModule;
    out.push_back(is_node(runtime) ? GeneratedFile{base + ".js", kJsLayer} : GeneratedFile{base + ".py", kPyLayer});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& c) { return a.path < c.path; });
  return out;
}

namespace {

std::set<std::string> previously_generated(const fs::path& out_dir) {
  std::set<std::string> out;
  std::error_code ec;
  if (!fs::exists(out_dir / kGeneratedManifest, ec)) return out;
  for (const auto& line : split_lines(read_text_file(out_dir / kGeneratedManifest))) {
    std::string t = trim(line);
    if (!t.empty()) out.insert(t);
  }
  return out;
}

void write_generated(const fs::path& out_dir, std::vector<GeneratedFile> files, bool keep_template) {
  std::set<std::string> previous = previously_generated(out_dir);
  std::error_code ec;
  for (const auto& f : files) {
    if (fs::exists(out_dir / f.path, ec) && !previous.count(f.path)) {
      throw Error(ErrorCode::kConflict, "refusing to overwrite non-generated file " + (out_dir / f.path).string());
    }
  }
  std::set<std::string> current;
  for (const auto& f : files) current.insert(f.path);
  if (keep_template && previous.count("template.yaml")) current.insert("template.yaml");
  for (const auto& stale : previous) {
    if (!current.count(stale)) fs::remove(out_dir / stale, ec);
  }
  for (const auto& f : files) write_text_atomic(out_dir / f.path, f.content);
  std::string manifest;
  for (const auto& p : current) manifest += p + "\n";
  write_text_atomic(out_dir / kGeneratedManifest, manifest);
}

}  // namespace

void synthesize_stubs(const Blueprint& b, const fs::path& out_dir) { write_generated(out_dir, render_stubs(b), true); }

void synthesize_workspace(const Blueprint& b, const fs::path& out_dir, const SynthOptions& options) {
  std::vector<GeneratedFile> files = render_stubs(b);
  files.push_back({"template.yaml", sam::serialize_template(synthesize_template(b, options))});
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& c) { return a.path < c.path; });
  write_generated(out_dir, std::move(files), false);
}

}  // namespace slsmig::synth
