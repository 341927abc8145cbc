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

#include <string>
#include <string_view>

// Identifier derivation shared by the planner, synthesizer and validator.
namespace slsmig::naming {

// Lowercase, runs of non-alphanumerics collapsed to '-', CamelCase split.
std::string slug(std::string_view text);

// "get-todos-by-todo-id" -> "GetTodosByTodoId".
std::string pascal(std::string_view slug_text);

// "send-order" / "OrderItems" -> "SEND_ORDER" / "ORDER_ITEMS".
std::string upper_snake(std::string_view text);

// <method-lowercase>-<path-slug>, "{param}" segments become "by-<param>".
std::string lambda_name(std::string_view method, std::string_view path);

std::string function_logical_id(std::string_view lambda_name);
std::string table_logical_id(std::string_view table_name);
std::string bucket_logical_id(std::string_view bucket_name);
std::string queue_logical_id(std::string_view queue_name);
std::string rule_logical_id(std::string_view rule_name);
std::string permission_logical_id(std::string_view rule_name, std::string_view target_lambda);

std::string table_env_var(std::string_view table_name);
std::string bucket_env_var(std::string_view bucket_name);
std::string queue_env_var(std::string_view queue_name);
std::string function_env_var(std::string_view lambda_name);

inline constexpr const char* kEventBusEnvVar = "EVENT_BUS_NAME";
inline constexpr const char* kApiLogicalId = "ServerlessApi";
inline constexpr const char* kUserPoolLogicalId = "UserPool";
inline constexpr const char* kUserPoolClientLogicalId = "UserPoolClient";
inline constexpr const char* kLayerLogicalId = "SharedLayer";
inline constexpr const char* kAuthorizerName = "CognitoAuthorizer";
inline constexpr const char* kStageName = "prod";
inline constexpr const char* kLayerDir = "layers/shared";
inline constexpr const char* kSharedModule = "shared_utils";

}  // namespace slsmig::naming
