// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edaflow/stage_services.hpp"

namespace edaflow::rpc {

// JSON-RPC 2.0 error codes used by the endpoint.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kInternalError = -32603;

// Discovery descriptor for one stage tool: name, description, and a JSON
// Schema for its request body, derived from the parameter catalog.
nlohmann::ordered_json tool_descriptor(Stage s, const cat::ParamCatalog& catalog);

// {"tools": [descriptor...]} in the given stage order.
nlohmann::ordered_json tool_list(const std::vector<Stage>& stages,
                                 const cat::ParamCatalog& catalog);

// JSON-RPC 2.0 endpoint over the stage services. Supports `tools/list` and
// `tools/call`; single requests, batches, and notifications (which get no
// response). Tool execution failures come back inside the result with
// isError=true so the protocol layer stays free of domain error codes.
class RpcEndpoint {
 public:
  RpcEndpoint(svc::StageServices* services, std::vector<Stage> stages);

  // Full wire handling: body text in, response text out. Empty string means
  // no response is due (notification or all-notification batch).
  std::string handle_text(const std::string& body);

  // One request object; nullopt for notifications.
  std::optional<nlohmann::ordered_json> handle_one(const nlohmann::json& req);

 private:
  nlohmann::ordered_json dispatch(const std::string& method, const nlohmann::json& params);
  nlohmann::ordered_json call_tool(const nlohmann::json& params);

  svc::StageServices* services_;
  std::vector<Stage> stages_;
};

}  // namespace edaflow::rpc
