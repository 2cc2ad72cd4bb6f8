// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/rpc.hpp"

#include <algorithm>

#include "edaflow/error.hpp"

namespace edaflow::rpc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json schema_for_param(const cat::ParamSpec& spec) {
  ordered_json p;
  switch (spec.kind) {
    case cat::ParamKind::real_num:
      p["type"] = "number";
      p["minimum"] = spec.min;
      p["maximum"] = spec.max;
      break;
    case cat::ParamKind::int_num:
      p["type"] = "integer";
      p["minimum"] = static_cast<long long>(spec.min);
      p["maximum"] = static_cast<long long>(spec.max);
      break;
    case cat::ParamKind::enum_str:
      p["type"] = "string";
      p["enum"] = spec.options;
      break;
    case cat::ParamKind::boolean:
      p["type"] = "boolean";
      break;
    case cat::ParamKind::str:
      p["type"] = "string";
      if (!spec.options.empty()) p["examples"] = spec.options;
      break;
  }
  p["description"] = spec.name;
  return p;
}

ordered_json params_object_schema(Stage s, cat::RequestSlot slot,
                                  const cat::ParamCatalog& catalog) {
  ordered_json props = ordered_json::object();
  for (const cat::ParamSpec* spec : catalog.stage_params(s))
    if (spec->slot == slot) props[spec->request_key] = schema_for_param(*spec);
  ordered_json obj;
  obj["type"] = "object";
  obj["properties"] = props;
  obj["additionalProperties"] = false;
  return obj;
}

ordered_json string_prop(const char* description) {
  ordered_json p;
  p["type"] = "string";
  p["description"] = description;
  return p;
}

ordered_json index_prop(const char* description) {
  ordered_json p;
  p["type"] = "integer";
  p["minimum"] = 0;
  p["description"] = description;
  return p;
}

const char* tool_description(Stage s) {
  switch (s) {
    case Stage::synthesis:
      return "Run RTL synthesis: renders a combined analyze/elaborate/compile TCL "
             "script into a versioned workspace and executes it.";
    case Stage::placement:
      return "Run unified placement (floorplan, power plan, place) against a completed "
             "synthesis version.";
    case Stage::cts:
      return "Run clock tree synthesis with density and transition constraints against "
             "a completed placement.";
    case Stage::route:
      return "Run detail routing, verify DRC, and optionally archive final artifacts.";
  }
  return "";
}

ordered_json error_response(const json& id, int code, const std::string& message) {
  ordered_json r;
  r["jsonrpc"] = "2.0";
  r["error"]["code"] = code;
  r["error"]["message"] = message;
  r["id"] = id;
  return r;
}

}  // namespace

ordered_json tool_descriptor(Stage s, const cat::ParamCatalog& catalog) {
  ordered_json props = ordered_json::object();
  props["design"] = string_prop("design name");
  ordered_json tech;
  tech["type"] = "string";
  if (const cat::ParamSpec* spec = catalog.find("technology")) tech["enum"] = spec->options;
  tech["description"] = "technology node";
  std::vector<std::string> required = {"design"};

  switch (s) {
    case Stage::synthesis: {
      props["top_name"] = string_prop("top module name (defaults to design)");
      props["rtl_dir"] = string_prop("RTL source directory (default rtl)");
      props["syn_version"] = string_prop("synthesis version label (default v1)");
      props["technology"] = tech;
      for (const cat::ParamSpec* spec : catalog.stage_params(Stage::synthesis))
        if (spec->slot == cat::RequestSlot::field)
          props[spec->request_key] = schema_for_param(*spec);
      break;
    }
    case Stage::placement: {
      props["syn_ver"] = string_prop("completed synthesis version to place");
      props["technology"] = tech;
      props["g_idx"] = index_prop("global-config index");
      props["p_idx"] = index_prop("placement-config index");
      props["stage_params"] = params_object_schema(Stage::placement,
                                                   cat::RequestSlot::stage_params, catalog);
      required.push_back("syn_ver");
      break;
    }
    case Stage::cts: {
      props["impl_ver"] = string_prop("completed placement implementation version");
      props["technology"] = tech;
      for (const cat::ParamSpec* spec : catalog.stage_params(Stage::cts))
        if (spec->slot == cat::RequestSlot::field)
          props[spec->request_key] = schema_for_param(*spec);
      props["cts_params"] = params_object_schema(Stage::cts, cat::RequestSlot::cts_params,
                                                 catalog);
      required.push_back("impl_ver");
      break;
    }
    case Stage::route: {
      props["impl_ver"] = string_prop("implementation version with completed cts");
      props["technology"] = tech;
      props["route_params"] = params_object_schema(Stage::route,
                                                   cat::RequestSlot::route_params, catalog);
      ordered_json collect;
      collect["type"] = "boolean";
      collect["description"] = "archive final design artifacts after routing";
      props["collect_artifacts"] = collect;
      ordered_json fmt;
      fmt["type"] = "string";
      fmt["enum"] = std::vector<std::string>{"tar", "tar.gz"};
      fmt["description"] = "artifact archive format";
      props["archive_format"] = fmt;
      required.push_back("impl_ver");
      break;
    }
  }

  ordered_json schema;
  schema["type"] = "object";
  schema["properties"] = props;
  schema["required"] = required;
  schema["additionalProperties"] = false;

  ordered_json tool;
  tool["name"] = tool_name(s);
  tool["description"] = tool_description(s);
  tool["inputSchema"] = schema;
  return tool;
}

ordered_json tool_list(const std::vector<Stage>& stages, const cat::ParamCatalog& catalog) {
  ordered_json tools = ordered_json::array();
  for (Stage s : stages) tools.push_back(tool_descriptor(s, catalog));
  ordered_json r;
  r["tools"] = tools;
  return r;
}

RpcEndpoint::RpcEndpoint(svc::StageServices* services, std::vector<Stage> stages)
    : services_(services), stages_(std::move(stages)) {}

ordered_json RpcEndpoint::call_tool(const json& params) {
  if (!params.is_object() || !params.contains("name") || !params["name"].is_string())
    raise(ErrCode::InvalidRequest, "tools/call params require a string 'name'");
  const std::string name = params["name"].get<std::string>();
  json args = params.value("arguments", json::object());
  if (!args.is_object()) raise(ErrCode::InvalidRequest, "'arguments' must be an object");

  auto serves = [&](Stage s) {
    return std::find(stages_.begin(), stages_.end(), s) != stages_.end();
  };
  std::optional<Stage> stage;
  for (Stage s : kStageOrder)
    if (name == tool_name(s) && serves(s)) stage = s;
  if (!stage) raise(ErrCode::InvalidRequest, "unknown tool '" + name + "'");

  svc::StageResponse resp;
  switch (*stage) {
    case Stage::synthesis:
      resp = services_->run_synthesis(svc::parse_synth_request(args, services_->catalog()));
      break;
    case Stage::placement:
      resp = services_->run_placement(svc::parse_placement_request(args, services_->catalog()));
      break;
    case Stage::cts:
      resp = services_->run_cts(svc::parse_cts_request(args, services_->catalog()));
      break;
    case Stage::route:
      resp = services_->run_route(svc::parse_route_request(args, services_->catalog()));
      break;
  }
  ordered_json content_item;
  content_item["type"] = "text";
  content_item["text"] = resp.to_json().dump();
  ordered_json result;
  result["content"] = ordered_json::array({content_item});
  result["isError"] = false;
  return result;
}

ordered_json RpcEndpoint::dispatch(const std::string& method, const json& params) {
  if (method == "tools/list") return tool_list(stages_, services_->catalog());
  if (method == "tools/call") {
    try {
      return call_tool(params);
    } catch (const Error& e) {
      // Unknown tool / malformed params are protocol errors; anything raised
      // by a real tool run is reported inside the result.
      if (e.code() == ErrCode::InvalidRequest &&
          (std::string(e.what()).find("unknown tool") != std::string::npos ||
           std::string(e.what()).find("tools/call params") != std::string::npos ||
           std::string(e.what()).find("'arguments'") != std::string::npos))
        throw;
      ordered_json err;
      err["error"]["code"] = err_name(e.code());
      err["error"]["message"] = e.what();
      ordered_json content_item;
      content_item["type"] = "text";
      content_item["text"] = err.dump();
      ordered_json result;
      result["content"] = ordered_json::array({content_item});
      result["isError"] = true;
      return result;
    }
  }
  raise(ErrCode::NoMatches, "method not found: " + method);
}

std::optional<ordered_json> RpcEndpoint::handle_one(const json& req) {
  json id = nullptr;
  bool has_id = req.is_object() && req.contains("id");
  if (has_id) id = req["id"];

  if (!req.is_object() || req.value("jsonrpc", "") != "2.0" || !req.contains("method") ||
      !req["method"].is_string()) {
    if (!has_id) id = nullptr;
    return error_response(id, kInvalidRequest, "Invalid Request");
  }

  const std::string method = req["method"].get<std::string>();
  const json params = req.value("params", json::object());

  if (!has_id) {
    // Notification: execute for effect, report nothing.
    try {
      dispatch(method, params);
    } catch (...) {
    }
    return std::nullopt;
  }

  try {
    ordered_json result = dispatch(method, params);
    ordered_json r;
    r["jsonrpc"] = "2.0";
    r["result"] = result;
    r["id"] = id;
    return r;
  } catch (const Error& e) {
    if (e.code() == ErrCode::NoMatches)
      return error_response(id, kMethodNotFound, e.what());
    if (e.code() == ErrCode::InvalidRequest)
      return error_response(id, kInvalidParams, e.what());
    return error_response(id, kInternalError, e.what());
  } catch (const std::exception& e) {
    return error_response(id, kInternalError, e.what());
  }
}

std::string RpcEndpoint::handle_text(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded())
    return error_response(nullptr, kParseError, "Parse error").dump();

  if (parsed.is_array()) {
    if (parsed.empty())
      return error_response(nullptr, kInvalidRequest, "Invalid Request").dump();
    ordered_json batch = ordered_json::array();
    for (const auto& item : parsed)
      if (auto r = handle_one(item)) batch.push_back(*r);
    if (batch.empty()) return "";
    return batch.dump();
  }

  auto r = handle_one(parsed);
  return r ? r->dump() : "";
}

}  // namespace edaflow::rpc
