// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/model_client.hpp"

#include <cstdlib>
#include <sstream>

#include <httplib.h>

#include "edaflow/error.hpp"
#include "edaflow/text.hpp"

namespace edaflow::model {

using nlohmann::json;
using nlohmann::ordered_json;

ModelConfig ModelConfig::from_env() {
  ModelConfig cfg;
  if (const char* v = std::getenv("EDAFLOW_MODEL_BASE_URL")) cfg.base_url = v;
  if (const char* v = std::getenv("EDAFLOW_MODEL_NAME")) cfg.model = v;
  if (const char* v = std::getenv("EDAFLOW_MODEL_API_KEY")) cfg.api_key = v;
  return cfg;
}

ordered_json build_chat_request(const ModelConfig& cfg, const std::string& system_prompt,
                                const std::string& user_content) {
  ordered_json req;
  req["model"] = cfg.model;
  ordered_json sys;
  sys["role"] = "system";
  sys["content"] = system_prompt;
  ordered_json usr;
  usr["role"] = "user";
  usr["content"] = user_content;
  req["messages"] = ordered_json::array({sys, usr});
  req["temperature"] = cfg.sampling.temperature;
  req["frequency_penalty"] = cfg.sampling.frequency_penalty;
  req["presence_penalty"] = cfg.sampling.presence_penalty;
  return req;
}

std::string extraction_instruction(const cat::ParamCatalog& catalog) {
  std::ostringstream out;
  out << "You extract EDA flow parameters from a user request. Respond with JSON only:\n"
      << "{\"assignments\":[{\"stage\":\"synthesis|placement|cts|route|global\","
      << "\"param\":\"<name>\",\"value\":\"<value>\"}],"
      << "\"stage_mentions\":[\"synthesis\"...],"
      << "\"unresolved\":[{\"param\":\"<name>\",\"reason\":\"...\"}]}\n"
      << "Never guess a value; put vague mentions in unresolved. Known parameters:\n";
  for (const cat::ParamSpec& spec : catalog.all()) {
    out << "- " << spec.name << " (" << (spec.global ? "global" : stage_name(spec.stage));
    if (spec.kind == cat::ParamKind::enum_str || !spec.options.empty()) {
      out << "; one of";
      for (const auto& o : spec.options) out << " " << o;
    } else if (spec.numeric()) {
      out << "; " << text::canonical_number(spec.min) << ".." << text::canonical_number(spec.max);
    } else if (spec.kind == cat::ParamKind::boolean) {
      out << "; true|false";
    }
    out << ")\n";
  }
  return out.str();
}

agent::Extraction parse_model_output(const json& content, const cat::ParamCatalog& catalog) {
  agent::Extraction ex;
  if (!content.is_object()) return ex;
  if (content.contains("assignments") && content["assignments"].is_array()) {
    for (const auto& a : content["assignments"]) {
      if (!a.is_object()) continue;
      std::string param = a.value("param", "");
      std::string value;
      if (a.contains("value")) {
        const auto& v = a["value"];
        if (v.is_string())
          value = v.get<std::string>();
        else if (v.is_number())
          value = text::canonical_number(v.get<double>());
        else if (v.is_boolean())
          value = v.get<bool>() ? "true" : "false";
      }
      const cat::ParamSpec* spec = catalog.find(param);
      if (!spec || value.empty()) {
        ex.unresolved.push_back({param.empty() ? "unknown" : param, "not in the schema"});
        continue;
      }
      auto norm = cat::ParamCatalog::normalize_value(*spec, value);
      agent::Assignment out;
      out.global = spec->global;
      out.stage = spec->stage;
      out.param = spec->name;
      out.value = norm.ok && !spec->numeric() ? norm.value : text::trim(value);
      ex.assignments.push_back(std::move(out));
    }
  }
  if (content.contains("stage_mentions") && content["stage_mentions"].is_array()) {
    for (const auto& s : content["stage_mentions"])
      if (s.is_string())
        if (auto st = stage_from_name(s.get<std::string>())) ex.stage_mentions.push_back(*st);
  }
  if (content.contains("unresolved") && content["unresolved"].is_array()) {
    for (const auto& u : content["unresolved"])
      if (u.is_object())
        ex.unresolved.push_back({u.value("param", "unknown"), u.value("reason", "unresolved")});
  }
  return ex;
}

std::string ModelClient::complete(const std::string& system_prompt,
                                  const std::string& user_content) {
  if (!cfg_.configured())
    raise(ErrCode::ModelClientUnavailable,
          "model client not configured (EDAFLOW_MODEL_BASE_URL, EDAFLOW_MODEL_NAME)");
  httplib::Client cli(cfg_.base_url);
  cli.set_connection_timeout(10, 0);
  cli.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);
  auto res = cli.Post("/chat/completions", headers,
                      build_chat_request(cfg_, system_prompt, user_content).dump(),
                      "application/json");
  if (!res || res->status != 200)
    raise(ErrCode::ModelClientUnavailable,
          "model endpoint error from " + cfg_.base_url +
              (res ? " (HTTP " + std::to_string(res->status) + ")" : " (no response)"));
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.contains("choices") || !body["choices"].is_array() ||
      body["choices"].empty())
    raise(ErrCode::ModelClientUnavailable, "malformed model reply");
  const json& msg = body["choices"][0];
  if (msg.contains("message") && msg["message"].contains("content"))
    return msg["message"]["content"].get<std::string>();
  raise(ErrCode::ModelClientUnavailable, "model reply carries no content");
}

agent::Extraction ModelExtractor::extract(const std::string& prompt) {
  if (text::trim(prompt).empty()) raise(ErrCode::EmptyPrompt, "prompt is empty");
  std::string content = client_.complete(extraction_instruction(*catalog_), prompt);
  json parsed = json::parse(content, nullptr, false);
  if (parsed.is_discarded())
    raise(ErrCode::ModelClientUnavailable, "model output is not valid JSON");
  return parse_model_output(parsed, *catalog_);
}

}  // namespace edaflow::model
