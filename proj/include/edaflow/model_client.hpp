// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "edaflow/agent.hpp"
#include "edaflow/catalog.hpp"

namespace edaflow::model {

// Fixed sampling settings for every hosted-model request.
struct SamplingSettings {
  double temperature = 0.7;
  double frequency_penalty = 0.7;
  double presence_penalty = 0.6;
};

// Hosted-model endpoint configuration. All three values come from the
// environment; an unset base URL or model name selects the rule engine.
struct ModelConfig {
  std::string base_url;  // EDAFLOW_MODEL_BASE_URL
  std::string model;     // EDAFLOW_MODEL_NAME
  std::string api_key;   // EDAFLOW_MODEL_API_KEY
  SamplingSettings sampling;

  bool configured() const { return !base_url.empty() && !model.empty(); }
  static ModelConfig from_env();
};

// Chat-completion payload carrying the pinned sampling settings. Pure, so
// tests can assert the wire format without a network.
nlohmann::ordered_json build_chat_request(const ModelConfig& cfg, const std::string& system_prompt,
                                          const std::string& user_content);

// System prompt instructing the model to emit the rule engine's output
// schema over the catalog's parameter names.
std::string extraction_instruction(const cat::ParamCatalog& catalog);

// Parses the model's structured extraction output; entries that do not
// validate against the catalog land in unresolved instead of being trusted.
agent::Extraction parse_model_output(const nlohmann::json& content,
                                     const cat::ParamCatalog& catalog);

// Thin HTTP client for a chat-completions endpoint.
class ModelClient {
 public:
  explicit ModelClient(ModelConfig cfg) : cfg_(std::move(cfg)) {}
  const ModelConfig& config() const { return cfg_; }

  // Returns the first choice's message content. Raises ModelClientUnavailable
  // when unconfigured, unreachable, or on a malformed reply.
  std::string complete(const std::string& system_prompt, const std::string& user_content);

 private:
  ModelConfig cfg_;
};

// Engine (b): language-model parameter extraction with the same output shape
// as the rule engine. Callers may catch ModelClientUnavailable and fall back.
class ModelExtractor : public agent::ParamExtractor {
 public:
  ModelExtractor(ModelConfig cfg, const cat::ParamCatalog* catalog)
      : client_(std::move(cfg)), catalog_(catalog) {}
  agent::Extraction extract(const std::string& prompt) override;

 private:
  ModelClient client_;
  const cat::ParamCatalog* catalog_;
};

}  // namespace edaflow::model
