// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edaflow/catalog.hpp"
#include "edaflow/error.hpp"
#include "edaflow/requests.hpp"
#include "edaflow/stage.hpp"
#include "edaflow/stage_services.hpp"

namespace edaflow::agent {

// One recognized (parameter, value) pair, in prompt order. Global parameters
// (design, technology) apply to every stage the plan names.
struct Assignment {
  Stage stage = Stage::synthesis;
  bool global = false;
  std::string param;  // catalog name, e.g. "fanout_limit"
  std::string value;  // verbatim for numbers, canonical for enums/bools
  size_t pos = 0;     // match offset in the prompt
};

struct Unresolved {
  std::string param;
  std::string reason;
};

struct Extraction {
  std::vector<Assignment> assignments;
  std::vector<Stage> stage_mentions;  // explicit stage verbs, prompt order
  std::vector<Unresolved> unresolved;
};

// Parameter extraction engine. The deterministic rule engine is the default;
// a language-model client can implement the same interface.
class ParamExtractor {
 public:
  virtual ~ParamExtractor() = default;
  // Raises EmptyPrompt. Never guesses: mentions without a recognizable value
  // land in unresolved.
  virtual Extraction extract(const std::string& prompt) = 0;
};

// Pattern lexicon over the parameter catalog: candidate matches are ordered
// by position (parameter matches beat stage verbs, longer beats shorter) and
// consume prompt spans greedily, so "clock tree synthesis" never doubles as
// a synthesis request.
class RuleEngine : public ParamExtractor {
 public:
  explicit RuleEngine(const cat::ParamCatalog* catalog);
  Extraction extract(const std::string& prompt) override;

 private:
  struct CompiledPattern;
  const cat::ParamCatalog* catalog_;
  std::shared_ptr<const std::vector<CompiledPattern>> patterns_;
};

struct Conflict {
  std::string kind;  // "duplicate" | "range" | "dependency"
  std::string detail;
  nlohmann::ordered_json to_json() const;
};

struct ToolPlan {
  std::vector<Stage> stages;  // canonical order, no repeats
  // stage -> catalog-name -> value (globals copied into every stage map)
  std::map<Stage, std::map<std::string, std::string>> per_stage_params;
  std::string session_id;
  std::vector<Unresolved> unresolved;
  // The raw accepted assignments; duplicate detection needs every mention.
  std::vector<Assignment> assignments;

  nlohmann::ordered_json to_json() const;
};

struct StageResult {
  std::string tool;
  std::map<std::string, std::string> params;  // catalog-name -> value as sent
  std::string version;
  std::string tcl_script;
  std::vector<std::string> reports;
  std::map<std::string, std::string> provenance;
  std::string error;  // nonempty when this stage failed

  nlohmann::ordered_json to_json() const;
};

struct AgentResponse {
  std::string status = "success";  // "success" | "error"
  std::string session_id;
  std::vector<std::string> tools_used;  // tool names actually attempted
  std::vector<StageResult> results;
  std::vector<Unresolved> unresolved;
  std::vector<Conflict> conflicts;

  nlohmann::ordered_json to_json() const;
};

// Raised by execute_plan when a stage fails; carries the partial response
// (completed stages plus the failing stage's record).
class StageFailedError : public Error {
 public:
  StageFailedError(AgentResponse partial, const std::string& msg)
      : Error(ErrCode::StageFailed, msg), response(std::move(partial)) {}
  AgentResponse response;
};

// Session context: versions produced so far, so later plans can refine a
// design incrementally without restating upstream stages.
struct Session {
  std::string id;
  std::string design;
  std::string technology;
  std::string last_syn_ver;
  std::string last_impl_ver;      // impl version with completed placement
  std::string last_cts_impl_ver;  // impl version with completed cts
  int syn_count = 0;
  int placement_count = 0;
};

// In-memory session map with file persistence (atomic rewrite on save).
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path file);
  Session& ensure(const std::string& id);  // creates when missing
  std::optional<Session> find(const std::string& id);
  void update(const Session& s);
  std::string generate_id();
  void save();

 private:
  void load();
  std::filesystem::path file_;
  std::map<std::string, Session> sessions_;
  unsigned counter_ = 0;
  std::mutex mu_;
};

// Transport adapter for stage-service invocation. Returns
// {"ok":true,"response":<StageResponse>} or
// {"ok":false,"error":{"name":..., "message":...}}.
class Invoker {
 public:
  virtual ~Invoker() = default;
  virtual nlohmann::json invoke(Stage stage, const nlohmann::json& request) = 0;
};

// Direct calls into a StageServices instance; the hermetic default.
class InProcessInvoker : public Invoker {
 public:
  explicit InProcessInvoker(svc::StageServices* services) : services_(services) {}
  nlohmann::json invoke(Stage stage, const nlohmann::json& request) override;

 private:
  svc::StageServices* services_;
};

// POST {base_url}/run per stage, for split-process deployments.
class HttpInvoker : public Invoker {
 public:
  explicit HttpInvoker(std::map<Stage, std::string> base_urls)
      : base_urls_(std::move(base_urls)) {}
  nlohmann::json invoke(Stage stage, const nlohmann::json& request) override;

 private:
  std::map<Stage, std::string> base_urls_;
};

// Turns a prompt into a validated plan and drives the stage services.
class Orchestrator {
 public:
  // extractor may be null: the built-in rule engine is used.
  Orchestrator(const cat::ParamCatalog* catalog, Invoker* invoker,
               std::filesystem::path session_file, ParamExtractor* extractor = nullptr);

  // Full loop: extract, decompose, check conflicts, execute. Creates the
  // session when session_id is empty or unknown. A conflicted plan returns
  // status "error" with the conflicts and executes nothing; a failing stage
  // returns the partial response. Raises EmptyPrompt, NoStageDetected.
  AgentResponse run_prompt(const std::string& prompt, const std::string& session_id = "");

  Extraction extract_parameters(const std::string& prompt);
  // Canonically ordered plan over the stages the extraction names or implies.
  // Raises NoStageDetected.
  ToolPlan decompose(const Extraction& ex, const std::string& session_id) const;
  // Duplicate-value, range, and dependency conflicts. Unknown sessions are
  // treated as fresh; conflicts are data, not errors.
  std::vector<Conflict> detect_conflicts(const ToolPlan& plan, const std::string& session_id);
  // Runs the plan's stages in order, threading version labels through the
  // session. Raises SessionUnknown; StageFailedError on the first failure.
  AgentResponse execute_plan(const ToolPlan& plan, const std::string& session_id);

  SessionStore& sessions() { return sessions_; }

 private:
  nlohmann::json build_request(Stage stage, const ToolPlan& plan, const Session& session,
                               const std::string& syn_ver, const std::string& impl_ver) const;

  const cat::ParamCatalog* catalog_;
  Invoker* invoker_;
  SessionStore sessions_;
  std::unique_ptr<RuleEngine> rule_engine_;
  ParamExtractor* extractor_;
};

}  // namespace edaflow::agent
