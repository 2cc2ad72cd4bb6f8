// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <string>

#include "edaflow/catalog.hpp"
#include "edaflow/executor.hpp"
#include "edaflow/requests.hpp"
#include "edaflow/template_engine.hpp"
#include "edaflow/workspace.hpp"

namespace edaflow::svc {

struct ServiceConfig {
  std::filesystem::path workspace_root;
  // Holds templates/<stage>.tcl, param_catalog.json, eda_commands.json.
  std::filesystem::path data_dir;
  exec::BackendConfig backend;
};

// Deterministic, injective implementation-version label:
// `{syn_ver}__g{g_idx}__p{p_idx}`. Raises NegativeIndex.
std::string make_impl_ver(const std::string& syn_ver, long long g_idx, long long p_idx);

// The four stage services share one workspace root and template/catalog set.
// Each run validates the request, guards the target version directory,
// renders TCL, executes the backend, and records a manifest entry. A version
// whose stage already completed is immutable: re-running it raises
// WorkspaceConflict. Safe for concurrent use; distinct versions proceed in
// parallel.
class StageServices {
 public:
  explicit StageServices(ServiceConfig cfg);

  StageResponse run_synthesis(const SynthRequest& req);
  StageResponse run_placement(const PlacementRequest& req);
  StageResponse run_cts(const CtsRequest& req);
  StageResponse run_route(const RouteRequest& req);

  const cat::ParamCatalog& catalog() const { return catalog_; }
  const tpl::TemplateStore& templates() const { return templates_; }
  const ServiceConfig& config() const { return cfg_; }

 private:
  StageResponse finish(Stage stage, const std::string& design, const std::string& kind,
                       const std::string& version, const std::filesystem::path& version_dir,
                       const tpl::RenderedScript& script, const exec::ExecutionResult& res,
                       std::map<std::string, std::string> manifest_params);
  std::string canonical_technology(const std::string& raw) const;

  ServiceConfig cfg_;
  tpl::TemplateStore templates_;
  cat::ParamCatalog catalog_;
  ws::VersionLocks locks_;
};

}  // namespace edaflow::svc
