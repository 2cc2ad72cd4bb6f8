// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "edaflow/catalog.hpp"
#include "edaflow/stage.hpp"

namespace edaflow::svc {

// Numeric request values keep their original text so rendered scripts echo
// the caller's spelling verbatim (a JSON number falls back to its canonical
// shortest form).
struct NumField {
  std::string text;
  double value = 0.0;
};

struct SynthRequest {
  std::string design;
  std::string top_name;           // defaults to design
  std::string rtl_dir = "rtl";    // relative paths resolve under the design dir
  std::string syn_version = "v1";
  std::string technology;
  std::optional<NumField> clk_period, drc_max_fanout, clk_uncertainty, input_delay, output_delay;
  std::optional<std::string> map_effort, power_effort, area_effort;

  nlohmann::json to_json() const;
};

struct PlacementRequest {
  std::string design;
  std::string syn_ver;
  std::string technology;
  long long g_idx = 0;
  long long p_idx = 0;
  // (request_key, canonical value) in catalog order.
  std::vector<std::pair<std::string, std::string>> stage_params;

  nlohmann::json to_json() const;
};

struct CtsRequest {
  std::string design;
  std::string impl_ver;
  std::string technology;
  std::optional<NumField> cts_cell_density, postcts_opt_max_density, max_transition, target_skew;
  std::vector<std::pair<std::string, std::string>> cts_params;

  nlohmann::json to_json() const;
};

struct RouteRequest {
  std::string design;
  std::string impl_ver;
  std::string technology;
  std::vector<std::pair<std::string, std::string>> route_params;
  bool collect_artifacts = false;
  bool gzip_archive = false;

  nlohmann::json to_json() const;
};

// Strict parsers: unknown fields, bad types, and out-of-range values raise
// InvalidRequest naming the offending field.
SynthRequest parse_synth_request(const nlohmann::json& j, const cat::ParamCatalog& catalog);
PlacementRequest parse_placement_request(const nlohmann::json& j,
                                         const cat::ParamCatalog& catalog);
CtsRequest parse_cts_request(const nlohmann::json& j, const cat::ParamCatalog& catalog);
RouteRequest parse_route_request(const nlohmann::json& j, const cat::ParamCatalog& catalog);

struct StageResponse {
  std::string status = "success";
  Stage stage = Stage::synthesis;
  std::string design;
  std::string version;
  std::string tcl_script;
  std::vector<std::string> report_paths;
  std::string log_excerpt;
  // placeholder -> "user" | "default"
  std::map<std::string, std::string> provenance;
  // cts: effective clock constraints the run committed to
  std::map<std::string, std::string> constraints;
  std::string artifact_archive;
  double duration_s = 0.0;

  nlohmann::ordered_json to_json() const;
  static StageResponse from_json(const nlohmann::json& j);
};

}  // namespace edaflow::svc
