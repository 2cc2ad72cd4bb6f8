// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/requests.hpp"

#include <set>

#include "edaflow/error.hpp"
#include "edaflow/text.hpp"

namespace edaflow::svc {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) raise(ErrCode::InvalidRequest, std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key))
      raise(ErrCode::InvalidRequest, std::string("unknown field '") + key + "' in " + what);
  }
}

std::string get_string(const json& j, const char* field, bool required,
                       const std::string& fallback = "") {
  if (!j.contains(field)) {
    if (required) raise(ErrCode::InvalidRequest, std::string("missing field '") + field + "'");
    return fallback;
  }
  if (!j[field].is_string())
    raise(ErrCode::InvalidRequest, std::string("field '") + field + "' must be a string");
  std::string v = j[field].get<std::string>();
  if (required && text::trim(v).empty())
    raise(ErrCode::InvalidRequest, std::string("field '") + field + "' must not be empty");
  return v;
}

void check_name(const std::string& v, const char* field) {
  if (v.empty()) raise(ErrCode::InvalidRequest, std::string("field '") + field + "' is empty");
  for (char c : v) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '.';
    if (!ok)
      raise(ErrCode::InvalidRequest,
            std::string("field '") + field + "' has unsupported character '" + c + "'");
  }
}

// Accepts a JSON number or a numeric string; validates against the catalog
// range when a spec is available.
std::optional<NumField> get_num(const json& j, const char* field, Stage stage,
                                const cat::ParamCatalog& catalog) {
  if (!j.contains(field)) return std::nullopt;
  NumField out;
  const json& v = j[field];
  if (v.is_number()) {
    out.value = v.get<double>();
    out.text = text::canonical_number(out.value);
  } else if (v.is_string()) {
    auto parsed = text::parse_double(v.get<std::string>());
    if (!parsed)
      raise(ErrCode::InvalidRequest,
            std::string("field '") + field + "' is not numeric: " + v.get<std::string>());
    out.value = *parsed;
    out.text = text::trim(v.get<std::string>());
  } else {
    raise(ErrCode::InvalidRequest, std::string("field '") + field + "' must be a number");
  }
  if (const cat::ParamSpec* spec = catalog.find_by_key(stage, field)) {
    auto norm = cat::ParamCatalog::normalize_value(*spec, out.text);
    if (!norm.ok)
      raise(ErrCode::InvalidRequest, std::string("field '") + field + "': " + norm.error);
  }
  return out;
}

std::optional<std::string> get_effort(const json& j, const char* field) {
  if (!j.contains(field)) return std::nullopt;
  if (!j[field].is_string())
    raise(ErrCode::InvalidRequest, std::string("field '") + field + "' must be a string");
  std::string v = text::to_lower(text::trim(j[field].get<std::string>()));
  if (v != "low" && v != "medium" && v != "high")
    raise(ErrCode::InvalidRequest,
          std::string("field '") + field + "' must be one of low, medium, high");
  return v;
}

std::string json_scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return text::canonical_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  raise(ErrCode::InvalidRequest, "parameter '" + key + "' must be a scalar");
}

// Validates a params map against one stage slot of the catalog and returns
// (request_key, canonical value) pairs in catalog order.
std::vector<std::pair<std::string, std::string>> parse_params_map(
    const json& j, const char* field, Stage stage, cat::RequestSlot slot,
    const cat::ParamCatalog& catalog) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!j.contains(field)) return out;
  const json& m = j[field];
  if (!m.is_object())
    raise(ErrCode::InvalidRequest, std::string("field '") + field + "' must be an object");

  for (const auto& [key, value] : m.items()) {
    const cat::ParamSpec* spec = catalog.find_by_key(stage, key);
    if (!spec || spec->slot != slot)
      raise(ErrCode::InvalidRequest,
            std::string("unknown parameter '") + key + "' in " + field);
    auto norm = cat::ParamCatalog::normalize_value(*spec, json_scalar_text(value, key));
    if (!norm.ok)
      raise(ErrCode::InvalidRequest, std::string("parameter '") + key + "': " + norm.error);
  }
  // Catalog order keeps downstream env exports deterministic.
  for (const cat::ParamSpec* spec : catalog.stage_params(stage)) {
    if (spec->slot != slot || !m.contains(spec->request_key)) continue;
    auto norm = cat::ParamCatalog::normalize_value(
        *spec, json_scalar_text(m[spec->request_key], spec->request_key));
    out.emplace_back(spec->request_key, norm.value);
  }
  return out;
}

void put_num(json& j, const char* field, const std::optional<NumField>& v) {
  if (v) j[field] = v->text;
}

}  // namespace

SynthRequest parse_synth_request(const json& j, const cat::ParamCatalog& catalog) {
  reject_unknown(j,
                 {"design", "top_name", "rtl_dir", "syn_version", "technology", "clk_period",
                  "drc_max_fanout", "clk_uncertainty", "input_delay", "output_delay",
                  "map_effort", "power_effort", "area_effort"},
                 "synthesis request");
  SynthRequest r;
  r.design = get_string(j, "design", true);
  check_name(r.design, "design");
  r.top_name = get_string(j, "top_name", false, r.design);
  r.rtl_dir = get_string(j, "rtl_dir", false, "rtl");
  r.syn_version = get_string(j, "syn_version", false, "v1");
  check_name(r.syn_version, "syn_version");
  r.technology = get_string(j, "technology", false);
  r.clk_period = get_num(j, "clk_period", Stage::synthesis, catalog);
  r.drc_max_fanout = get_num(j, "drc_max_fanout", Stage::synthesis, catalog);
  r.clk_uncertainty = get_num(j, "clk_uncertainty", Stage::synthesis, catalog);
  r.input_delay = get_num(j, "input_delay", Stage::synthesis, catalog);
  r.output_delay = get_num(j, "output_delay", Stage::synthesis, catalog);
  r.map_effort = get_effort(j, "map_effort");
  r.power_effort = get_effort(j, "power_effort");
  r.area_effort = get_effort(j, "area_effort");
  return r;
}

PlacementRequest parse_placement_request(const json& j, const cat::ParamCatalog& catalog) {
  reject_unknown(j, {"design", "syn_ver", "technology", "g_idx", "p_idx", "stage_params"},
                 "placement request");
  PlacementRequest r;
  r.design = get_string(j, "design", true);
  check_name(r.design, "design");
  r.syn_ver = get_string(j, "syn_ver", true);
  check_name(r.syn_ver, "syn_ver");
  r.technology = get_string(j, "technology", false);
  for (const char* f : {"g_idx", "p_idx"}) {
    if (!j.contains(f)) continue;
    if (!j[f].is_number_integer())
      raise(ErrCode::InvalidRequest, std::string("field '") + f + "' must be an integer");
  }
  r.g_idx = j.value("g_idx", 0LL);
  r.p_idx = j.value("p_idx", 0LL);
  if (r.g_idx < 0) raise(ErrCode::NegativeIndex, "g_idx must be >= 0");
  if (r.p_idx < 0) raise(ErrCode::NegativeIndex, "p_idx must be >= 0");
  r.stage_params =
      parse_params_map(j, "stage_params", Stage::placement, cat::RequestSlot::stage_params,
                       catalog);
  return r;
}

CtsRequest parse_cts_request(const json& j, const cat::ParamCatalog& catalog) {
  reject_unknown(j,
                 {"design", "impl_ver", "technology", "cts_cell_density",
                  "postcts_opt_max_density", "max_transition", "target_skew", "cts_params"},
                 "cts request");
  CtsRequest r;
  r.design = get_string(j, "design", true);
  check_name(r.design, "design");
  r.impl_ver = get_string(j, "impl_ver", true);
  r.technology = get_string(j, "technology", false);
  r.cts_cell_density = get_num(j, "cts_cell_density", Stage::cts, catalog);
  r.postcts_opt_max_density = get_num(j, "postcts_opt_max_density", Stage::cts, catalog);
  r.max_transition = get_num(j, "max_transition", Stage::cts, catalog);
  r.target_skew = get_num(j, "target_skew", Stage::cts, catalog);
  r.cts_params = parse_params_map(j, "cts_params", Stage::cts, cat::RequestSlot::cts_params,
                                  catalog);
  return r;
}

RouteRequest parse_route_request(const json& j, const cat::ParamCatalog& catalog) {
  reject_unknown(j,
                 {"design", "impl_ver", "technology", "route_params", "collect_artifacts",
                  "archive_format"},
                 "route request");
  RouteRequest r;
  r.design = get_string(j, "design", true);
  check_name(r.design, "design");
  r.impl_ver = get_string(j, "impl_ver", true);
  r.technology = get_string(j, "technology", false);
  r.route_params = parse_params_map(j, "route_params", Stage::route,
                                    cat::RequestSlot::route_params, catalog);
  if (j.contains("collect_artifacts")) {
    if (!j["collect_artifacts"].is_boolean())
      raise(ErrCode::InvalidRequest, "field 'collect_artifacts' must be a boolean");
    r.collect_artifacts = j["collect_artifacts"].get<bool>();
  }
  if (j.contains("archive_format")) {
    std::string f = get_string(j, "archive_format", false);
    if (f == "tar.gz")
      r.gzip_archive = true;
    else if (f != "tar" && !f.empty())
      raise(ErrCode::InvalidRequest, "field 'archive_format' must be 'tar' or 'tar.gz'");
  }
  return r;
}

json SynthRequest::to_json() const {
  json j;
  j["design"] = design;
  if (!top_name.empty() && top_name != design) j["top_name"] = top_name;
  if (rtl_dir != "rtl") j["rtl_dir"] = rtl_dir;
  j["syn_version"] = syn_version;
  if (!technology.empty()) j["technology"] = technology;
  put_num(j, "clk_period", clk_period);
  put_num(j, "drc_max_fanout", drc_max_fanout);
  put_num(j, "clk_uncertainty", clk_uncertainty);
  put_num(j, "input_delay", input_delay);
  put_num(j, "output_delay", output_delay);
  if (map_effort) j["map_effort"] = *map_effort;
  if (power_effort) j["power_effort"] = *power_effort;
  if (area_effort) j["area_effort"] = *area_effort;
  return j;
}

json PlacementRequest::to_json() const {
  json j;
  j["design"] = design;
  j["syn_ver"] = syn_ver;
  if (!technology.empty()) j["technology"] = technology;
  j["g_idx"] = g_idx;
  j["p_idx"] = p_idx;
  if (!stage_params.empty()) {
    json m = json::object();
    for (const auto& [k, v] : stage_params) m[k] = v;
    j["stage_params"] = m;
  }
  return j;
}

json CtsRequest::to_json() const {
  json j;
  j["design"] = design;
  j["impl_ver"] = impl_ver;
  if (!technology.empty()) j["technology"] = technology;
  put_num(j, "cts_cell_density", cts_cell_density);
  put_num(j, "postcts_opt_max_density", postcts_opt_max_density);
  put_num(j, "max_transition", max_transition);
  put_num(j, "target_skew", target_skew);
  if (!cts_params.empty()) {
    json m = json::object();
    for (const auto& [k, v] : cts_params) m[k] = v;
    j["cts_params"] = m;
  }
  return j;
}

json RouteRequest::to_json() const {
  json j;
  j["design"] = design;
  j["impl_ver"] = impl_ver;
  if (!technology.empty()) j["technology"] = technology;
  if (!route_params.empty()) {
    json m = json::object();
    for (const auto& [k, v] : route_params) m[k] = v;
    j["route_params"] = m;
  }
  if (collect_artifacts) j["collect_artifacts"] = true;
  if (gzip_archive) j["archive_format"] = "tar.gz";
  return j;
}

nlohmann::ordered_json StageResponse::to_json() const {
  nlohmann::ordered_json j;
  j["status"] = status;
  j["stage"] = stage_name(stage);
  j["design"] = design;
  j["version"] = version;
  j["tcl_script"] = tcl_script;
  j["report_paths"] = report_paths;
  j["log_excerpt"] = log_excerpt;
  j["provenance"] = provenance;
  if (!constraints.empty()) j["constraints"] = constraints;
  if (!artifact_archive.empty()) j["artifact_archive"] = artifact_archive;
  j["duration_s"] = duration_s;
  return j;
}

StageResponse StageResponse::from_json(const json& j) {
  StageResponse r;
  r.status = j.value("status", "success");
  if (auto s = stage_from_name(j.value("stage", "synthesis"))) r.stage = *s;
  r.design = j.value("design", "");
  r.version = j.value("version", "");
  r.tcl_script = j.value("tcl_script", "");
  if (j.contains("report_paths"))
    r.report_paths = j.at("report_paths").get<std::vector<std::string>>();
  r.log_excerpt = j.value("log_excerpt", "");
  if (j.contains("provenance"))
    r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  if (j.contains("constraints"))
    r.constraints = j.at("constraints").get<std::map<std::string, std::string>>();
  r.artifact_archive = j.value("artifact_archive", "");
  r.duration_s = j.value("duration_s", 0.0);
  return r;
}

}  // namespace edaflow::svc
