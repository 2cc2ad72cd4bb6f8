// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/stage_services.hpp"

#include <cctype>
#include <fstream>

#include "edaflow/error.hpp"
#include "edaflow/text.hpp"

namespace edaflow::svc {

namespace fs = std::filesystem;

namespace {

void check_component(const std::string& v, const char* what) {
  if (v.empty()) raise(ErrCode::InvalidRequest, std::string(what) + " must not be empty");
  for (char c : v) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '.';
    if (!ok)
      raise(ErrCode::InvalidRequest,
            std::string(what) + " has unsupported character '" + c + "'");
  }
  if (v == "." || v == "..")
    raise(ErrCode::InvalidRequest, std::string(what) + " is not a legal directory name");
}

bool declares(const tpl::TclTemplate& t, const std::string& placeholder) {
  return t.required.count(placeholder) > 0 || t.optional_defaults.count(placeholder) > 0;
}

// Programmatic callers can bypass the request parsers, so every run re-checks
// supplied values against the catalog before rendering.
void check_value(const cat::ParamCatalog& catalog, Stage stage, const std::string& key,
                 const std::string& text_value) {
  const cat::ParamSpec* spec = catalog.find_by_key(stage, key);
  if (!spec) raise(ErrCode::InvalidRequest, "unknown parameter '" + key + "'");
  auto norm = cat::ParamCatalog::normalize_value(*spec, text_value);
  if (!norm.ok) raise(ErrCode::InvalidRequest, "parameter '" + key + "': " + norm.error);
}

void check_num(const cat::ParamCatalog& catalog, Stage stage, const char* key,
               const std::optional<NumField>& v) {
  if (v) check_value(catalog, stage, key, v->text);
}

void check_pairs(const cat::ParamCatalog& catalog, Stage stage,
                 const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [k, v] : pairs) check_value(catalog, stage, k, v);
}

std::map<std::string, std::string> provenance_map(const tpl::RenderedScript& script) {
  std::map<std::string, std::string> out;
  for (const auto& [name, origin] : script.provenance)
    out[name] = origin == tpl::Origin::user_supplied ? "user" : "default";
  return out;
}

void record_stage(const fs::path& version_dir, const std::string& design,
                  const std::string& version, const std::string& kind, Stage stage,
                  const std::string& status, const std::string& checkpoint,
                  std::map<std::string, std::string> params) {
  ws::Manifest m;
  if (auto existing = ws::Manifest::load(version_dir)) m = *existing;
  m.design = design;
  m.version = version;
  m.kind = kind;
  ws::StageRecord rec;
  rec.status = status;
  rec.checkpoint = checkpoint;
  rec.timestamp_ns = ws::now_ns();
  rec.params = std::move(params);
  m.record(stage, rec);
  m.save(version_dir);
}

}  // namespace

std::string make_impl_ver(const std::string& syn_ver, long long g_idx, long long p_idx) {
  if (g_idx < 0) raise(ErrCode::NegativeIndex, "g_idx must be >= 0");
  if (p_idx < 0) raise(ErrCode::NegativeIndex, "p_idx must be >= 0");
  return syn_ver + "__g" + std::to_string(g_idx) + "__p" + std::to_string(p_idx);
}

StageServices::StageServices(ServiceConfig cfg)
    : cfg_(std::move(cfg)),
      templates_(tpl::TemplateStore::load_dir(cfg_.data_dir / "templates")),
      catalog_(cat::ParamCatalog::load(cfg_.data_dir / "param_catalog.json")) {
  if (cfg_.workspace_root.empty())
    raise(ErrCode::ConfigInvalid, "workspace_root must be set");
  fs::create_directories(cfg_.workspace_root);
}

std::string StageServices::canonical_technology(const std::string& raw) const {
  if (raw.empty()) return raw;
  const cat::ParamSpec* spec = catalog_.find("technology");
  if (!spec) return raw;
  auto norm = cat::ParamCatalog::normalize_value(*spec, raw);
  if (!norm.ok) raise(ErrCode::InvalidRequest, "technology: " + norm.error);
  return norm.value;
}

StageResponse StageServices::finish(Stage stage, const std::string& design,
                                    const std::string& kind, const std::string& version,
                                    const fs::path& version_dir,
                                    const tpl::RenderedScript& script,
                                    const exec::ExecutionResult& res,
                                    std::map<std::string, std::string> manifest_params) {
  if (!res.ok) {
    record_stage(version_dir, design, version, kind, stage, "failed", "",
                 std::move(manifest_params));
    raise(ErrCode::ExecutorFailure, std::string(stage_name(stage)) + " run failed (exit " +
                                        std::to_string(res.exit_code) + "): " + res.log_excerpt);
  }
  record_stage(version_dir, design, version, kind, stage, "complete", res.checkpoint,
               std::move(manifest_params));

  StageResponse r;
  r.status = "success";
  r.stage = stage;
  r.design = design;
  r.version = version;
  r.tcl_script = script.text;
  r.report_paths = res.report_names;
  r.log_excerpt = res.log_excerpt;
  r.provenance = provenance_map(script);
  r.duration_s = res.duration_s;
  return r;
}

StageResponse StageServices::run_synthesis(const SynthRequest& req) {
  check_component(req.design, "design");
  check_component(req.syn_version, "syn_version");
  const std::string top = req.top_name.empty() ? req.design : req.top_name;
  check_num(catalog_, Stage::synthesis, "clk_period", req.clk_period);
  check_num(catalog_, Stage::synthesis, "drc_max_fanout", req.drc_max_fanout);
  check_num(catalog_, Stage::synthesis, "clk_uncertainty", req.clk_uncertainty);
  check_num(catalog_, Stage::synthesis, "input_delay", req.input_delay);
  check_num(catalog_, Stage::synthesis, "output_delay", req.output_delay);
  const std::string tech = canonical_technology(req.technology);

  const ws::Paths paths{cfg_.workspace_root};
  const fs::path dir = paths.syn_dir(req.design, req.syn_version);
  if (auto m = ws::Manifest::load(dir); m && m->stage_complete(Stage::synthesis))
    raise(ErrCode::WorkspaceConflict, "synthesis version '" + req.syn_version + "' of design '" +
                                          req.design + "' is already complete");
  auto guard =
      locks_.try_acquire(dir, req.design, "synthesis", req.syn_version, Stage::synthesis);
  if (!guard)
    raise(ErrCode::WorkspaceConflict, "synthesis version '" + req.syn_version + "' of design '" +
                                          req.design + "' is currently running");
  if (auto m = ws::Manifest::load(dir); m && m->stage_complete(Stage::synthesis))
    raise(ErrCode::WorkspaceConflict, "synthesis version '" + req.syn_version + "' of design '" +
                                          req.design + "' is already complete");
  fs::create_directories(dir);

  fs::path rtl = req.rtl_dir.empty() ? fs::path("rtl") : fs::path(req.rtl_dir);
  if (rtl.is_relative()) rtl = paths.design_dir(req.design) / rtl;
  if (cfg_.backend.kind == exec::BackendConfig::Kind::mock) {
    fs::create_directories(rtl);
    bool has_rtl = false;
    for (const auto& e : fs::directory_iterator(rtl))
      if (e.path().extension() == ".v") has_rtl = true;
    if (!has_rtl) {
      std::ofstream stub(rtl / (req.design + ".v"));
      stub << "// placeholder RTL for mock runs\n"
           << "module " << top << " ();\nendmodule\n";
    }
  } else if (!fs::exists(rtl)) {
    raise(ErrCode::InvalidRequest, "rtl_dir not found: " + rtl.string());
  }

  tpl::ParamBinding binding;
  std::map<std::string, std::string> supplied;
  binding.values["DESIGN"] = req.design;
  binding.values["TOP_NAME"] = top;
  binding.values["RTL_DIR"] = rtl.string();
  binding.values["SYN_VER"] = req.syn_version;
  if (!tech.empty()) {
    binding.values["TECH_NODE"] = tech;
    supplied["technology"] = tech;
  }
  auto bind_num = [&](const char* key, const std::optional<NumField>& v) {
    if (!v) return;
    const cat::ParamSpec* spec = catalog_.find_by_key(Stage::synthesis, key);
    binding.values[spec->placeholder] = v->text;
    supplied[key] = v->text;
  };
  bind_num("clk_period", req.clk_period);
  bind_num("drc_max_fanout", req.drc_max_fanout);
  bind_num("clk_uncertainty", req.clk_uncertainty);
  bind_num("input_delay", req.input_delay);
  bind_num("output_delay", req.output_delay);
  auto bind_effort = [&](const char* key, const char* placeholder,
                         const std::optional<std::string>& v) {
    if (!v) return;
    check_value(catalog_, Stage::synthesis, key, *v);
    binding.values[placeholder] = *v;
    supplied[key] = *v;
  };
  bind_effort("map_effort", "MAP_EFFORT", req.map_effort);
  bind_effort("power_effort", "POWER_EFFORT", req.power_effort);
  bind_effort("area_effort", "AREA_EFFORT", req.area_effort);

  auto script = tpl::render(templates_.get(Stage::synthesis), binding);
  auto res = exec::execute(script, dir, req.design, req.syn_version, cfg_.backend);
  return finish(Stage::synthesis, req.design, "synthesis", req.syn_version, dir, script, res,
                std::move(supplied));
}

StageResponse StageServices::run_placement(const PlacementRequest& req) {
  check_component(req.design, "design");
  check_component(req.syn_ver, "syn_ver");
  if (req.g_idx < 0) raise(ErrCode::NegativeIndex, "g_idx must be >= 0");
  if (req.p_idx < 0) raise(ErrCode::NegativeIndex, "p_idx must be >= 0");
  check_pairs(catalog_, Stage::placement, req.stage_params);
  const std::string tech = canonical_technology(req.technology);

  const ws::Paths paths{cfg_.workspace_root};
  const fs::path syn_dir = paths.syn_dir(req.design, req.syn_ver);
  auto syn_manifest = ws::Manifest::load(syn_dir);
  if (!syn_manifest || !syn_manifest->stage_complete(Stage::synthesis))
    raise(ErrCode::MissingUpstream, "synthesis version '" + req.syn_ver + "' of design '" +
                                        req.design + "' does not exist or is incomplete");
  const fs::path netlist = syn_dir / "netlist.v";
  if (!fs::exists(netlist))
    raise(ErrCode::MissingUpstream,
          "synthesis version '" + req.syn_ver + "' produced no netlist.v");

  const std::string impl_ver = make_impl_ver(req.syn_ver, req.g_idx, req.p_idx);
  const fs::path dir = paths.impl_dir(req.design, impl_ver);
  if (auto m = ws::Manifest::load(dir); m && m->stage_complete(Stage::placement))
    raise(ErrCode::WorkspaceConflict, "placement for impl version '" + impl_ver +
                                          "' of design '" + req.design + "' is already complete");
  auto guard = locks_.try_acquire(dir, req.design, "impl", impl_ver, Stage::placement);
  if (!guard)
    raise(ErrCode::WorkspaceConflict, "placement for impl version '" + impl_ver +
                                          "' of design '" + req.design + "' is currently running");
  if (auto m = ws::Manifest::load(dir); m && m->stage_complete(Stage::placement))
    raise(ErrCode::WorkspaceConflict, "placement for impl version '" + impl_ver +
                                          "' of design '" + req.design + "' is already complete");
  fs::create_directories(dir);

  const tpl::TclTemplate& tmpl = templates_.get(Stage::placement);
  tpl::ParamBinding binding;
  std::map<std::string, std::string> supplied;
  binding.values["DESIGN"] = req.design;
  binding.values["IMPL_VER"] = impl_ver;
  binding.values["NETLIST"] = netlist.string();
  if (!tech.empty()) {
    binding.values["TECH_NODE"] = tech;
    supplied["technology"] = tech;
  }
  for (const auto& [key, value] : req.stage_params) {
    const cat::ParamSpec* spec = catalog_.find_by_key(Stage::placement, key);
    if (declares(tmpl, spec->placeholder)) binding.values[spec->placeholder] = value;
    binding.env_exports.emplace_back(key, value);
    supplied[key] = value;
  }

  auto script = tpl::render(tmpl, binding);
  auto res = exec::execute(script, dir, req.design, impl_ver, cfg_.backend);
  return finish(Stage::placement, req.design, "impl", impl_ver, dir, script, res,
                std::move(supplied));
}

StageResponse StageServices::run_cts(const CtsRequest& req) {
  check_component(req.design, "design");
  check_component(req.impl_ver, "impl_ver");
  check_num(catalog_, Stage::cts, "cts_cell_density", req.cts_cell_density);
  check_num(catalog_, Stage::cts, "postcts_opt_max_density", req.postcts_opt_max_density);
  check_num(catalog_, Stage::cts, "max_transition", req.max_transition);
  check_num(catalog_, Stage::cts, "target_skew", req.target_skew);
  check_pairs(catalog_, Stage::cts, req.cts_params);
  const std::string tech = canonical_technology(req.technology);

  const ws::Paths paths{cfg_.workspace_root};
  const fs::path dir = paths.impl_dir(req.design, req.impl_ver);
  auto manifest = ws::Manifest::load(dir);
  if (!manifest || !manifest->stage_complete(Stage::placement))
    raise(ErrCode::MissingUpstream, "impl version '" + req.impl_ver + "' of design '" +
                                        req.design + "' has no completed placement");
  if (manifest->stage_complete(Stage::cts))
    raise(ErrCode::WorkspaceConflict, "cts for impl version '" + req.impl_ver + "' of design '" +
                                          req.design + "' is already complete");
  auto guard = locks_.try_acquire(dir, req.design, "impl", req.impl_ver, Stage::cts);
  if (!guard)
    raise(ErrCode::WorkspaceConflict, "cts for impl version '" + req.impl_ver + "' of design '" +
                                          req.design + "' is currently running");
  if (auto m = ws::Manifest::load(dir); m && m->stage_complete(Stage::cts))
    raise(ErrCode::WorkspaceConflict, "cts for impl version '" + req.impl_ver + "' of design '" +
                                          req.design + "' is already complete");

  const tpl::TclTemplate& tmpl = templates_.get(Stage::cts);
  tpl::ParamBinding binding;
  std::map<std::string, std::string> supplied;
  binding.values["DESIGN"] = req.design;
  binding.values["IMPL_VER"] = req.impl_ver;
  if (!tech.empty()) {
    binding.values["TECH_NODE"] = tech;
    supplied["technology"] = tech;
  }
  std::map<std::string, std::string> by_key;
  if (req.cts_cell_density) by_key["cts_cell_density"] = req.cts_cell_density->text;
  if (req.postcts_opt_max_density)
    by_key["postcts_opt_max_density"] = req.postcts_opt_max_density->text;
  if (req.max_transition) by_key["max_transition"] = req.max_transition->text;
  if (req.target_skew) by_key["target_skew"] = req.target_skew->text;
  for (const auto& [k, v] : req.cts_params) by_key[k] = v;
  // Catalog order keeps the env-export block deterministic.
  for (const cat::ParamSpec* spec : catalog_.stage_params(Stage::cts)) {
    auto it = by_key.find(spec->request_key);
    if (it == by_key.end()) continue;
    if (declares(tmpl, spec->placeholder)) binding.values[spec->placeholder] = it->second;
    binding.env_exports.emplace_back(spec->request_key, it->second);
    supplied[spec->request_key] = it->second;
  }

  auto script = tpl::render(tmpl, binding);
  auto res = exec::execute(script, dir, req.design, req.impl_ver, cfg_.backend);
  StageResponse r = finish(Stage::cts, req.design, "impl", req.impl_ver, dir, script, res,
                           std::move(supplied));
  // The effective clock constraints the run committed to, supplied or default.
  r.constraints["target_skew"] =
      req.target_skew ? req.target_skew->text : tmpl.optional_defaults.at("TARGET_SKEW");
  r.constraints["max_transition"] =
      req.max_transition ? req.max_transition->text : tmpl.optional_defaults.at("MAX_TRANSITION");
  return r;
}

StageResponse StageServices::run_route(const RouteRequest& req) {
  check_component(req.design, "design");
  check_component(req.impl_ver, "impl_ver");
  check_pairs(catalog_, Stage::route, req.route_params);
  const std::string tech = canonical_technology(req.technology);

  const ws::Paths paths{cfg_.workspace_root};
  const fs::path dir = paths.impl_dir(req.design, req.impl_ver);
  auto manifest = ws::Manifest::load(dir);
  if (!manifest || !manifest->stage_complete(Stage::cts))
    raise(ErrCode::MissingUpstream, "impl version '" + req.impl_ver + "' of design '" +
                                        req.design + "' has no completed cts");
  if (manifest->stage_complete(Stage::route))
    raise(ErrCode::WorkspaceConflict, "route for impl version '" + req.impl_ver + "' of design '" +
                                          req.design + "' is already complete");
  auto guard = locks_.try_acquire(dir, req.design, "impl", req.impl_ver, Stage::route);
  if (!guard)
    raise(ErrCode::WorkspaceConflict, "route for impl version '" + req.impl_ver + "' of design '" +
                                          req.design + "' is currently running");
  if (auto m = ws::Manifest::load(dir); m && m->stage_complete(Stage::route))
    raise(ErrCode::WorkspaceConflict, "route for impl version '" + req.impl_ver + "' of design '" +
                                          req.design + "' is already complete");

  const tpl::TclTemplate& tmpl = templates_.get(Stage::route);
  tpl::ParamBinding binding;
  std::map<std::string, std::string> supplied;
  binding.values["DESIGN"] = req.design;
  binding.values["IMPL_VER"] = req.impl_ver;
  if (!tech.empty()) {
    binding.values["TECH_NODE"] = tech;
    supplied["technology"] = tech;
  }
  for (const auto& [key, value] : req.route_params) {
    const cat::ParamSpec* spec = catalog_.find_by_key(Stage::route, key);
    if (declares(tmpl, spec->placeholder)) binding.values[spec->placeholder] = value;
    binding.env_exports.emplace_back(key, value);
    supplied[key] = value;
  }

  auto script = tpl::render(tmpl, binding);
  auto res = exec::execute(script, dir, req.design, req.impl_ver, cfg_.backend);
  if (res.ok) {
    // The route contract pins its report list; a missing one is a backend bug.
    for (const std::string& name : exec::declared_reports(Stage::route)) {
      if (!fs::exists(dir / "reports" / name)) {
        record_stage(dir, req.design, req.impl_ver, "impl", Stage::route, "failed", "",
                     supplied);
        raise(ErrCode::ExecutorFailure, "route backend did not produce " + name);
      }
    }
  }
  StageResponse r = finish(Stage::route, req.design, "impl", req.impl_ver, dir, script, res,
                           std::move(supplied));
  r.report_paths = exec::declared_reports(Stage::route);

  if (req.collect_artifacts) {
    exec::ArchiveRequest areq;
    areq.patterns = {"*.gds", "*.def", "*.lef", "*.spef", "*.v"};
    areq.archive_name = req.design + "_" + req.impl_ver + "_artifacts.tar";
    areq.gzip = req.gzip_archive;
    r.artifact_archive = exec::collect_artifacts(dir, areq).filename().string();
  }
  return r;
}

}  // namespace edaflow::svc
