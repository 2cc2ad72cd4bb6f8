// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "edaflow/error.hpp"
#include "edaflow/stage_services.hpp"

namespace fs = std::filesystem;
using edaflow::ErrCode;
using edaflow::Error;
using edaflow::Stage;
using edaflow::svc::CtsRequest;
using edaflow::svc::NumField;
using edaflow::svc::PlacementRequest;
using edaflow::svc::RouteRequest;
using edaflow::svc::ServiceConfig;
using edaflow::svc::StageServices;
using edaflow::svc::SynthRequest;
using edaflow::svc::make_impl_ver;

namespace {

fs::path fresh_root(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("edaflow_svc_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ServiceConfig config_for(const fs::path& root) {
  ServiceConfig cfg;
  cfg.workspace_root = root;
  cfg.data_dir = EDAFLOW_REPO_DATA_DIR;
  return cfg;
}

ErrCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrCode::IoError;  // sentinel: the call did not raise
}

SynthRequest synth_req(const std::string& design, const std::string& ver) {
  SynthRequest r;
  r.design = design;
  r.syn_version = ver;
  return r;
}

}  // namespace

TEST_CASE("impl version label is deterministic and rejects negatives") {
  CHECK(make_impl_ver("s1_v1", 0, 0) == "s1_v1__g0__p0");
  CHECK(make_impl_ver("s1_v1", 2, 13) == "s1_v1__g2__p13");
  CHECK(code_of([] { make_impl_ver("v", -1, 0); }) == ErrCode::NegativeIndex);
  CHECK(code_of([] { make_impl_ver("v", 0, -2); }) == ErrCode::NegativeIndex);
}

TEST_CASE("synthesis run renders executes and records") {
  auto root = fresh_root("synth");
  StageServices svc(config_for(root));

  SynthRequest req = synth_req("b14", "s1_v1");
  req.technology = "FreePDK45";
  req.drc_max_fanout = NumField{"4.74", 4.74};
  req.map_effort = "high";

  auto resp = svc.run_synthesis(req);
  CHECK(resp.status == "success");
  CHECK(resp.stage == Stage::synthesis);
  CHECK(resp.design == "b14");
  CHECK(resp.version == "s1_v1");
  CHECK(resp.report_paths ==
        std::vector<std::string>{"qor.rpt", "timing.rpt", "area.rpt"});

  // Request values land verbatim; strings quoted, numbers bare.
  CHECK(resp.tcl_script.find("set TOP_NAME \"b14\"") != std::string::npos);
  CHECK(resp.tcl_script.find("set MAX_FANOUT 4.74") != std::string::npos);
  CHECK(resp.tcl_script.find("set MAP_EFFORT \"high\"") != std::string::npos);
  CHECK(resp.tcl_script.find("${") == std::string::npos);  // nothing unresolved

  // Provenance separates caller-supplied from defaulted placeholders.
  CHECK(resp.provenance.at("MAX_FANOUT") == "user");
  CHECK(resp.provenance.at("MAP_EFFORT") == "user");
  CHECK(resp.provenance.at("CLK_PERIOD") == "default");
  CHECK(resp.provenance.at("POWER_EFFORT") == "default");

  // Workspace artifacts: script, reports, netlist stub, manifest.
  auto dir = root / "b14" / "synthesis" / "s1_v1";
  CHECK(fs::exists(dir / "scripts" / "synthesis.tcl"));
  CHECK(fs::exists(dir / "reports" / "qor.rpt"));
  CHECK(fs::exists(dir / "netlist.v"));
  auto manifest = edaflow::ws::Manifest::load(dir);
  REQUIRE(manifest.has_value());
  CHECK(manifest->stage_complete(Stage::synthesis));
  CHECK(manifest->stages.at("synthesis").params.at("drc_max_fanout") == "4.74");
}

TEST_CASE("a completed synthesis version is immutable") {
  auto root = fresh_root("conflict");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));
  CHECK(code_of([&] { svc.run_synthesis(synth_req("b14", "s1_v1")); }) ==
        ErrCode::WorkspaceConflict);
  // A different version is free.
  CHECK(svc.run_synthesis(synth_req("b14", "s1_v2")).status == "success");
}

TEST_CASE("a failed run may be retried under the same version") {
  auto root = fresh_root("retry");
  auto cfg = config_for(root);
  cfg.backend.mock_fail_stages = {"synthesis"};
  StageServices failing(cfg);
  CHECK(code_of([&] { failing.run_synthesis(synth_req("b14", "s1_v1")); }) ==
        ErrCode::ExecutorFailure);

  auto dir = root / "b14" / "synthesis" / "s1_v1";
  auto manifest = edaflow::ws::Manifest::load(dir);
  REQUIRE(manifest.has_value());
  CHECK(manifest->stages.at("synthesis").status == "failed");

  StageServices healthy(config_for(root));
  CHECK(healthy.run_synthesis(synth_req("b14", "s1_v1")).status == "success");
}

TEST_CASE("placement requires a completed synthesis") {
  auto root = fresh_root("noupstream");
  StageServices svc(config_for(root));
  PlacementRequest req;
  req.design = "b14";
  req.syn_ver = "s1_v1";
  CHECK(code_of([&] { svc.run_placement(req); }) == ErrCode::MissingUpstream);
}

TEST_CASE("placement renders stage parameters and env exports") {
  auto root = fresh_root("place");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));

  PlacementRequest req;
  req.design = "b14";
  req.syn_ver = "s1_v1";
  req.g_idx = 0;
  req.p_idx = 0;
  req.stage_params = {{"place_global_timing_effort", "high"},
                      {"place_utilization", "0.75"}};
  auto resp = svc.run_placement(req);

  CHECK(resp.status == "success");
  CHECK(resp.version == "s1_v1__g0__p0");
  CHECK(resp.tcl_script.find("set PLACE_GLOBAL_TIMING_EFFORT \"high\"") != std::string::npos);
  CHECK(resp.tcl_script.find("set PLACE_GLOBAL_CONG_EFFORT \"low\"") != std::string::npos);
  CHECK(resp.tcl_script.find("set PLACE_UTILIZATION 0.75") != std::string::npos);
  CHECK(resp.tcl_script.find("set env(place_global_timing_effort) \"high\"") !=
        std::string::npos);
  CHECK(resp.tcl_script.find("set env(place_utilization) \"0.75\"") != std::string::npos);
  // The netlist the placement consumes is the synthesis output.
  CHECK(resp.tcl_script.find((root / "b14" / "synthesis" / "s1_v1" / "netlist.v").string()) !=
        std::string::npos);
  CHECK(resp.provenance.at("PLACE_GLOBAL_TIMING_EFFORT") == "user");
  CHECK(resp.provenance.at("PLACE_GLOBAL_CONG_EFFORT") == "default");

  CHECK(fs::exists(root / "b14" / "impl" / "s1_v1__g0__p0" / "reports" /
                   "place_summary.rpt"));
}

TEST_CASE("placement rejects negative grid indices and bad parameters") {
  auto root = fresh_root("placebad");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));

  PlacementRequest neg;
  neg.design = "b14";
  neg.syn_ver = "s1_v1";
  neg.g_idx = -1;
  CHECK(code_of([&] { svc.run_placement(neg); }) == ErrCode::NegativeIndex);

  PlacementRequest unknown;
  unknown.design = "b14";
  unknown.syn_ver = "s1_v1";
  unknown.stage_params = {{"no_such_param", "1"}};
  CHECK(code_of([&] { svc.run_placement(unknown); }) == ErrCode::InvalidRequest);

  PlacementRequest out_of_range;
  out_of_range.design = "b14";
  out_of_range.syn_ver = "s1_v1";
  out_of_range.stage_params = {{"place_utilization", "7.5"}};
  CHECK(code_of([&] { svc.run_placement(out_of_range); }) == ErrCode::InvalidRequest);

  SynthRequest traversal = synth_req("../etc", "v1");
  CHECK(code_of([&] { svc.run_synthesis(traversal); }) == ErrCode::InvalidRequest);
}

TEST_CASE("cts requires placement and reports effective constraints") {
  auto root = fresh_root("cts");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));

  CtsRequest early;
  early.design = "b14";
  early.impl_ver = "s1_v1__g0__p0";
  CHECK(code_of([&] { svc.run_cts(early); }) == ErrCode::MissingUpstream);

  PlacementRequest preq;
  preq.design = "b14";
  preq.syn_ver = "s1_v1";
  svc.run_placement(preq);

  CtsRequest creq;
  creq.design = "b14";
  creq.impl_ver = "s1_v1__g0__p0";
  creq.target_skew = NumField{"0.05", 0.05};
  auto resp = svc.run_cts(creq);
  CHECK(resp.status == "success");
  CHECK(resp.constraints.at("target_skew") == "0.05");      // supplied
  CHECK(resp.constraints.at("max_transition") == "0.3");    // template default
  CHECK(resp.tcl_script.find("set TARGET_SKEW 0.05") != std::string::npos);
  CHECK(resp.tcl_script.find("set env(target_skew) \"0.05\"") != std::string::npos);
  CHECK(resp.report_paths == std::vector<std::string>{"cts_summary.rpt", "skew.rpt"});

  // Completed cts blocks a repeat on the same implementation version.
  CtsRequest again = creq;
  CHECK(code_of([&] { svc.run_cts(again); }) == ErrCode::WorkspaceConflict);
}

TEST_CASE("route requires cts then pins reports and archives artifacts") {
  auto root = fresh_root("route");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));

  RouteRequest early;
  early.design = "b14";
  early.impl_ver = "s1_v1__g0__p0";
  CHECK(code_of([&] { svc.run_route(early); }) == ErrCode::MissingUpstream);

  PlacementRequest preq;
  preq.design = "b14";
  preq.syn_ver = "s1_v1";
  svc.run_placement(preq);
  CtsRequest creq;
  creq.design = "b14";
  creq.impl_ver = "s1_v1__g0__p0";
  svc.run_cts(creq);

  RouteRequest rreq;
  rreq.design = "b14";
  rreq.impl_ver = "s1_v1__g0__p0";
  rreq.route_params = {{"route_top_layer", "8"}};
  rreq.collect_artifacts = true;
  auto resp = svc.run_route(rreq);
  CHECK(resp.status == "success");
  CHECK(resp.report_paths ==
        std::vector<std::string>{"route_summary.rpt", "postRoute_drc_max1M.rpt",
                                 "congestion.rpt"});
  CHECK(resp.tcl_script.find("set ROUTE_TOP_LAYER 8") != std::string::npos);
  CHECK(resp.artifact_archive == "b14_s1_v1__g0__p0_artifacts.tar");

  auto dir = root / "b14" / "impl" / "s1_v1__g0__p0";
  CHECK(fs::exists(dir / "b14_s1_v1__g0__p0_artifacts.tar"));
  CHECK(fs::exists(dir / "b14_final.gds"));
  auto manifest = edaflow::ws::Manifest::load(dir);
  REQUIRE(manifest.has_value());
  CHECK(manifest->stage_complete(Stage::placement));
  CHECK(manifest->stage_complete(Stage::cts));
  CHECK(manifest->stage_complete(Stage::route));
}

TEST_CASE("route fails when a declared report is missing") {
  auto root = fresh_root("routemiss");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));
  PlacementRequest preq;
  preq.design = "b14";
  preq.syn_ver = "s1_v1";
  svc.run_placement(preq);
  CtsRequest creq;
  creq.design = "b14";
  creq.impl_ver = "s1_v1__g0__p0";
  svc.run_cts(creq);

  // An external backend that exits cleanly but writes none of the reports.
  auto cfg = config_for(root);
  cfg.backend.kind = edaflow::exec::BackendConfig::Kind::external;
  cfg.backend.external_command = "true";
  StageServices hollow(cfg);
  RouteRequest rreq;
  rreq.design = "b14";
  rreq.impl_ver = "s1_v1__g0__p0";
  CHECK(code_of([&] { hollow.run_route(rreq); }) == ErrCode::ExecutorFailure);

  // The failure is recorded but retriable with a working backend.
  auto manifest = edaflow::ws::Manifest::load(root / "b14" / "impl" / "s1_v1__g0__p0");
  REQUIRE(manifest.has_value());
  CHECK(manifest->stages.at("route").status == "failed");
  CHECK(svc.run_route(rreq).status == "success");
}

TEST_CASE("gzip archive naming") {
  auto root = fresh_root("routegz");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("des", "s9_v1"));
  PlacementRequest preq;
  preq.design = "des";
  preq.syn_ver = "s9_v1";
  svc.run_placement(preq);
  CtsRequest creq;
  creq.design = "des";
  creq.impl_ver = "s9_v1__g0__p0";
  svc.run_cts(creq);
  RouteRequest rreq;
  rreq.design = "des";
  rreq.impl_ver = "s9_v1__g0__p0";
  rreq.collect_artifacts = true;
  rreq.gzip_archive = true;
  auto resp = svc.run_route(rreq);
  CHECK(resp.artifact_archive == "des_s9_v1__g0__p0_artifacts.tar.gz");
  CHECK(fs::exists(root / "des" / "impl" / "s9_v1__g0__p0" /
                   "des_s9_v1__g0__p0_artifacts.tar.gz"));
}

TEST_CASE("distinct implementation versions are independent") {
  auto root = fresh_root("grid");
  StageServices svc(config_for(root));
  svc.run_synthesis(synth_req("b14", "s1_v1"));

  for (long long g = 0; g < 2; ++g) {
    for (long long p = 0; p < 2; ++p) {
      PlacementRequest preq;
      preq.design = "b14";
      preq.syn_ver = "s1_v1";
      preq.g_idx = g;
      preq.p_idx = p;
      auto resp = svc.run_placement(preq);
      CHECK(resp.version == make_impl_ver("s1_v1", g, p));
    }
  }
  // Re-running any one of them conflicts.
  PlacementRequest dup;
  dup.design = "b14";
  dup.syn_ver = "s1_v1";
  dup.g_idx = 1;
  dup.p_idx = 1;
  CHECK(code_of([&] { svc.run_placement(dup); }) == ErrCode::WorkspaceConflict);
}

TEST_CASE("response serialization round trip") {
  auto root = fresh_root("serde");
  StageServices svc(config_for(root));
  auto resp = svc.run_synthesis(synth_req("leon2", "s2_v1"));
  auto j = resp.to_json();
  CHECK(j.at("status").get<std::string>() == "success");
  CHECK(j.at("stage").get<std::string>() == "synthesis");
  auto back = edaflow::svc::StageResponse::from_json(j);
  CHECK(back.status == resp.status);
  CHECK(back.stage == resp.stage);
  CHECK(back.design == resp.design);
  CHECK(back.version == resp.version);
  CHECK(back.tcl_script == resp.tcl_script);
  CHECK(back.report_paths == resp.report_paths);
  CHECK(back.provenance == resp.provenance);
}
