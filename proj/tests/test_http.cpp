// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <memory>
#include <set>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "edaflow/http_host.hpp"

namespace fs = std::filesystem;
using edaflow::ErrCode;
using edaflow::Stage;
using edaflow::kStageOrder;
using edaflow::host::HostConfig;
using edaflow::host::ServiceHost;
using edaflow::host::http_status;
using nlohmann::json;

namespace {

struct Fixture {
  fs::path root;
  std::unique_ptr<ServiceHost> host;

  explicit Fixture(const std::string& name) {
    root = fs::temp_directory_path() / ("edaflow_http_" + name);
    fs::remove_all(root);
    fs::create_directories(root);
    HostConfig cfg;
    cfg.service.workspace_root = root;
    cfg.service.data_dir = EDAFLOW_REPO_DATA_DIR;
    cfg.ephemeral_ports = true;
    host = std::make_unique<ServiceHost>(cfg);
    host->start();
  }
  ~Fixture() {
    if (host) host->stop();
  }

  httplib::Client client(Stage s) { return httplib::Client("127.0.0.1", host->port(s)); }
  httplib::Client agent_client() { return httplib::Client("127.0.0.1", host->agent_port()); }
};

json body_of(const httplib::Result& res) {
  REQUIRE(res);
  return json::parse(res->body);
}

}  // namespace

TEST_CASE("status mapping distinguishes caller and server faults") {
  CHECK(http_status(ErrCode::InvalidRequest) == 400);
  CHECK(http_status(ErrCode::NegativeIndex) == 400);
  CHECK(http_status(ErrCode::EmptyPrompt) == 400);
  CHECK(http_status(ErrCode::NoStageDetected) == 400);
  CHECK(http_status(ErrCode::MissingUpstream) == 404);
  CHECK(http_status(ErrCode::SessionUnknown) == 404);
  CHECK(http_status(ErrCode::WorkspaceConflict) == 409);
  CHECK(http_status(ErrCode::ExecutorFailure) == 500);
  CHECK(http_status(ErrCode::Timeout) == 500);
  CHECK(http_status(ErrCode::IoError) == 500);
}

TEST_CASE("every listener reports health with its service name") {
  Fixture fx("health");
  for (Stage s : kStageOrder) {
    auto cli = fx.client(s);
    auto res = cli.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto j = json::parse(res->body);
    CHECK(j.at("status") == "ok");
    CHECK(j.at("service") == edaflow::tool_name(s));
  }
  auto cli = fx.agent_client();
  auto res = cli.Get("/health");
  REQUIRE(res);
  auto j = json::parse(res->body);
  CHECK(j.at("service") == "agent");
}

TEST_CASE("ephemeral ports are distinct and nonzero") {
  Fixture fx("ports");
  std::set<int> ports;
  for (Stage s : kStageOrder) {
    CHECK(fx.host->port(s) > 0);
    ports.insert(fx.host->port(s));
  }
  CHECK(fx.host->agent_port() > 0);
  ports.insert(fx.host->agent_port());
  CHECK(ports.size() == 5);
}

TEST_CASE("stage run endpoint executes and reports errors by status") {
  Fixture fx("run");
  auto syn = fx.client(Stage::synthesis);

  auto ok = syn.Post("/run", json{{"design", "b14"}, {"syn_version", "s1_v1"}}.dump(),
                     "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  auto resp = json::parse(ok->body);
  CHECK(resp.at("status") == "success");
  CHECK(resp.at("stage") == "synthesis");
  CHECK(fs::exists(fx.root / "b14" / "synthesis" / "s1_v1" / "netlist.v"));

  SUBCASE("rerunning a completed version is a conflict") {
    auto dup = syn.Post("/run", json{{"design", "b14"}, {"syn_version", "s1_v1"}}.dump(),
                        "application/json");
    REQUIRE(dup);
    CHECK(dup->status == 409);
    auto err = json::parse(dup->body);
    CHECK(err.at("status") == "error");
    CHECK(err.at("error").at("name") == "WorkspaceConflict");
  }
  SUBCASE("missing upstream is not found") {
    auto place = fx.client(Stage::placement);
    auto res = place.Post("/run", json{{"design", "b14"}, {"syn_ver", "missing"}}.dump(),
                          "application/json");
    REQUIRE(res);
    CHECK(res->status == 404);
    CHECK(json::parse(res->body).at("error").at("name") == "MissingUpstream");
  }
  SUBCASE("malformed JSON is a bad request") {
    auto res = syn.Post("/run", "{oops", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body).at("error").at("name") == "InvalidRequest");
  }
  SUBCASE("negative index is a bad request") {
    auto place = fx.client(Stage::placement);
    auto res = place.Post(
        "/run", json{{"design", "b14"}, {"syn_ver", "s1_v1"}, {"g_idx", -1}}.dump(),
        "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body).at("error").at("name") == "NegativeIndex");
  }
  SUBCASE("missing required field is a bad request") {
    auto cts = fx.client(Stage::cts);
    auto res = cts.Post("/run", json{{"design", "b14"}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
  }
}

TEST_CASE("each stage port exposes a single-tool rpc endpoint") {
  Fixture fx("rpc");
  auto cts = fx.client(Stage::cts);

  json list{{"jsonrpc", "2.0"}, {"id", 1}, {"method", "tools/list"}};
  auto res = cts.Post("/rpc", list.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  auto j = json::parse(res->body);
  REQUIRE(j.at("result").at("tools").size() == 1);
  CHECK(j.at("result").at("tools")[0].at("name") == "cts");

  json note{{"jsonrpc", "2.0"}, {"method", "tools/list"}};
  auto silent = cts.Post("/rpc", note.dump(), "application/json");
  REQUIRE(silent);
  CHECK(silent->status == 204);
  CHECK(silent->body.empty());
}

TEST_CASE("agent endpoint drives a flow and threads the session") {
  Fixture fx("agent");
  auto cli = fx.agent_client();
  cli.set_read_timeout(60, 0);

  auto first = cli.Post(
      "/agent/run",
      json{{"prompt", "synthesize b14 on FreePDK45 with clock period 2.5"}}.dump(),
      "application/json");
  REQUIRE(first);
  CHECK(first->status == 200);
  auto resp = json::parse(first->body);
  CHECK(resp.at("status") == "success");
  REQUIRE(resp.at("results").size() == 1);
  CHECK(resp.at("results")[0].at("tool") == "synth");
  std::string session = resp.at("session_id").get<std::string>();
  CHECK(!session.empty());

  // The follow-up names only placement; the session supplies design and the
  // completed synthesis version.
  auto second = cli.Post(
      "/agent/run",
      json{{"prompt", "now run placement with congestion effort high"},
           {"session_id", session}}.dump(),
      "application/json");
  REQUIRE(second);
  CHECK(second->status == 200);
  auto presp = json::parse(second->body);
  CHECK(presp.at("status") == "success");
  CHECK(presp.at("session_id") == session);
  REQUIRE(presp.at("results").size() == 1);
  CHECK(presp.at("results")[0].at("tool") == "placement");
  CHECK(presp.at("results")[0].at("params").at("global_cong_effort") == "high");
  CHECK(presp.at("results")[0].at("version").get<std::string>().find("__g0__p0") !=
        std::string::npos);
}

TEST_CASE("agent endpoint maps prompt faults to statuses") {
  Fixture fx("agenterr");
  auto cli = fx.agent_client();

  SUBCASE("missing prompt field") {
    auto res = cli.Post("/agent/run", json::object().dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
  }
  SUBCASE("empty prompt") {
    auto res = cli.Post("/agent/run", json{{"prompt", "  "}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body).at("error").at("name") == "EmptyPrompt");
  }
  SUBCASE("no stage detected") {
    auto res = cli.Post("/agent/run", json{{"prompt", "hello there"}}.dump(),
                        "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    CHECK(json::parse(res->body).at("error").at("name") == "NoStageDetected");
  }
  SUBCASE("conflicted plans come back as data, not errors") {
    // Placement on a fresh session: no design known, no synthesis done.
    auto res = cli.Post("/agent/run", json{{"prompt", "run placement"}}.dump(),
                        "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto j = json::parse(res->body);
    CHECK(j.at("status") == "error");
    CHECK(j.at("conflicts").size() >= 1);
    bool has_dependency = false;
    for (const auto& c : j.at("conflicts"))
      if (c.at("kind") == "dependency") has_dependency = true;
    CHECK(has_dependency);
  }
}
