// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/http_host.hpp"

#include <chrono>
#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "edaflow/requests.hpp"

namespace edaflow::host {
namespace {

using nlohmann::json;

std::string error_body(const Error& e) {
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["error"] = {{"name", err_name(e.code())}, {"message", e.what()}};
  return j.dump(2);
}

std::string plain_error_body(const std::string& message) {
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["error"] = {{"name", "Internal"}, {"message", message}};
  return j.dump(2);
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body.empty() ? "{}" : body);
  } catch (const json::exception& e) {
    raise(ErrCode::InvalidRequest, std::string("request body is not valid JSON: ") + e.what());
  }
}

}  // namespace

int http_status(ErrCode code) {
  switch (code) {
    case ErrCode::InvalidRequest:
    case ErrCode::NegativeIndex:
    case ErrCode::EmptyPrompt:
    case ErrCode::NoStageDetected:
      return 400;
    case ErrCode::MissingUpstream:
    case ErrCode::SessionUnknown:
      return 404;
    case ErrCode::WorkspaceConflict:
      return 409;
    default:
      return 500;
  }
}

ServiceHost::ServiceHost(HostConfig cfg) : cfg_(std::move(cfg)) {
  services_ = std::make_unique<svc::StageServices>(cfg_.service);
  invoker_ = std::make_unique<agent::InProcessInvoker>(services_.get());
  auto session_file =
      std::filesystem::path(services_->config().workspace_root) / ".sessions.json";
  orchestrator_ = std::make_unique<agent::Orchestrator>(&services_->catalog(), invoker_.get(),
                                                        session_file);
}

ServiceHost::~ServiceHost() { stop(); }

int ServiceHost::port(Stage s) const {
  auto it = stage_listeners_.find(s);
  return it == stage_listeners_.end() ? 0 : it->second.bound;
}

void ServiceHost::wire_stage(Listener& l, Stage s) {
  auto* server = l.server.get();
  endpoints_.push_back(std::make_unique<rpc::RpcEndpoint>(services_.get(), std::vector<Stage>{s}));
  rpc::RpcEndpoint* endpoint = endpoints_.back().get();

  server->Get("/health", [s](const httplib::Request&, httplib::Response& res) {
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["service"] = tool_name(s);
    res.set_content(j.dump(2), "application/json");
  });

  server->Post("/run", [this, s](const httplib::Request& req, httplib::Response& res) {
    try {
      json body = parse_body(req.body);
      svc::StageResponse resp;
      switch (s) {
        case Stage::synthesis:
          resp = services_->run_synthesis(svc::parse_synth_request(body, services_->catalog()));
          break;
        case Stage::placement:
          resp =
              services_->run_placement(svc::parse_placement_request(body, services_->catalog()));
          break;
        case Stage::cts:
          resp = services_->run_cts(svc::parse_cts_request(body, services_->catalog()));
          break;
        case Stage::route:
          resp = services_->run_route(svc::parse_route_request(body, services_->catalog()));
          break;
      }
      res.set_content(resp.to_json().dump(2), "application/json");
    } catch (const Error& e) {
      res.status = http_status(e.code());
      res.set_content(error_body(e), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(plain_error_body(e.what()), "application/json");
    }
  });

  server->Post("/rpc", [endpoint](const httplib::Request& req, httplib::Response& res) {
    std::string out = endpoint->handle_text(req.body);
    if (out.empty()) {
      res.status = 204;  // notification batch: nothing to answer
      return;
    }
    res.set_content(out, "application/json");
  });
}

void ServiceHost::wire_agent(Listener& l) {
  auto* server = l.server.get();

  server->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["service"] = "agent";
    res.set_content(j.dump(2), "application/json");
  });

  server->Post("/agent/run", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      json body = parse_body(req.body);
      if (!body.is_object() || !body.contains("prompt") || !body["prompt"].is_string())
        raise(ErrCode::InvalidRequest, "agent request needs a string field \"prompt\"");
      std::string session;
      if (body.contains("session_id")) {
        if (!body["session_id"].is_string())
          raise(ErrCode::InvalidRequest, "session_id must be a string");
        session = body["session_id"].get<std::string>();
      }
      agent::AgentResponse resp =
          orchestrator_->run_prompt(body["prompt"].get<std::string>(), session);
      res.set_content(resp.to_json().dump(2), "application/json");
    } catch (const Error& e) {
      res.status = http_status(e.code());
      res.set_content(error_body(e), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(plain_error_body(e.what()), "application/json");
    }
  });
}

void ServiceHost::launch(Listener& l) {
  auto* server = l.server.get();
  if (cfg_.ephemeral_ports) {
    int p = server->bind_to_any_port(cfg_.bind_address);
    if (p <= 0) raise(ErrCode::PortInUse, "cannot bind an ephemeral port on " + cfg_.bind_address);
    l.bound = p;
  } else {
    if (!server->bind_to_port(cfg_.bind_address, l.requested))
      raise(ErrCode::PortInUse,
            "cannot bind " + cfg_.bind_address + ":" + std::to_string(l.requested));
    l.bound = l.requested;
  }
  l.thread = std::thread([server] { server->listen_after_bind(); });
  // listen_after_bind needs a beat before is_running flips; requests made
  // right after start() must not race it.
  for (int i = 0; i < 200 && !server->is_running(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  if (!server->is_running()) raise(ErrCode::Timeout, "HTTP listener failed to start");
}

void ServiceHost::start() {
  if (started_) return;

  if (!cfg_.ephemeral_ports) {
    std::set<int> seen;
    for (const auto& [s, p] : cfg_.ports)
      if (!seen.insert(p).second)
        raise(ErrCode::ConfigInvalid, "duplicate port " + std::to_string(p));
    if (!seen.insert(cfg_.agent_port).second)
      raise(ErrCode::ConfigInvalid, "duplicate port " + std::to_string(cfg_.agent_port));
  }

  for (Stage s : kStageOrder) {
    Listener& l = stage_listeners_[s];
    l.server = std::make_unique<httplib::Server>();
    auto it = cfg_.ports.find(s);
    l.requested = it == cfg_.ports.end() ? 0 : it->second;
    wire_stage(l, s);
  }
  agent_listener_.server = std::make_unique<httplib::Server>();
  agent_listener_.requested = cfg_.agent_port;
  wire_agent(agent_listener_);

  try {
    for (Stage s : kStageOrder) launch(stage_listeners_[s]);
    launch(agent_listener_);
  } catch (...) {
    stop();
    throw;
  }
  agent_bound_ = agent_listener_.bound;
  started_ = true;
}

void ServiceHost::stop() {
  auto shut = [](Listener& l) {
    if (l.server) l.server->stop();
    if (l.thread.joinable()) l.thread.join();
  };
  for (auto& [s, l] : stage_listeners_) shut(l);
  shut(agent_listener_);
  started_ = false;
}

}  // namespace edaflow::host
