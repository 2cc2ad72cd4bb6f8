// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "edaflow/agent.hpp"
#include "edaflow/error.hpp"
#include "edaflow/rpc.hpp"
#include "edaflow/stage.hpp"
#include "edaflow/stage_services.hpp"

namespace httplib {
class Server;
}

namespace edaflow::host {

// HTTP status for a domain error: caller mistakes map to 4xx, everything
// else is a server fault.
int http_status(ErrCode code);

struct HostConfig {
  svc::ServiceConfig service;
  std::map<Stage, int> ports = {
      {Stage::synthesis, 18101},
      {Stage::placement, 18102},
      {Stage::cts, 18103},
      {Stage::route, 18104},
  };
  int agent_port = 18105;
  std::string bind_address = "127.0.0.1";
  bool ephemeral_ports = false;  // let the OS pick (tests)
};

// One process hosting the four stage services plus the orchestrator agent,
// each on its own port. Stage endpoints: GET /health, POST /run, POST /rpc.
// Agent endpoints: GET /health, POST /agent/run.
class ServiceHost {
 public:
  explicit ServiceHost(HostConfig cfg);
  ~ServiceHost();
  ServiceHost(const ServiceHost&) = delete;
  ServiceHost& operator=(const ServiceHost&) = delete;

  void start();  // binds and serves; raises PortInUse / ConfigInvalid
  void stop();

  int port(Stage s) const;  // bound port (differs from config when ephemeral)
  int agent_port() const { return agent_bound_; }
  svc::StageServices& services() { return *services_; }
  agent::Orchestrator& orchestrator() { return *orchestrator_; }

 private:
  struct Listener {
    std::unique_ptr<httplib::Server> server;
    std::thread thread;
    int requested = 0;
    int bound = 0;
  };

  void wire_stage(Listener& l, Stage s);
  void wire_agent(Listener& l);
  void launch(Listener& l);

  HostConfig cfg_;
  std::unique_ptr<svc::StageServices> services_;
  std::unique_ptr<agent::InProcessInvoker> invoker_;
  std::unique_ptr<agent::Orchestrator> orchestrator_;
  std::vector<std::unique_ptr<rpc::RpcEndpoint>> endpoints_;
  std::map<Stage, Listener> stage_listeners_;
  Listener agent_listener_;
  int agent_bound_ = 0;
  bool started_ = false;
};

}  // namespace edaflow::host
