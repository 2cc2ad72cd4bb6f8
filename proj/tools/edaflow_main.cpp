// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "edaflow/agent.hpp"
#include "edaflow/benchgen.hpp"
#include "edaflow/codebleu/command_db.hpp"
#include "edaflow/codebleu/evaluate.hpp"
#include "edaflow/data_paths.hpp"
#include "edaflow/error.hpp"
#include "edaflow/http_host.hpp"
#include "edaflow/model_client.hpp"
#include "edaflow/stage_services.hpp"

namespace {

using namespace edaflow;

// 0 success, 1 caller mistake, 2 internal failure.
int exit_code_for(ErrCode code) {
  switch (code) {
    case ErrCode::ExecutorFailure:
    case ErrCode::BackendUnavailable:
    case ErrCode::Timeout:
    case ErrCode::PortInUse:
    case ErrCode::StageFailed:
    case ErrCode::ArchiveWriteFailed:
      return 2;
    default:
      return 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop.store(true); }

struct CommonOpts {
  std::string workspace = "workspace";
  std::string data_dir;
  std::string backend = "mock";
  std::string external_command;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--workspace-root", opts->workspace, "Workspace root directory");
  cmd->add_option("--data-dir", opts->data_dir,
                  "Directory with templates/, param_catalog.json, eda_commands.json");
  cmd->add_option("--backend", opts->backend, "Flow backend")
      ->check(CLI::IsMember({"mock", "external"}));
  cmd->add_option("--external-command", opts->external_command,
                  "Shell command for the external backend; {script} expands to the TCL path");
}

svc::ServiceConfig service_config(const CommonOpts& opts) {
  svc::ServiceConfig cfg;
  cfg.workspace_root = opts.workspace;
  cfg.data_dir = resolve_data_dir(opts.data_dir);
  if (opts.backend == "external") {
    cfg.backend.kind = exec::BackendConfig::Kind::external;
    if (opts.external_command.empty())
      raise(ErrCode::ConfigInvalid, "--backend external needs --external-command");
    cfg.backend.external_command = opts.external_command;
  }
  return cfg;
}

int cmd_serve(const CommonOpts& common, const host::HostConfig& requested) {
  host::HostConfig cfg = requested;
  cfg.service = service_config(common);
  host::ServiceHost hostd(cfg);
  hostd.start();

  for (Stage s : kStageOrder)
    std::cout << tool_name(s) << "\thttp://" << cfg.bind_address << ":" << hostd.port(s)
              << "  (GET /health, POST /run, POST /rpc)\n";
  std::cout << "agent\thttp://" << cfg.bind_address << ":" << hostd.agent_port()
            << "  (GET /health, POST /agent/run)\n"
            << "workspace: " << cfg.service.workspace_root.string() << "\n"
            << std::flush;

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  hostd.stop();
  return 0;
}

int cmd_run(const CommonOpts& common, const std::string& prompt, const std::string& session) {
  svc::ServiceConfig cfg = service_config(common);
  svc::StageServices services(cfg);
  agent::InProcessInvoker invoker(&services);
  agent::Orchestrator orchestrator(&services.catalog(), &invoker,
                                   cfg.workspace_root / ".sessions.json");
  agent::AgentResponse resp = orchestrator.run_prompt(prompt, session);
  std::cout << resp.to_json().dump(2) << "\n";
  if (resp.status == "success") return 0;
  // Conflicts are caller mistakes; a failed stage is a backend fault.
  return resp.conflicts.empty() ? 2 : 1;
}

int cmd_score(const std::string& data_dir, const std::string& reference,
              const std::string& candidate, const std::string& stage) {
  auto dir = resolve_data_dir(data_dir);
  auto db = cb::EdaCommandDb::load(dir / "eda_commands.json");
  std::optional<Stage> s;
  if (!stage.empty()) {
    s = stage_from_name(stage);
    if (!s) raise(ErrCode::InvalidRequest, "unknown stage: " + stage);
  }
  auto report = cb::evaluate(read_file(reference), read_file(candidate), db, s);
  std::cout << report.to_json().dump(2) << "\n";
  return 0;
}

int cmd_benchgen(const std::string& data_dir, const bench::GenOptions& opts,
                 const std::string& out, const std::string& engine) {
  auto dir = resolve_data_dir(data_dir);
  auto catalog = cat::ParamCatalog::load(dir / "param_catalog.json");
  bench::Generator gen(&catalog);
  std::vector<bench::BenchmarkCase> cases = gen.generate(opts);
  if (engine == "model") {
    model::ModelClient client(model::ModelConfig::from_env());
    for (auto& c : cases) c.prompt = gen.render_prompt_model(c, client);
  }
  bench::write_jsonl(out, cases);
  std::cout << "wrote " << cases.size() << " cases to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edaflow: templated RTL-to-GDSII stage services, orchestrator agent, "
               "TCL similarity scoring, and benchmark generation"};
  app.require_subcommand(1);
  bool json_flag = false;  // output is JSON already; kept for script compat
  auto add_json = [&json_flag](CLI::App* cmd) {
    cmd->add_flag("--json", json_flag, "Emit JSON output (default)");
  };

  CommonOpts common;
  host::HostConfig host_cfg;

  auto* serve = app.add_subcommand("serve", "Host the four stage services and the agent");
  add_common(serve, &common);
  add_json(serve);
  serve->add_option("--port-synth", host_cfg.ports[Stage::synthesis], "Synthesis service port");
  serve->add_option("--port-placement", host_cfg.ports[Stage::placement],
                    "Placement service port");
  serve->add_option("--port-cts", host_cfg.ports[Stage::cts], "Clock-tree service port");
  serve->add_option("--port-route", host_cfg.ports[Stage::route], "Routing service port");
  serve->add_option("--agent-port", host_cfg.agent_port, "Agent port");
  serve->add_option("--bind", host_cfg.bind_address, "Bind address");

  std::string prompt, session;
  auto* run = app.add_subcommand("run", "Run one natural-language request through the agent");
  add_common(run, &common);
  add_json(run);
  run->add_option("prompt,--prompt", prompt, "Request text")->required();
  run->add_option("--session", session, "Existing session id to continue");

  std::string ref_path, cand_path, stage_name, score_data;
  auto* score = app.add_subcommand("score", "Score a candidate TCL script against a reference");
  score->alias("evaluate");
  add_json(score);
  score->add_option("--reference", ref_path, "Reference script path")->required();
  score->add_option("--candidate", cand_path, "Candidate script path")->required();
  score->add_option("--stage", stage_name, "Stage override (synth, placement, cts, route)");
  score->add_option("--data-dir", score_data, "Directory with eda_commands.json");

  bench::GenOptions gen_opts;
  std::string out_path = "benchmarks.jsonl";
  std::string engine = "hermetic";
  std::string bench_data;
  auto* bg = app.add_subcommand("benchgen", "Generate a prompt benchmark with ground truth");
  add_json(bg);
  bg->add_option("--n", gen_opts.n, "Number of cases");
  bg->add_option("--seed", gen_opts.seed, "Dataset seed");
  bg->add_option("--out", out_path, "Output JSONL path");
  bg->add_flag("--multi-stage", gen_opts.multi_stage, "Sample multi-stage flows too");
  bg->add_option("--engine", engine, "Prompt renderer")
      ->check(CLI::IsMember({"hermetic", "model"}));
  bg->add_option("--data-dir", bench_data, "Directory with param_catalog.json");

  try {
    app.parse(argc, argv);
    if (serve->parsed()) return cmd_serve(common, host_cfg);
    if (run->parsed()) return cmd_run(common, prompt, session);
    if (score->parsed()) return cmd_score(score_data, ref_path, cand_path, stage_name);
    if (bg->parsed()) return cmd_benchgen(bench_data, gen_opts, out_path, engine);
    return 1;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const edaflow::Error& e) {
    nlohmann::ordered_json j;
    j["status"] = "error";
    j["error"] = {{"name", err_name(e.code())}, {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    nlohmann::ordered_json j;
    j["status"] = "error";
    j["error"] = {{"name", "Internal"}, {"message", e.what()}};
    std::cerr << j.dump(2) << "\n";
    return 2;
  }
}
