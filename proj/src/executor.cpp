// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/executor.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "edaflow/archive.hpp"
#include "edaflow/error.hpp"
#include "edaflow/subprocess.hpp"
#include "edaflow/text.hpp"
#include "edaflow/workspace.hpp"

namespace edaflow::exec {
namespace {

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// `set NAME value`, `set NAME "value"`, and `set env(name) "value"` lines:
// the effective parameters a report should echo back.
std::vector<std::pair<std::string, std::string>> script_params(const std::string& script) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& raw : text::split_lines(script)) {
    std::string line = text::trim(raw);
    if (line.rfind("set ", 0) != 0) continue;
    std::string rest = text::trim(line.substr(4));
    auto sp = rest.find_first_of(" \t");
    if (sp == std::string::npos) continue;
    std::string name = rest.substr(0, sp);
    std::string value = text::trim(rest.substr(sp));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (value.empty() || value.find('$') != std::string::npos) continue;

    bool env_form = name.rfind("env(", 0) == 0 && name.back() == ')';
    bool upper_form = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
      return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
    if (!env_form && !upper_form) continue;
    if (env_form) name = name.substr(4, name.size() - 5);
    out.emplace_back(name, value);
  }
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::trunc | std::ios::binary);
  if (!out) raise(ErrCode::IoError, "cannot write " + p.string());
  out << content;
}

ExecutionResult run_mock(const tpl::RenderedScript& script, const std::filesystem::path& stage_dir,
                         const std::string& design, const std::string& version,
                         const BackendConfig& cfg) {
  ExecutionResult res;
  if (cfg.mock_fail_stages.count(stage_name(script.stage))) {
    res.ok = false;
    res.exit_code = 1;
    res.log_excerpt = std::string("mock failure injected for stage ") + stage_name(script.stage);
    return res;
  }

  auto params = script_params(script.text);
  std::filesystem::create_directories(stage_dir / "reports");

  for (const auto& name : declared_reports(script.stage)) {
    std::string body;
    body += std::string("# MOCK ") + stage_name(script.stage) + " " + design + "\n";
    body += std::string(kTimestampPrefix) + " " + iso_now() + "\n";
    body += "# report " + name + "\n";
    for (const auto& [k, v] : params) body += "param " + k + " = " + v + "\n";
    write_file(stage_dir / "reports" / name, body);
    res.report_names.push_back(name);
  }

  if (script.stage == Stage::synthesis) {
    write_file(stage_dir / "netlist.v",
               "// MOCK netlist " + design + " " + version + "\nmodule " + design +
                   " ();\nendmodule\n");
  }
  if (script.stage == Stage::route) {
    for (const char* ext : {"gds", "def", "lef", "spef", "v"}) {
      write_file(stage_dir / (design + "_final." + ext),
                 std::string("MOCK ") + ext + " artifact " + design + " " + version + "\n");
    }
  }

  res.ok = true;
  res.exit_code = 0;
  res.checkpoint = version;
  res.log_excerpt = std::string("mock ") + stage_name(script.stage) + " completed for " + design;
  return res;
}

ExecutionResult run_external(const std::filesystem::path& script_path,
                             const std::filesystem::path& stage_dir,
                             const std::string& version, const BackendConfig& cfg) {
  if (cfg.external_command.empty())
    raise(ErrCode::BackendUnavailable, "external backend has no command configured");

  std::string cmd = cfg.external_command;
  auto marker = cmd.find("{script}");
  if (marker != std::string::npos)
    cmd = cmd.substr(0, marker) + script_path.string() + cmd.substr(marker + 8);
  else
    cmd += " " + script_path.string();

  std::map<std::string, std::string> env;
  for (const auto& name : cfg.env_passthrough) {
    if (const char* v = std::getenv(name.c_str())) env[name] = v;
  }
  for (const auto& [k, v] : cfg.extra_env) env[k] = v;

  auto t0 = std::chrono::steady_clock::now();
  ProcessResult pr = run_process({"/bin/sh", "-c", cmd}, stage_dir, env,
                                 std::chrono::duration_cast<std::chrono::milliseconds>(cfg.timeout));
  auto t1 = std::chrono::steady_clock::now();

  if (pr.timed_out)
    raise(ErrCode::Timeout, "backend exceeded " + std::to_string(cfg.timeout.count()) +
                                "s: " + cfg.external_command);

  ExecutionResult res;
  res.ok = pr.exit_code == 0;
  res.exit_code = pr.exit_code;
  res.duration_s = std::chrono::duration<double>(t1 - t0).count();
  if (pr.output.size() > 4000)
    res.log_excerpt = pr.output.substr(pr.output.size() - 4000);
  else
    res.log_excerpt = pr.output;
  if (res.ok) res.checkpoint = version;

  std::error_code ec;
  auto reports_dir = stage_dir / "reports";
  if (std::filesystem::is_directory(reports_dir, ec)) {
    for (const auto& e : std::filesystem::directory_iterator(reports_dir, ec))
      if (e.is_regular_file()) res.report_names.push_back(e.path().filename().string());
    std::sort(res.report_names.begin(), res.report_names.end());
  }
  return res;
}

}  // namespace

const std::vector<std::string>& declared_reports(Stage s) {
  static const std::vector<std::string> kSynthesis = {"qor.rpt", "timing.rpt", "area.rpt"};
  static const std::vector<std::string> kPlacement = {"place_summary.rpt",
                                                      "place_congestion.rpt"};
  static const std::vector<std::string> kCts = {"cts_summary.rpt", "skew.rpt"};
  static const std::vector<std::string> kRoute = {"route_summary.rpt", "postRoute_drc_max1M.rpt",
                                                  "congestion.rpt"};
  switch (s) {
    case Stage::synthesis: return kSynthesis;
    case Stage::placement: return kPlacement;
    case Stage::cts: return kCts;
    case Stage::route: return kRoute;
  }
  return kSynthesis;
}

ExecutionResult execute(const tpl::RenderedScript& script, const std::filesystem::path& stage_dir,
                        const std::string& design, const std::string& version,
                        const BackendConfig& cfg) {
  std::error_code ec;
  if (!std::filesystem::is_directory(stage_dir, ec))
    raise(ErrCode::WorkspaceMissing, "stage directory missing: " + stage_dir.string());

  std::filesystem::create_directories(stage_dir / "scripts");
  std::filesystem::create_directories(stage_dir / "reports");
  auto script_path = stage_dir / "scripts" / (std::string(stage_name(script.stage)) + ".tcl");
  write_file(script_path, script.text);

  if (cfg.kind == BackendConfig::Kind::mock) {
    auto t0 = std::chrono::steady_clock::now();
    ExecutionResult res = run_mock(script, stage_dir, design, version, cfg);
    res.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
  return run_external(script_path, stage_dir, version, cfg);
}

std::filesystem::path collect_artifacts(const std::filesystem::path& dir,
                                        const ArchiveRequest& req) {
  if (req.archive_name.empty())
    raise(ErrCode::InvalidRequest, "archive name must not be empty");

  std::vector<std::string> matches;
  for (auto it = std::filesystem::recursive_directory_iterator(dir);
       it != std::filesystem::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    std::string rel = std::filesystem::relative(it->path(), dir).generic_string();
    if (rel == req.archive_name || rel == req.archive_name + ".gz") continue;
    for (const auto& pat : req.patterns) {
      if (glob_match(pat, rel)) {
        matches.push_back(rel);
        break;
      }
    }
  }
  if (matches.empty())
    raise(ErrCode::NoMatches, "no files match the artifact patterns under " + dir.string());
  std::sort(matches.begin(), matches.end());

  auto tar_path = dir / req.archive_name;
  write_tar(tar_path, dir, matches);
  if (req.gzip) {
    auto gz_path = dir / (req.archive_name + ".gz");
    gzip_file(tar_path, gz_path);
    std::filesystem::remove(tar_path);
    return gz_path;
  }
  return tar_path;
}

std::optional<std::string> locate_checkpoint(const std::filesystem::path& design_dir,
                                             Stage stage) {
  struct Candidate {
    long long ts;
    std::string version;
  };
  std::optional<Candidate> best;
  for (const char* kind : {"synthesis", "impl"}) {
    std::error_code ec;
    auto base = design_dir / kind;
    if (!std::filesystem::is_directory(base, ec)) continue;
    for (const auto& e : std::filesystem::directory_iterator(base, ec)) {
      if (!e.is_directory()) continue;
      auto m = ws::Manifest::load(e.path());
      if (!m || !m->stage_complete(stage)) continue;
      auto it = m->stages.find(stage_name(stage));
      Candidate c{it->second.timestamp_ns, m->version};
      if (!best || c.ts > best->ts || (c.ts == best->ts && c.version > best->version)) best = c;
    }
  }
  if (!best) return std::nullopt;
  return best->version;
}

}  // namespace edaflow::exec
