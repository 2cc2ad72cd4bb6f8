// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edaflow/stage.hpp"
#include "edaflow/template_engine.hpp"

namespace edaflow::exec {

// The mock backend fabricates tool behavior so the full flow runs hermetically;
// the external backend shells out to a real tool command.
struct BackendConfig {
  enum class Kind { mock, external };
  Kind kind = Kind::mock;

  // external: command line run as `/bin/sh -c "<command>"`. "{script}" inside
  // the command expands to the script path; otherwise the path is appended.
  std::string external_command;
  std::vector<std::string> env_passthrough = {"PATH", "HOME", "TMPDIR", "LANG"};
  std::map<std::string, std::string> extra_env;
  std::chrono::seconds timeout{300};

  // mock: stages that should fail, for exercising error paths.
  std::set<std::string> mock_fail_stages;
};

struct ExecutionResult {
  bool ok = false;
  int exit_code = 0;
  std::string log_excerpt;
  std::vector<std::string> report_names;  // basenames under reports/
  std::string checkpoint;                 // version label of the finished stage
  double duration_s = 0.0;
};

// Report files every stage is expected to produce, in contract order.
const std::vector<std::string>& declared_reports(Stage s);

// Writes the script under <stage_dir>/scripts/, runs the backend with
// <stage_dir> as working directory, and returns what was produced.
// Raises WorkspaceMissing, BackendUnavailable, Timeout.
ExecutionResult execute(const tpl::RenderedScript& script, const std::filesystem::path& stage_dir,
                        const std::string& design, const std::string& version,
                        const BackendConfig& cfg);

struct ArchiveRequest {
  std::vector<std::string> patterns;
  std::string archive_name;
  bool gzip = false;
};

// Packs files matching the patterns (relative to dir) into a deterministic
// archive inside dir; returns its path. Raises NoMatches when nothing matches.
std::filesystem::path collect_artifacts(const std::filesystem::path& dir,
                                        const ArchiveRequest& req);

// Newest completed checkpoint of `stage` under the design directory, by
// manifest timestamp (version string breaks ties). Unreadable manifests are
// skipped.
std::optional<std::string> locate_checkpoint(const std::filesystem::path& design_dir, Stage stage);

// Mock timestamp lines start with this prefix; determinism checks strip them.
inline constexpr const char* kTimestampPrefix = "# generated_at";

}  // namespace edaflow::exec
