// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace edaflow::exec {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string output;  // stdout and stderr, merged
};

// Runs argv with a fully controlled environment (exactly `env`), cwd set to
// `cwd`, and a hard timeout after which the process group is killed.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd,
                          const std::map<std::string, std::string>& env,
                          std::chrono::milliseconds timeout);

}  // namespace edaflow::exec
