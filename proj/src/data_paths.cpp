// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/data_paths.hpp"

#include <cstdlib>

#include "edaflow/error.hpp"

#ifndef EDAFLOW_DEFAULT_DATA_DIR
#define EDAFLOW_DEFAULT_DATA_DIR ""
#endif

namespace edaflow {

std::filesystem::path resolve_data_dir(const std::string& override_path) {
  std::filesystem::path dir;
  if (!override_path.empty()) {
    dir = override_path;
  } else if (const char* env = std::getenv("EDAFLOW_DATA_DIR"); env && *env) {
    dir = env;
  } else {
    dir = EDAFLOW_DEFAULT_DATA_DIR;
  }
  if (dir.empty() || !std::filesystem::is_directory(dir))
    raise(ErrCode::ConfigInvalid, "data directory not found: " + dir.string());
  return dir;
}

}  // namespace edaflow
