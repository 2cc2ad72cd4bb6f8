// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <string>

namespace edaflow {

// Resolves the data directory (templates, parameter catalog, command list).
// Precedence: explicit override > EDAFLOW_DATA_DIR env var > the path baked
// in at build time. Raises ConfigInvalid when the winner does not exist.
std::filesystem::path resolve_data_dir(const std::string& override_path = "");

}  // namespace edaflow
