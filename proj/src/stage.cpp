// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/stage.hpp"

namespace edaflow {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::synthesis: return "synthesis";
    case Stage::placement: return "placement";
    case Stage::cts: return "cts";
    case Stage::route: return "route";
  }
  return "unknown";
}

const char* tool_name(Stage s) {
  switch (s) {
    case Stage::synthesis: return "synth";
    case Stage::placement: return "placement";
    case Stage::cts: return "cts";
    case Stage::route: return "route";
  }
  return "unknown";
}

std::optional<Stage> stage_from_name(std::string_view name) {
  if (name == "synthesis" || name == "synth") return Stage::synthesis;
  if (name == "placement" || name == "place") return Stage::placement;
  if (name == "cts") return Stage::cts;
  if (name == "route" || name == "routing") return Stage::route;
  return std::nullopt;
}

std::optional<Stage> upstream_of(Stage s) {
  switch (s) {
    case Stage::synthesis: return std::nullopt;
    case Stage::placement: return Stage::synthesis;
    case Stage::cts: return Stage::placement;
    case Stage::route: return Stage::cts;
  }
  return std::nullopt;
}

bool is_contiguous_combo(const std::vector<Stage>& stages) {
  if (stages.empty()) return false;
  for (size_t i = 1; i < stages.size(); ++i) {
    if (stage_rank(stages[i]) != stage_rank(stages[i - 1]) + 1) return false;
  }
  return true;
}

}  // namespace edaflow
