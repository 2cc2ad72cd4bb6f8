// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edaflow {

// Canonical flow order: synthesis -> placement -> cts -> route.
enum class Stage { synthesis = 0, placement = 1, cts = 2, route = 3 };

inline constexpr std::array<Stage, 4> kStageOrder = {
    Stage::synthesis, Stage::placement, Stage::cts, Stage::route};

// Stable identifier used in JSON payloads, template metadata, and detection.
const char* stage_name(Stage s);

// Short tool name exposed by the agent and the RPC manifests.
const char* tool_name(Stage s);

// Accepts both the stage name and the tool name ("synth" == "synthesis").
std::optional<Stage> stage_from_name(std::string_view name);

inline int stage_rank(Stage s) { return static_cast<int>(s); }

// Stage that must have completed in the same workspace before `s` can run.
std::optional<Stage> upstream_of(Stage s);

// True when the list is non-empty, sorted by rank, duplicate-free, and
// contiguous in the canonical order (e.g. placement+cts, not synthesis+cts).
bool is_contiguous_combo(const std::vector<Stage>& stages);

}  // namespace edaflow
