// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edaflow/codebleu/command_db.hpp"
#include "edaflow/stage.hpp"

namespace edaflow::cb {

struct ComponentWeights {
  double ngram = 0.0;
  double weighted = 0.0;
  double syntax = 0.0;
  double dataflow = 0.0;

  double sum() const { return ngram + weighted + syntax + dataflow; }
};

// Per-stage weight vectors. Each sums to 1 within 1e-12 (checked in tests).
const ComponentWeights& stage_weights(Stage s);

// Minimum share of category hits the winning stage needs.
inline constexpr double kDetectThreshold = 0.4;
inline constexpr Stage kFallbackStage = Stage::synthesis;

struct StageGuess {
  Stage stage = kFallbackStage;
  double confidence = 0.0;  // winning hits / total hits, 0 when falling back
};

// Counts command-word hits per stage category; returns the winner when its
// share clears kDetectThreshold, otherwise the fallback with confidence 0.
// Ties break toward the earlier stage in flow order.
StageGuess detect_stage(const std::string& script, const EdaCommandDb& db);

struct CodeBleuReport {
  Stage stage = kFallbackStage;
  double stage_confidence = 0.0;
  std::string stage_source;  // "given" or "detected"
  double ngram = 0.0;
  double weighted = 0.0;
  double syntax = 0.0;
  double dataflow = 0.0;
  ComponentWeights weights;
  double total = 0.0;
  std::vector<std::string> flags;

  nlohmann::ordered_json to_json() const;
};

// Runs all four components on (reference, candidate) and combines them with
// the stage's weights. When no stage is given it is detected from the
// reference script.
CodeBleuReport evaluate(const std::string& reference, const std::string& candidate,
                        const EdaCommandDb& db, std::optional<Stage> stage = std::nullopt);

}  // namespace edaflow::cb
