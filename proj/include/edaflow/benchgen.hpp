// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "edaflow/catalog.hpp"
#include "edaflow/model_client.hpp"
#include "edaflow/stage.hpp"

namespace edaflow::bench {

enum class Tone { direct, conversational, polite, brief };
inline constexpr Tone kTones[] = {Tone::direct, Tone::conversational, Tone::polite, Tone::brief};
const char* tone_name(Tone t);
std::optional<Tone> tone_from_name(const std::string& name);

struct BenchmarkCase {
  std::string case_id;
  std::string design;
  Tone tone = Tone::direct;
  std::vector<Stage> stages;
  // (catalog name, value) pairs: design, technology, then stage parameters in
  // catalog order. Numbers keep the exact spelling the prompt will carry.
  std::vector<std::pair<std::string, std::string>> params;
  std::string prompt;

  std::string tool() const;  // stage tool names joined with '+'
  nlohmann::ordered_json to_json() const;
  static BenchmarkCase from_json(const nlohmann::ordered_json& j);
};

// Largest-remainder apportionment of fractional shares over n seats.
std::vector<int> largest_remainder(const std::vector<double>& shares, int n);

// SplitMix64 step; the per-case seed stream derives from it so cases are
// independent of generation order.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t case_seed(std::uint64_t dataset_seed, std::size_t index);

struct GenOptions {
  int n = 100;
  std::uint64_t seed = 1;
  bool multi_stage = false;  // sample from the 10 stage combinations
};

// Samples ground-truth parameter records from the catalog and renders
// tone-varied prompts. The hermetic renderer is deterministic; a configured
// model client can rephrase instead (outputs then carry no guarantees).
class Generator {
 public:
  explicit Generator(const cat::ParamCatalog* catalog) : catalog_(catalog) {}

  // Ground truth only (prompt unset): mandatory design/technology plus stage
  // parameters, 6..10 total. Raises SchemaTooSmall.
  BenchmarkCase sample_ground_truth(std::uint64_t rng_seed, bool multi_stage,
                                    const std::string& design) const;

  // Deterministic verbalization; every value appears verbatim (numbers) or
  // via its canonical word (enums, enabled/disabled booleans).
  std::string render_prompt(const BenchmarkCase& c) const;

  // Model-based rephrasing with the pinned sampling settings.
  std::string render_prompt_model(const BenchmarkCase& c, model::ModelClient& client) const;

  std::vector<BenchmarkCase> generate(const GenOptions& opts) const;

 private:
  const cat::ParamCatalog* catalog_;
};

void write_jsonl(const std::filesystem::path& path, const std::vector<BenchmarkCase>& cases);
std::vector<BenchmarkCase> read_jsonl(const std::filesystem::path& path);

}  // namespace edaflow::bench
