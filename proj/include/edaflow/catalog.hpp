// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edaflow/stage.hpp"

namespace edaflow::cat {

enum class ParamKind { real_num, int_num, enum_str, boolean, str };

// Which part of a stage request the parameter travels in.
enum class RequestSlot { field, stage_params, cts_params, route_params, global_ctx };

struct ParamSpec {
  std::string name;        // agent-facing name ("fanout_limit")
  bool global = false;     // design / technology apply to every stage
  Stage stage = Stage::synthesis;
  ParamKind kind = ParamKind::real_num;
  double min = 0.0, max = 0.0;  // real/int range, inclusive
  int decimals = 2;             // sampling granularity for reals
  std::vector<std::string> options;  // enum choices (canonical spelling)
  std::string placeholder;           // template placeholder name
  RequestSlot slot = RequestSlot::field;
  std::string request_key;           // JSON field or params-map key
  std::string phrase;                // prompt phrase, "{v}" marks the value
  std::vector<std::string> patterns;  // extraction regexes, one capture each
  std::string alias;                  // value-less mention regex
  bool mandatory = false;             // always present in generated prompts

  bool numeric() const { return kind == ParamKind::real_num || kind == ParamKind::int_num; }
};

class ParamCatalog {
 public:
  static ParamCatalog load(const std::filesystem::path& json_path);

  const std::vector<ParamSpec>& all() const { return params_; }
  const ParamSpec* find(const std::string& name) const;
  // Lookup by request_key within one stage's params map.
  const ParamSpec* find_by_key(Stage stage, const std::string& key) const;
  std::vector<const ParamSpec*> stage_params(Stage s) const;
  std::vector<const ParamSpec*> globals() const;

  // Validates a value against the spec; returns the canonical text form or
  // an error description. Bools normalize to "true"/"false", enums to the
  // canonical option spelling, numbers to canonical_number form.
  struct Normalized {
    bool ok = false;
    std::string value;
    std::string error;
  };
  static Normalized normalize_value(const ParamSpec& spec, const std::string& raw);

 private:
  std::vector<ParamSpec> params_;
};

// True for "enabled"/"on"/"true"/"yes" (case-insensitive); false for their
// negatives; nullopt otherwise.
std::optional<bool> parse_bool_word(const std::string& w);

}  // namespace edaflow::cat
