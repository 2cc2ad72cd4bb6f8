// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edaflow/stage.hpp"

namespace edaflow::tpl {

// Placeholders look like ${UPPER_SNAKE}. The exact sequence `\${` escapes one
// and renders to a literal `${`. Values may themselves contain placeholders;
// expansion runs to a fixpoint bounded by kMaxExpansionDepth passes.
inline constexpr int kMaxExpansionDepth = 8;

// Comment line replaced by the environment-export block during rendering.
inline constexpr const char* kEnvExportMarker = "# @ENV_EXPORTS";

struct PlaceholderHit {
  std::string name;
  size_t begin = 0;  // offset of '$'
  size_t end = 0;    // offset one past '}'
};

// Unescaped placeholder occurrences, in text order.
std::vector<PlaceholderHit> find_placeholders(const std::string& body);

// Distinct placeholder names (escaped occurrences excluded).
std::set<std::string> list_placeholders(const std::string& body);

struct TclTemplate {
  Stage stage = Stage::synthesis;
  std::string body;
  std::set<std::string> required;
  std::map<std::string, std::string> optional_defaults;

  // Parses the metadata header (#@ stage/required/optional lines) and checks
  // that body placeholders are declared exactly once. Raises TemplateInvalid.
  static TclTemplate parse(const std::string& file_text);
  static TclTemplate load(const std::filesystem::path& path);
};

struct ParamBinding {
  // Placeholder name -> replacement text. Only caller-supplied entries; the
  // template's optional defaults fill the rest.
  std::map<std::string, std::string> values;
  // Emitted as `set env(NAME) "VALUE"` lines at the marker, in given order.
  std::vector<std::pair<std::string, std::string>> env_exports;
};

enum class Origin { user_supplied, defaulted };

struct RenderedScript {
  Stage stage = Stage::synthesis;
  std::string text;
  // One entry per distinct placeholder that appeared in the template body.
  std::map<std::string, Origin> provenance;
};

// Pure function: same template and binding always yield the same script.
// Raises MissingRequiredPlaceholder, UnresolvedPlaceholder, DepthExceeded.
RenderedScript render(const TclTemplate& tmpl, const ParamBinding& binding);

// Loads <stage>.tcl for all four stages from a templates directory.
class TemplateStore {
 public:
  static TemplateStore load_dir(const std::filesystem::path& dir);
  const TclTemplate& get(Stage s) const;

 private:
  std::map<Stage, TclTemplate> templates_;
};

}  // namespace edaflow::tpl
