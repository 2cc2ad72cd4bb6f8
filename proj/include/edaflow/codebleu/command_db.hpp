// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "edaflow/stage.hpp"

namespace edaflow::cb {

// Known EDA tool commands, each tagged with the flow stage it belongs to.
// Drives stage detection and the keyword set of the weighted n-gram metric.
class EdaCommandDb {
 public:
  static EdaCommandDb load(const std::filesystem::path& json_path);

  bool contains(const std::string& command) const;
  std::optional<Stage> category(const std::string& command) const;
  size_t size() const { return by_name_.size(); }
  size_t category_count(Stage s) const;

  // Keyword test for weighted n-gram matching: any db command plus the core
  // scripting words set/proc/if/foreach/while.
  bool is_keyword(const std::string& token) const;

 private:
  std::map<std::string, Stage> by_name_;
};

}  // namespace edaflow::cb
