// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/codebleu/command_db.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "edaflow/error.hpp"

namespace edaflow::cb {

using nlohmann::json;

EdaCommandDb EdaCommandDb::load(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) raise(ErrCode::IoError, "cannot open command db: " + json_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    raise(ErrCode::ConfigInvalid, "command db parse error: " + std::string(e.what()));
  }
  EdaCommandDb db;
  for (const auto& c : doc.at("commands")) {
    std::string name = c.at("name").get<std::string>();
    auto st = stage_from_name(c.at("category").get<std::string>());
    if (!st) raise(ErrCode::ConfigInvalid, "bad category for command " + name);
    if (!db.by_name_.emplace(name, *st).second)
      raise(ErrCode::ConfigInvalid, "duplicate command: " + name);
  }
  if (db.by_name_.empty()) raise(ErrCode::ConfigInvalid, "command db is empty");
  return db;
}

bool EdaCommandDb::contains(const std::string& command) const {
  return by_name_.count(command) > 0;
}

std::optional<Stage> EdaCommandDb::category(const std::string& command) const {
  auto it = by_name_.find(command);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

size_t EdaCommandDb::category_count(Stage s) const {
  size_t n = 0;
  for (const auto& [name, st] : by_name_) {
    (void)name;
    if (st == s) ++n;
  }
  return n;
}

bool EdaCommandDb::is_keyword(const std::string& token) const {
  if (contains(token)) return true;
  return token == "set" || token == "proc" || token == "if" || token == "foreach" ||
         token == "while";
}

}  // namespace edaflow::cb
