// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "edaflow/codebleu/command_db.hpp"
#include "edaflow/error.hpp"

using edaflow::Stage;
using edaflow::cb::EdaCommandDb;

namespace {

std::filesystem::path repo_db_path() {
  return std::filesystem::path(EDAFLOW_REPO_DATA_DIR) / "eda_commands.json";
}

}  // namespace

TEST_CASE("shipped database loads and covers all four stages") {
  auto db = EdaCommandDb::load(repo_db_path());
  CHECK(db.size() >= 100);
  CHECK(db.category_count(Stage::synthesis) > 0);
  CHECK(db.category_count(Stage::placement) > 0);
  CHECK(db.category_count(Stage::cts) > 0);
  CHECK(db.category_count(Stage::route) > 0);
  CHECK(db.category_count(Stage::synthesis) + db.category_count(Stage::placement) +
            db.category_count(Stage::cts) + db.category_count(Stage::route) ==
        db.size());
}

TEST_CASE("well-known flow commands are present with the right category") {
  auto db = EdaCommandDb::load(repo_db_path());

  const std::vector<std::string> synth = {"analyze", "elaborate", "compile"};
  for (const auto& c : synth) {
    CHECK(db.contains(c));
    CHECK(db.category(c) == Stage::synthesis);
  }

  const std::vector<std::string> place = {"floorPlan", "editPin", "placeDesign"};
  for (const auto& c : place) {
    CHECK(db.contains(c));
    CHECK(db.category(c) == Stage::placement);
  }

  const std::vector<std::string> cts = {"ccopt_design", "create_clock_tree_spec"};
  for (const auto& c : cts) {
    CHECK(db.contains(c));
    CHECK(db.category(c) == Stage::cts);
  }

  const std::vector<std::string> route = {"routeDesign", "checkRoute", "saveDesign"};
  for (const auto& c : route) {
    CHECK(db.contains(c));
    CHECK(db.category(c) == Stage::route);
  }
}

TEST_CASE("unknown command has no category") {
  auto db = EdaCommandDb::load(repo_db_path());
  CHECK_FALSE(db.contains("frobnicate"));
  CHECK(db.category("frobnicate") == std::nullopt);
}

TEST_CASE("keyword set is db commands plus core scripting words") {
  auto db = EdaCommandDb::load(repo_db_path());
  for (const char* w : {"set", "proc", "if", "foreach", "while"}) {
    CHECK(db.is_keyword(w));
    CHECK_FALSE(db.contains(w));  // core words are not EDA commands
  }
  CHECK(db.is_keyword("compile"));
  CHECK(db.is_keyword("routeDesign"));
  CHECK_FALSE(db.is_keyword("banana"));
  CHECK_FALSE(db.is_keyword("puts"));
  CHECK_FALSE(db.is_keyword("expr"));
}

TEST_CASE("lookups are exact-case") {
  auto db = EdaCommandDb::load(repo_db_path());
  CHECK(db.contains("floorPlan"));
  CHECK_FALSE(db.contains("floorplan"));
  CHECK_FALSE(db.contains("FLOORPLAN"));
}

TEST_CASE("missing file raises") {
  CHECK_THROWS_AS(EdaCommandDb::load("/nonexistent/eda_commands.json"), edaflow::Error);
}
