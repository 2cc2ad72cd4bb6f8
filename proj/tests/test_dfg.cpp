// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edaflow/codebleu/command_db.hpp"
#include "edaflow/codebleu/dfg.hpp"

using edaflow::cb::DataFlowGraph;
using edaflow::cb::DfgNode;
using edaflow::cb::EdaCommandDb;
using edaflow::cb::edge_multiset;
using edaflow::cb::extract_dfg;

namespace {

const EdaCommandDb& db() {
  static EdaCommandDb d =
      EdaCommandDb::load(std::filesystem::path(EDAFLOW_REPO_DATA_DIR) / "eda_commands.json");
  return d;
}

DfgNode node(std::string target, int index, std::string relation,
             std::vector<std::string> sources = {}, std::vector<int> indices = {}) {
  DfgNode n;
  n.target = std::move(target);
  n.index = index;
  n.relation = std::move(relation);
  n.source_names = std::move(sources);
  n.source_indices = std::move(indices);
  return n;
}

}  // namespace

TEST_CASE("literal assignment yields a computedFrom node") {
  auto g = extract_dfg("set x 5", db());
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0] == node("x", 0, "computedFrom"));
}

TEST_CASE("assignment chain records source name and defining index") {
  auto g = extract_dfg("set x 5\nset y $x\n", db());
  REQUIRE(g.nodes.size() == 2);
  CHECK(g.nodes[0] == node("x", 0, "computedFrom"));
  CHECK(g.nodes[1] == node("y", 1, "computedFrom", {"x"}, {0}));
}

TEST_CASE("recognized command yields a comesFrom node") {
  auto g = extract_dfg("placeDesign", db());
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0] == node("placeDesign", 0, "comesFrom"));
}

TEST_CASE("hand-annotated corpus matches exactly") {
  auto path = std::filesystem::path(EDAFLOW_TEST_DATA_DIR) / "dfg_annotations.json";
  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json doc = nlohmann::json::parse(in);
  REQUIRE(doc.at("cases").size() >= 30);

  for (const auto& c : doc.at("cases")) {
    CAPTURE(c.at("name").get<std::string>());
    auto g = extract_dfg(c.at("script").get<std::string>(), db());
    const auto& want = c.at("nodes");
    REQUIRE(g.nodes.size() == want.size());
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      CAPTURE(i);
      const auto& w = want[i];
      CHECK(g.nodes[i].target == w.at("target").get<std::string>());
      CHECK(g.nodes[i].index == w.at("index").get<int>());
      CHECK(g.nodes[i].relation == w.at("relation").get<std::string>());
      CHECK(g.nodes[i].source_names == w.at("sources").get<std::vector<std::string>>());
      CHECK(g.nodes[i].source_indices == w.at("source_indices").get<std::vector<int>>());
    }
  }
}

TEST_CASE("node indices strictly increase and match vector position") {
  std::string script =
      "set a 1\n"
      "set b [get_ports clk]\n"
      "if {$a} {\n  set c $b\n}\n"
      "compile\n";
  auto g = extract_dfg(script, db());
  REQUIRE(g.nodes.size() >= 4);
  for (size_t i = 0; i < g.nodes.size(); ++i) CHECK(g.nodes[i].index == static_cast<int>(i));
}

TEST_CASE("extraction is stable across repeated runs") {
  std::string script = "set a 1\nset b \"$a\"\nfloorPlan -r 1.0 0.7\nplaceDesign\n";
  auto g1 = extract_dfg(script, db());
  auto g2 = extract_dfg(script, db());
  CHECK(g1.nodes == g2.nodes);
}

TEST_CASE("unknown plain commands yield no nodes") {
  auto g = extract_dfg("puts hello\nexpr 1 + 2\nincr k\n", db());
  CHECK(g.nodes.empty());
  CHECK(g.diagnostics == 0);
}

TEST_CASE("malformed constructs are skipped with diagnostics") {
  auto g = extract_dfg("set\n", db());
  CHECK(g.nodes.empty());
  CHECK(g.diagnostics == 1);

  auto h = extract_dfg("$x alone\n", db());
  CHECK(h.nodes.empty());
  CHECK(h.diagnostics == 1);
}

TEST_CASE("edge multiset is index-free with sorted sources") {
  auto g = extract_dfg("set q 1\nset p 2\nset r \"$p$q\"\n", db());
  auto edges = edge_multiset(g);
  REQUIRE(edges.size() == 3);
  std::string sep(1, '\x1f');
  CHECK(edges[0] == "q" + sep + "computedFrom" + sep);
  CHECK(edges[1] == "p" + sep + "computedFrom" + sep);
  // Sources sorted lexicographically in the key even though p occurred first.
  CHECK(edges[2] == "r" + sep + "computedFrom" + sep + "p,q");
}

TEST_CASE("edge multiset distinguishes relations") {
  auto g1 = extract_dfg("compile", db());
  auto g2 = extract_dfg("set compile 1", db());
  auto e1 = edge_multiset(g1);
  auto e2 = edge_multiset(g2);
  REQUIRE(e1.size() == 1);
  REQUIRE(e2.size() == 1);
  CHECK(e1[0] != e2[0]);
}
