// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "edaflow/codebleu/tokenizer.hpp"
#include "edaflow/error.hpp"

using edaflow::cb::TclTokenStream;
using edaflow::cb::TokKind;
using edaflow::cb::command_ranges;
using edaflow::cb::tokenize_tcl;

namespace {

std::vector<std::string> texts(const TclTokenStream& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts.tokens) out.push_back(t.text);
  return out;
}

std::vector<TokKind> kinds(const TclTokenStream& ts) {
  std::vector<TokKind> out;
  for (const auto& t : ts.tokens) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST_CASE("inline comment after semicolon is dropped") {
  auto ts = tokenize_tcl("set x 5 ;# note");
  CHECK(texts(ts) == std::vector<std::string>{"set", "x", "5"});
  CHECK(ts.tokens[0].kind == TokKind::command_word);
  CHECK(ts.tokens[2].kind == TokKind::number);
  for (const auto& t : ts.tokens) CHECK(t.text.find('#') == std::string::npos);
}

TEST_CASE("flag and variable reference kinds") {
  auto ts = tokenize_tcl("compile -map_effort $MAP_EFFORT");
  CHECK(texts(ts) == std::vector<std::string>{"compile", "-map_effort", "$MAP_EFFORT"});
  CHECK(kinds(ts) == std::vector<TokKind>{TokKind::command_word, TokKind::operator_tok,
                                          TokKind::variable_ref});
  CHECK(ts.tokens[0].starts_command);
  CHECK_FALSE(ts.tokens[1].starts_command);
}

TEST_CASE("comments-only script yields empty stream") {
  auto ts = tokenize_tcl("# a comment\n   # another\n\n#last");
  CHECK(ts.tokens.empty());
  CHECK(ts.diagnostics == 0);
}

TEST_CASE("blank lines carry no tokens") {
  auto ts = tokenize_tcl("\n\n   \n\t\n");
  CHECK(ts.tokens.empty());
}

TEST_CASE("hash inside quotes and braces is literal") {
  auto ts = tokenize_tcl("set msg \"issue #42\"\nset blk {keep # this}\n");
  REQUIRE(ts.tokens.size() == 6);
  CHECK(ts.tokens[2].text == "\"issue #42\"");
  CHECK(ts.tokens[2].kind == TokKind::string_literal);
  CHECK(ts.tokens[5].text == "{keep # this}");
  CHECK(ts.tokens[5].kind == TokKind::brace_group);
}

TEST_CASE("line continuation joins a command") {
  auto ts = tokenize_tcl("compile -map_effort high \\\n  -area_effort medium\n");
  CHECK(texts(ts) ==
        std::vector<std::string>{"compile", "-map_effort", "high", "-area_effort", "medium"});
  // One command only: the continuation never re-opens command position.
  auto ranges = command_ranges(ts);
  REQUIRE(ranges.size() == 1);
  CHECK(ranges[0].first == 0);
  CHECK(ranges[0].second == 5);
  // The continuation itself stays in the reconstruction.
  CHECK(ts.stripped.find("\\\n") != std::string::npos);
}

TEST_CASE("token line numbers are 1-based and track newlines") {
  auto ts = tokenize_tcl("set a 1\nset b 2\n\nset c 3\n");
  REQUIRE(ts.tokens.size() == 9);
  CHECK(ts.tokens[0].line == 1);
  CHECK(ts.tokens[3].line == 2);
  CHECK(ts.tokens[6].line == 4);
}

TEST_CASE("strict mode raises on unterminated string with line") {
  bool threw = false;
  try {
    tokenize_tcl("set a 1\nset msg \"oops\n", true);
  } catch (const edaflow::Error& e) {
    threw = true;
    CHECK(e.code() == edaflow::ErrCode::UnterminatedString);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("strict mode raises on unterminated brace with line") {
  bool threw = false;
  try {
    tokenize_tcl("proc f {} {\n  set x 1\n", true);
  } catch (const edaflow::Error& e) {
    threw = true;
    CHECK(e.code() == edaflow::ErrCode::UnterminatedBrace);
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("lenient mode recovers and counts diagnostics") {
  auto ts = tokenize_tcl("set msg \"oops\n");
  CHECK(ts.diagnostics == 1);
  REQUIRE(ts.tokens.size() == 3);
  CHECK(ts.tokens[2].kind == TokKind::string_literal);

  auto tb = tokenize_tcl("proc f {} {\nset x 1\n");
  CHECK(tb.diagnostics == 1);
}

TEST_CASE("stripped reconstructs the comment-free input") {
  std::string script =
      "set a 1  ;# trailing note\n"
      "# full-line comment\n"
      "compile -map_effort $MAP_EFFORT\n"
      "report_qor > reports/qor.rpt\n";
  auto ts = tokenize_tcl(script);
  CHECK(ts.stripped ==
        "set a 1  ;\n"
        "\n"
        "compile -map_effort $MAP_EFFORT\n"
        "report_qor > reports/qor.rpt\n");
  // Concatenating token texts in order recovers stripped minus separators.
  std::string joined;
  for (const auto& t : ts.tokens) joined += t.text;
  std::string squeezed;
  for (char c : ts.stripped)
    if (c != ' ' && c != '\t' && c != '\n' && c != ';' && c != '\\') squeezed += c;
  CHECK(joined == squeezed);
}

TEST_CASE("number recognition") {
  auto ts = tokenize_tcl("set p 2.0\nset q -3\nset r 1e-3\nset s 4.74\nset t v2\n");
  REQUIRE(ts.tokens.size() == 15);
  CHECK(ts.tokens[2].kind == TokKind::number);   // 2.0
  CHECK(ts.tokens[5].kind == TokKind::number);   // -3
  CHECK(ts.tokens[8].kind == TokKind::number);   // 1e-3
  CHECK(ts.tokens[11].kind == TokKind::number);  // 4.74
  CHECK(ts.tokens[14].kind == TokKind::string_literal);  // v2 is a word
}

TEST_CASE("redirection operators") {
  auto ts = tokenize_tcl("report_timing > reports/timing.rpt\nputs >> log.txt\n");
  CHECK(ts.tokens[1].kind == TokKind::operator_tok);
  CHECK(ts.tokens[1].text == ">");
  CHECK(ts.tokens[4].kind == TokKind::operator_tok);
  CHECK(ts.tokens[4].text == ">>");
}

TEST_CASE("variable reference forms") {
  auto ts = tokenize_tcl("puts $plain ${braced} $env(HOME)\n");
  CHECK(ts.tokens[1].text == "$plain");
  CHECK(ts.tokens[1].kind == TokKind::variable_ref);
  CHECK(ts.tokens[2].text == "${braced}");
  CHECK(ts.tokens[2].kind == TokKind::variable_ref);
  CHECK(ts.tokens[3].text == "$env(HOME)");
  CHECK(ts.tokens[3].kind == TokKind::variable_ref);
}

TEST_CASE("bracket substitution opens command position") {
  auto ts = tokenize_tcl("set ports [get_ports clk]\n");
  auto tx = texts(ts);
  CHECK(tx == std::vector<std::string>{"set", "ports", "[", "get_ports", "clk", "]"});
  CHECK(ts.tokens[3].kind == TokKind::command_word);
  CHECK(ts.tokens[3].starts_command);
  // Only the outer `set` opens a depth-zero command.
  auto ranges = command_ranges(ts);
  REQUIRE(ranges.size() == 1);
  CHECK(ranges[0] == std::pair<size_t, size_t>{0, 6});
}

TEST_CASE("command ranges split on newline and semicolon") {
  auto ts = tokenize_tcl("set a 1; set b 2\nset c 3\n");
  auto ranges = command_ranges(ts);
  REQUIRE(ranges.size() == 3);
  CHECK(ts.tokens[ranges[0].first].text == "set");
  CHECK(ranges[0].second - ranges[0].first == 3);
  CHECK(ranges[1].second - ranges[1].first == 3);
  CHECK(ranges[2].second - ranges[2].first == 3);
  CHECK(ts.tokens[ranges[2].first].line == 2);
}

TEST_CASE("brace group keeps inner newlines and nesting") {
  auto ts = tokenize_tcl("proc f {a b} {\n  set x {1 {2 3}}\n}\n");
  REQUIRE(ts.tokens.size() == 4);
  CHECK(ts.tokens[0].text == "proc");
  CHECK(ts.tokens[2].text == "{a b}");
  CHECK(ts.tokens[3].kind == TokKind::brace_group);
  CHECK(ts.tokens[3].text.front() == '{');
  CHECK(ts.tokens[3].text.back() == '}');
  CHECK(ts.tokens[3].text.find("{2 3}") != std::string::npos);
}

TEST_CASE("tok kind names are stable") {
  CHECK(std::string(edaflow::cb::tok_kind_name(TokKind::command_word)) == "command-word");
  CHECK(std::string(edaflow::cb::tok_kind_name(TokKind::variable_ref)) == "variable-ref");
  CHECK(std::string(edaflow::cb::tok_kind_name(TokKind::number)) == "number");
  CHECK(std::string(edaflow::cb::tok_kind_name(TokKind::string_literal)) == "string-literal");
  CHECK(std::string(edaflow::cb::tok_kind_name(TokKind::brace_group)) == "brace-group");
  CHECK(std::string(edaflow::cb::tok_kind_name(TokKind::operator_tok)) == "operator");
}

TEST_CASE("tokenization is deterministic") {
  std::string script = "set a 1\ncompile -map_effort high\nreport_qor > r.rpt\n";
  auto a = tokenize_tcl(script);
  auto b = tokenize_tcl(script);
  REQUIRE(a.tokens.size() == b.tokens.size());
  for (size_t i = 0; i < a.tokens.size(); ++i) {
    CHECK(a.tokens[i].text == b.tokens[i].text);
    CHECK(a.tokens[i].kind == b.tokens[i].kind);
    CHECK(a.tokens[i].line == b.tokens[i].line);
  }
  CHECK(a.stripped == b.stripped);
}
