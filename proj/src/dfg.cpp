// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/codebleu/dfg.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace edaflow::cb {
namespace {

// Strips $, ${...} or $name(...) decoration down to the variable name.
std::string ref_name(const std::string& ref_text) {
  std::string t = ref_text;
  if (!t.empty() && t[0] == '$') t.erase(0, 1);
  if (!t.empty() && t.front() == '{' && t.back() == '}') t = t.substr(1, t.size() - 2);
  return t;
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

// $refs interpolated inside a quoted string literal.
void refs_in_quoted(const std::string& text, std::vector<std::string>& out) {
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '\\') {
      ++i;
      continue;
    }
    if (text[i] != '$') continue;
    size_t j = i + 1;
    if (j < text.size() && text[j] == '{') {
      size_t k = text.find('}', j + 1);
      if (k == std::string::npos) break;
      out.push_back(text.substr(j + 1, k - j - 1));
      i = k;
      continue;
    }
    size_t k = j;
    while (k < text.size() && name_char(text[k])) ++k;
    if (k < text.size() && text[k] == '(') {
      size_t p = text.find(')', k + 1);
      if (p != std::string::npos) k = p + 1;
    }
    if (k > j) {
      out.push_back(text.substr(j, k - j));
      i = k - 1;
    }
  }
}

using Span = std::pair<size_t, size_t>;

std::vector<Span> split_commands(const std::vector<TclToken>& toks, size_t begin, size_t end) {
  std::vector<Span> out;
  int depth = 0;
  long open = -1;
  for (size_t i = begin; i < end; ++i) {
    const TclToken& t = toks[i];
    if (t.kind == TokKind::operator_tok && t.text == "[") {
      ++depth;
      continue;
    }
    if (t.kind == TokKind::operator_tok && t.text == "]") {
      if (depth > 0) --depth;
      continue;
    }
    if (depth == 0 && t.starts_command) {
      if (open >= 0) out.emplace_back(open, i);
      open = static_cast<long>(i);
    }
  }
  if (open >= 0) out.emplace_back(open, end);
  return out;
}

struct Walker {
  const EdaCommandDb& db;
  DataFlowGraph& graph;
  std::map<std::string, int> defs;  // flat namespace: name -> defining node

  void walk_script(const std::string& script) {
    TclTokenStream ts = tokenize_tcl(script, /*strict=*/false);
    graph.diagnostics += ts.diagnostics;
    for (const auto& [b, e] : split_commands(ts.tokens, 0, ts.tokens.size()))
      command(ts.tokens, b, e);
  }

  void command(const std::vector<TclToken>& toks, size_t begin, size_t end) {
    if (begin >= end) return;

    // Bracketed substitutions run first, so their nodes precede the
    // enclosing statement's node in index order.
    size_t i = begin + 1;
    int depth = 0;
    size_t inner_begin = 0;
    while (i < end) {
      const TclToken& t = toks[i];
      if (t.kind == TokKind::operator_tok && t.text == "[") {
        if (depth == 0) inner_begin = i + 1;
        ++depth;
      } else if (t.kind == TokKind::operator_tok && t.text == "]") {
        if (depth > 0 && --depth == 0) {
          for (const auto& [b, e] : split_commands(toks, inner_begin, i)) command(toks, b, e);
        }
      }
      ++i;
    }

    const TclToken& head = toks[begin];
    if (head.kind != TokKind::command_word) {
      ++graph.diagnostics;
      return;
    }
    const std::string& cmd = head.text;

    // Argument positions, bracket tokens included (value refs may hide there).
    std::vector<size_t> args;
    for (size_t k = begin + 1; k < end; ++k) {
      if (toks[k].kind == TokKind::operator_tok &&
          (toks[k].text == ";" || toks[k].text == "[" || toks[k].text == "]"))
        continue;
      args.push_back(k);
    }

    if (cmd == "set") {
      if (args.empty()) {
        ++graph.diagnostics;
        return;
      }
      if (args.size() == 1) return;  // plain read, no assignment
      std::string target = toks[args[0]].text;
      if (!target.empty() && target[0] == '$') target = ref_name(target);
      if (!target.empty() && target.front() == '{' && target.back() == '}')
        target = target.substr(1, target.size() - 2);

      std::vector<std::string> sources;
      for (size_t k = args[0] + 1; k < end; ++k) {
        const TclToken& t = toks[k];
        if (t.kind == TokKind::variable_ref) sources.push_back(ref_name(t.text));
        else if (t.kind == TokKind::string_literal && !t.text.empty() && t.text[0] == '"')
          refs_in_quoted(t.text, sources);
      }
      // Dedupe, first occurrence wins.
      std::vector<std::string> uniq;
      for (const auto& n : sources)
        if (std::find(uniq.begin(), uniq.end(), n) == uniq.end()) uniq.push_back(n);

      DfgNode node;
      node.target = target;
      node.index = static_cast<int>(graph.nodes.size());
      node.relation = "computedFrom";
      node.source_names = uniq;
      for (const auto& n : uniq)
        if (auto it = defs.find(n); it != defs.end()) node.source_indices.push_back(it->second);
      defs[target] = node.index;
      graph.nodes.push_back(std::move(node));
      return;
    }

    if (db.contains(cmd)) {
      DfgNode node;
      node.target = cmd;
      node.index = static_cast<int>(graph.nodes.size());
      node.relation = "comesFrom";
      graph.nodes.push_back(std::move(node));
      return;
    }

    auto descend = [&](size_t arg_pos) {
      if (arg_pos >= args.size()) return;
      const TclToken& t = toks[args[arg_pos]];
      if (t.kind != TokKind::brace_group || t.text.size() < 2) return;
      walk_script(t.text.substr(1, t.text.size() - 2));
    };

    if (cmd == "proc") {
      descend(2);  // proc name arglist body
    } else if (cmd == "while") {
      descend(1);  // condition is not a script
    } else if (cmd == "for") {
      descend(0);  // init
      descend(2);  // next
      descend(3);  // body
    } else if (cmd == "foreach") {
      if (!args.empty()) descend(args.size() - 1);  // loop vars are not nodes
    } else if (cmd == "if") {
      // if cond ?then? body (elseif cond ?then? body)* (?else? body)?
      size_t a = 0;
      auto skip_word = [&](const char* w) {
        if (a < args.size() && toks[args[a]].text == w) ++a;
      };
      ++a;  // condition
      skip_word("then");
      descend(a);
      ++a;
      while (a < args.size()) {
        if (toks[args[a]].text == "elseif") {
          a += 2;  // keyword + condition
          skip_word("then");
          descend(a);
          ++a;
        } else if (toks[args[a]].text == "else") {
          ++a;
          descend(a);
          ++a;
        } else {
          break;
        }
      }
    }
  }
};

}  // namespace

DataFlowGraph extract_dfg(const std::string& script, const EdaCommandDb& db) {
  DataFlowGraph g;
  Walker w{db, g, {}};
  w.walk_script(script);
  return g;
}

std::vector<std::string> edge_multiset(const DataFlowGraph& g) {
  std::vector<std::string> edges;
  edges.reserve(g.nodes.size());
  for (const auto& n : g.nodes) {
    std::vector<std::string> sorted_sources = n.source_names;
    std::sort(sorted_sources.begin(), sorted_sources.end());
    std::string key = n.target;
    key += '\x1f';
    key += n.relation;
    key += '\x1f';
    for (size_t i = 0; i < sorted_sources.size(); ++i) {
      if (i) key += ',';
      key += sorted_sources[i];
    }
    edges.push_back(std::move(key));
  }
  return edges;
}

}  // namespace edaflow::cb
