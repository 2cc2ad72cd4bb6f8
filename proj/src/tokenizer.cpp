// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/codebleu/tokenizer.hpp"

#include <cctype>

#include "edaflow/error.hpp"

namespace edaflow::cb {
namespace {

bool is_word_terminator(char c) {
  switch (c) {
    case ' ': case '\t': case '\r': case '\n':
    case ';': case '[': case ']': case '"': case '{': case '#': case '$':
      return true;
    default:
      return false;
  }
}

bool is_number_word(const std::string& w) {
  size_t i = 0;
  if (i < w.size() && (w[i] == '+' || w[i] == '-')) ++i;
  size_t digits = 0, dots = 0;
  size_t mant_begin = i;
  while (i < w.size() && (std::isdigit(static_cast<unsigned char>(w[i])) || w[i] == '.')) {
    if (w[i] == '.')
      ++dots;
    else
      ++digits;
    ++i;
  }
  if (digits == 0 || dots > 1 || i == mant_begin) return false;
  if (i < w.size() && (w[i] == 'e' || w[i] == 'E')) {
    ++i;
    if (i < w.size() && (w[i] == '+' || w[i] == '-')) ++i;
    size_t exp_digits = 0;
    while (i < w.size() && std::isdigit(static_cast<unsigned char>(w[i]))) {
      ++i;
      ++exp_digits;
    }
    if (exp_digits == 0) return false;
  }
  return i == w.size();
}

bool is_punct_operator(const std::string& w) {
  return w == ">" || w == ">>" || w == "<" || w == "<<" || w == "|" || w == "|&" || w == "&";
}

bool is_flag_word(const std::string& w) {
  return w.size() >= 2 && w[0] == '-' &&
         (std::isalpha(static_cast<unsigned char>(w[1])) || w[1] == '_');
}

}  // namespace

const char* tok_kind_name(TokKind k) {
  switch (k) {
    case TokKind::command_word: return "command-word";
    case TokKind::variable_ref: return "variable-ref";
    case TokKind::number: return "number";
    case TokKind::string_literal: return "string-literal";
    case TokKind::brace_group: return "brace-group";
    case TokKind::operator_tok: return "operator";
  }
  return "unknown";
}

TclTokenStream tokenize_tcl(const std::string& s, bool strict) {
  TclTokenStream out;
  size_t pos = 0;
  int line = 1;
  bool expect_command = true;

  auto emit = [&](std::string text, TokKind kind, int tok_line, bool command_pos) {
    TclToken t;
    t.text = std::move(text);
    t.kind = kind;
    t.line = tok_line;
    t.starts_command = command_pos;
    out.stripped += t.text;
    out.tokens.push_back(std::move(t));
  };

  while (pos < s.size()) {
    char c = s[pos];

    if (c == '\\' && pos + 1 < s.size() && s[pos + 1] == '\n') {
      // Line continuation: whitespace, and the next line stays in-command.
      out.stripped += "\\\n";
      pos += 2;
      ++line;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      out.stripped += c;
      ++pos;
      continue;
    }
    if (c == '\n') {
      out.stripped += c;
      ++line;
      ++pos;
      expect_command = true;
      continue;
    }
    if (c == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;  // dropped from stripped
      continue;
    }
    if (c == ';') {
      // Command separator: kept in the reconstruction, carries no token.
      out.stripped += ';';
      ++pos;
      expect_command = true;
      continue;
    }
    if (c == '[') {
      emit("[", TokKind::operator_tok, line, false);
      ++pos;
      expect_command = true;
      continue;
    }
    if (c == ']') {
      emit("]", TokKind::operator_tok, line, false);
      ++pos;
      expect_command = false;
      continue;
    }
    if (c == '"') {
      int start_line = line;
      size_t i = pos + 1;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          if (s[i + 1] == '\n') ++line;
          i += 2;
          continue;
        }
        if (s[i] == '\n') ++line;
        if (s[i] == '"') {
          closed = true;
          ++i;
          break;
        }
        ++i;
      }
      if (!closed) {
        if (strict)
          raise(ErrCode::UnterminatedString,
                "string opened on line " + std::to_string(start_line) + " never closes");
        ++out.diagnostics;
      }
      emit(s.substr(pos, i - pos), TokKind::string_literal, start_line, expect_command);
      expect_command = false;
      pos = i;
      continue;
    }
    if (c == '{') {
      int start_line = line;
      size_t i = pos + 1;
      int depth = 1;
      while (i < s.size() && depth > 0) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          if (s[i + 1] == '\n') ++line;
          i += 2;
          continue;
        }
        if (s[i] == '\n') ++line;
        if (s[i] == '{') ++depth;
        if (s[i] == '}') --depth;
        ++i;
      }
      if (depth != 0) {
        if (strict)
          raise(ErrCode::UnterminatedBrace,
                "brace opened on line " + std::to_string(start_line) + " never closes");
        ++out.diagnostics;
      }
      emit(s.substr(pos, i - pos), TokKind::brace_group, start_line, expect_command);
      expect_command = false;
      pos = i;
      continue;
    }
    if (c == '$') {
      int start_line = line;
      size_t i = pos + 1;
      if (i < s.size() && s[i] == '{') {
        ++i;
        bool closed = false;
        while (i < s.size()) {
          if (s[i] == '\n') ++line;
          if (s[i] == '}') {
            closed = true;
            ++i;
            break;
          }
          ++i;
        }
        if (!closed) {
          if (strict)
            raise(ErrCode::UnterminatedBrace,
                  "variable brace on line " + std::to_string(start_line) + " never closes");
          ++out.diagnostics;
        }
        emit(s.substr(pos, i - pos), TokKind::variable_ref, start_line, expect_command);
        expect_command = false;
        pos = i;
        continue;
      }
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == ':'))
        ++i;
      if (i < s.size() && s[i] == '(') {
        ++i;
        bool closed = false;
        while (i < s.size()) {
          if (s[i] == '\n') ++line;
          if (s[i] == ')') {
            closed = true;
            ++i;
            break;
          }
          ++i;
        }
        if (!closed) ++out.diagnostics;
      }
      if (i == pos + 1) {
        // Lone '$': treat as a bare word character run below.
        size_t j = pos + 1;
        while (j < s.size() && !is_word_terminator(s[j])) ++j;
        emit(s.substr(pos, j - pos), TokKind::string_literal, start_line, expect_command);
        expect_command = false;
        pos = j;
        continue;
      }
      emit(s.substr(pos, i - pos), TokKind::variable_ref, start_line, expect_command);
      expect_command = false;
      pos = i;
      continue;
    }

    // Bare word.
    size_t i = pos;
    while (i < s.size() && !is_word_terminator(s[i])) {
      if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '\n') break;
      ++i;
    }
    std::string w = s.substr(pos, i - pos);
    TokKind kind;
    bool command_pos = expect_command;
    if (command_pos) {
      kind = TokKind::command_word;
    } else if (is_number_word(w)) {
      kind = TokKind::number;
    } else if (is_flag_word(w) || is_punct_operator(w)) {
      kind = TokKind::operator_tok;
    } else {
      kind = TokKind::string_literal;
    }
    emit(std::move(w), kind, line, command_pos);
    expect_command = false;
    pos = i;
  }

  return out;
}

std::vector<std::pair<size_t, size_t>> command_ranges(const TclTokenStream& ts) {
  std::vector<std::pair<size_t, size_t>> ranges;
  int depth = 0;
  long open = -1;
  for (size_t i = 0; i < ts.tokens.size(); ++i) {
    const TclToken& t = ts.tokens[i];
    if (t.kind == TokKind::operator_tok && t.text == "[") {
      ++depth;
      continue;
    }
    if (t.kind == TokKind::operator_tok && t.text == "]") {
      if (depth > 0) --depth;
      continue;
    }
    if (depth == 0 && t.starts_command) {
      if (open >= 0) ranges.emplace_back(open, i);
      open = static_cast<long>(i);
    }
  }
  if (open >= 0) ranges.emplace_back(open, ts.tokens.size());
  return ranges;
}

}  // namespace edaflow::cb
