// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <string>
#include <vector>

namespace edaflow::cb {

enum class TokKind {
  command_word,    // first word of a command (line start, after ';' or '[')
  variable_ref,    // $name, ${name}, $arr(key)
  number,          // integer or decimal literal
  string_literal,  // quoted string (quotes kept) or bare word argument
  brace_group,     // balanced {...} block, braces kept
  operator_tok,    // -flags, [ ] > >> | and friends (';' carries no token)
};

const char* tok_kind_name(TokKind k);

struct TclToken {
  std::string text;
  TokKind kind = TokKind::string_literal;
  int line = 1;                // 1-based line of the token's first character
  bool starts_command = false; // true for the first token of each command
};

struct TclTokenStream {
  std::vector<TclToken> tokens;
  // Input with comments removed; token texts joined by the original
  // whitespace reconstruct exactly this string.
  std::string stripped;
  int diagnostics = 0;  // lenient-mode recoveries
};

// strict=true raises UnterminatedString / UnterminatedBrace (message carries
// the 1-based line); strict=false recovers at end of input and counts a
// diagnostic instead. Comments run from an unquoted, unbraced '#' to end of
// line. A backslash-newline continuation joins lines and never ends a command.
TclTokenStream tokenize_tcl(const std::string& script, bool strict = false);

// Command boundaries: each element is the token range [begin, end) of one
// command at nesting depth zero, in script order.
std::vector<std::pair<size_t, size_t>> command_ranges(const TclTokenStream& ts);

}  // namespace edaflow::cb
