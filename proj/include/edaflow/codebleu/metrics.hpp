// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <string>
#include <vector>

#include "edaflow/codebleu/command_db.hpp"
#include "edaflow/codebleu/tokenizer.hpp"

namespace edaflow::cb {

inline constexpr int kMaxNgramOrder = 4;
inline constexpr double kKeywordWeight = 4.0;

// Scores are on a 0..100 scale. `flags` collects edge-condition notes
// (empty inputs and the like) so callers can surface them in reports.

// Geometric mean of clipped n-gram precisions (orders 1..4) with a brevity
// penalty. Orders where neither side has any n-gram are skipped so very short
// identical scripts still self-match at 100.
double ngram_match(const std::vector<std::string>& ref_tokens,
                   const std::vector<std::string>& cand_tokens,
                   std::vector<std::string>* flags = nullptr);

// Same shape as ngram_match but each n-gram counts with the maximum token
// weight inside it: keyword tokens (EDA commands, set/proc/if/foreach/while)
// weigh kKeywordWeight, everything else 1.
double weighted_ngram_match(const std::vector<std::string>& ref_tokens,
                            const std::vector<std::string>& cand_tokens,
                            const EdaCommandDb& db, double keyword_weight = kKeywordWeight,
                            std::vector<std::string>* flags = nullptr);

// Line-level recall: matching normalized lines over reference lines.
double syntax_match(const std::string& reference, const std::string& candidate,
                    std::vector<std::string>* flags = nullptr);

// Recall over index-free dataflow edge multisets.
double dataflow_match(const std::string& reference, const std::string& candidate,
                      const EdaCommandDb& db, std::vector<std::string>* flags = nullptr);

// Token texts fed to the n-gram metrics (comments dropped by the tokenizer).
std::vector<std::string> metric_tokens(const std::string& script);

// Line normalization used by syntax_match: continuations joined, comments
// stripped, whitespace collapsed, empty lines dropped.
std::vector<std::string> normalized_lines(const std::string& script);

}  // namespace edaflow::cb
