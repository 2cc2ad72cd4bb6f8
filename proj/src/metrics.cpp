// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/codebleu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "edaflow/codebleu/dfg.hpp"
#include "edaflow/text.hpp"

namespace edaflow::cb {
namespace {

void add_flag(std::vector<std::string>* flags, const std::string& msg) {
  if (flags) flags->push_back(msg);
}

using Counts = std::map<std::vector<std::string>, long>;

Counts ngram_counts(const std::vector<std::string>& toks, int n) {
  Counts c;
  if (static_cast<int>(toks.size()) < n) return c;
  for (size_t i = 0; i + n <= toks.size(); ++i)
    ++c[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)];
  return c;
}

double brevity_penalty(size_t ref_len, size_t cand_len) {
  if (cand_len == 0) return 0.0;
  if (cand_len >= ref_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
}

// Shared core: weight_of(gram) returns this n-gram's weight (1.0 when the
// metric is unweighted).
template <typename WeightFn>
double bleu_core(const std::vector<std::string>& ref, const std::vector<std::string>& cand,
                 WeightFn&& weight_of, std::vector<std::string>* flags, const char* label) {
  if (ref.empty() && cand.empty()) {
    add_flag(flags, std::string(label) + ": both scripts have no tokens, treating as identical");
    return 100.0;
  }
  if (ref.empty() || cand.empty()) {
    add_flag(flags, std::string(label) + ": one side has no tokens");
    return 0.0;
  }

  double log_sum = 0.0;
  int considered = 0;
  for (int n = 1; n <= kMaxNgramOrder; ++n) {
    Counts rc = ngram_counts(ref, n);
    Counts cc = ngram_counts(cand, n);
    if (rc.empty() && cc.empty()) continue;  // both too short for this order
    ++considered;
    if (cc.empty()) return 0.0;
    double num = 0.0, den = 0.0;
    for (const auto& [gram, count] : cc) {
      double w = weight_of(gram);
      den += w * static_cast<double>(count);
      auto it = rc.find(gram);
      long clipped = it == rc.end() ? 0 : std::min(count, it->second);
      num += w * static_cast<double>(clipped);
    }
    if (num <= 0.0) return 0.0;
    log_sum += std::log(num / den);
  }
  if (considered == 0) {
    add_flag(flags, std::string(label) + ": no n-grams on either side");
    return 100.0;
  }
  double geo = std::exp(log_sum / considered);
  return 100.0 * brevity_penalty(ref.size(), cand.size()) * geo;
}

}  // namespace

std::vector<std::string> metric_tokens(const std::string& script) {
  TclTokenStream ts = tokenize_tcl(script, /*strict=*/false);
  std::vector<std::string> out;
  out.reserve(ts.tokens.size());
  for (const auto& t : ts.tokens) out.push_back(t.text);
  return out;
}

double ngram_match(const std::vector<std::string>& ref, const std::vector<std::string>& cand,
                   std::vector<std::string>* flags) {
  return bleu_core(
      ref, cand, [](const std::vector<std::string>&) { return 1.0; }, flags, "ngram_match");
}

double weighted_ngram_match(const std::vector<std::string>& ref,
                            const std::vector<std::string>& cand, const EdaCommandDb& db,
                            double keyword_weight, std::vector<std::string>* flags) {
  auto weight_of = [&](const std::vector<std::string>& gram) {
    double w = 1.0;
    for (const auto& tok : gram)
      if (db.is_keyword(tok)) w = std::max(w, keyword_weight);
    return w;
  };
  return bleu_core(ref, cand, weight_of, flags, "weighted_ngram_match");
}

std::vector<std::string> normalized_lines(const std::string& script) {
  // Continuations become plain spaces so a wrapped command is one line.
  std::string joined;
  joined.reserve(script.size());
  for (size_t i = 0; i < script.size(); ++i) {
    if (script[i] == '\\' && i + 1 < script.size() && script[i + 1] == '\n') {
      joined += ' ';
      ++i;
      continue;
    }
    joined += script[i];
  }

  std::vector<std::string> out;
  for (const auto& raw : text::split_lines(joined)) {
    // Per-line lexical comment strip: a '#' outside quotes and braces.
    std::string kept;
    bool in_quote = false;
    int brace_depth = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (c == '\\' && i + 1 < raw.size()) {
        kept += c;
        kept += raw[i + 1];
        ++i;
        continue;
      }
      if (c == '"') in_quote = !in_quote;
      if (!in_quote) {
        if (c == '{') ++brace_depth;
        if (c == '}' && brace_depth > 0) --brace_depth;
        if (c == '#' && brace_depth == 0) break;
      }
      kept += c;
    }
    // Collapse whitespace runs and trim.
    std::string norm;
    bool pending_space = false;
    for (char c : kept) {
      if (c == ' ' || c == '\t') {
        pending_space = !norm.empty();
        continue;
      }
      if (pending_space) norm += ' ';
      pending_space = false;
      norm += c;
    }
    // A trailing command separator is a no-op (common before inline comments).
    while (!norm.empty() && (norm.back() == ';' || norm.back() == ' ')) norm.pop_back();
    if (!norm.empty()) out.push_back(std::move(norm));
  }
  return out;
}

double syntax_match(const std::string& reference, const std::string& candidate,
                    std::vector<std::string>* flags) {
  std::vector<std::string> ref_lines = normalized_lines(reference);
  std::vector<std::string> cand_lines = normalized_lines(candidate);
  if (ref_lines.empty() && cand_lines.empty()) {
    add_flag(flags, "syntax_match: both scripts have no effective lines, treating as identical");
    return 100.0;
  }
  if (ref_lines.empty()) {
    add_flag(flags, "syntax_match: reference has no effective lines");
    return 0.0;
  }
  std::map<std::string, long> ref_counts, cand_counts;
  for (const auto& l : ref_lines) ++ref_counts[l];
  for (const auto& l : cand_lines) ++cand_counts[l];
  long matched = 0;
  for (const auto& [l, rc] : ref_counts) {
    auto it = cand_counts.find(l);
    if (it != cand_counts.end()) matched += std::min(rc, it->second);
  }
  return 100.0 * static_cast<double>(matched) / static_cast<double>(ref_lines.size());
}

double dataflow_match(const std::string& reference, const std::string& candidate,
                      const EdaCommandDb& db, std::vector<std::string>* flags) {
  std::vector<std::string> ref_edges = edge_multiset(extract_dfg(reference, db));
  std::vector<std::string> cand_edges = edge_multiset(extract_dfg(candidate, db));
  if (ref_edges.empty() && cand_edges.empty()) {
    add_flag(flags, "dataflow_match: neither script yields dataflow edges, treating as identical");
    return 100.0;
  }
  if (ref_edges.empty()) {
    add_flag(flags, "dataflow_match: reference yields no dataflow edges");
    return 0.0;
  }
  std::map<std::string, long> ref_counts, cand_counts;
  for (const auto& e : ref_edges) ++ref_counts[e];
  for (const auto& e : cand_edges) ++cand_counts[e];
  long matched = 0;
  for (const auto& [e, rc] : ref_counts) {
    auto it = cand_counts.find(e);
    if (it != cand_counts.end()) matched += std::min(rc, it->second);
  }
  return 100.0 * static_cast<double>(matched) / static_cast<double>(ref_edges.size());
}

}  // namespace edaflow::cb
