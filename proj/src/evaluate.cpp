// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/codebleu/evaluate.hpp"

#include "edaflow/codebleu/metrics.hpp"
#include "edaflow/codebleu/tokenizer.hpp"

namespace edaflow::cb {

const ComponentWeights& stage_weights(Stage s) {
  static const ComponentWeights kSynthesis{0.20, 0.30, 0.25, 0.25};
  static const ComponentWeights kPlacement{0.15, 0.25, 0.30, 0.30};
  static const ComponentWeights kCts{0.20, 0.25, 0.30, 0.25};
  static const ComponentWeights kRoute{0.20, 0.25, 0.25, 0.30};
  switch (s) {
    case Stage::synthesis: return kSynthesis;
    case Stage::placement: return kPlacement;
    case Stage::cts: return kCts;
    case Stage::route: return kRoute;
  }
  return kSynthesis;
}

StageGuess detect_stage(const std::string& script, const EdaCommandDb& db) {
  TclTokenStream ts = tokenize_tcl(script, /*strict=*/false);
  std::array<long, 4> hits{0, 0, 0, 0};
  long total = 0;
  for (const auto& t : ts.tokens) {
    if (t.kind != TokKind::command_word) continue;
    auto cat = db.category(t.text);
    if (!cat) continue;
    ++hits[static_cast<size_t>(*cat)];
    ++total;
  }
  StageGuess guess;
  if (total == 0) return guess;  // fallback, confidence 0
  size_t best = 0;
  for (size_t i = 1; i < hits.size(); ++i)
    if (hits[i] > hits[best]) best = i;  // ties keep the earlier stage
  double share = static_cast<double>(hits[best]) / static_cast<double>(total);
  if (share < kDetectThreshold) return guess;
  guess.stage = static_cast<Stage>(best);
  guess.confidence = share;
  return guess;
}

nlohmann::ordered_json CodeBleuReport::to_json() const {
  nlohmann::ordered_json j;
  j["stage"] = stage_name(stage);
  j["stage_confidence"] = stage_confidence;
  j["stage_source"] = stage_source;
  j["components"] = {
      {"ngram_match", ngram},
      {"weighted_ngram_match", weighted},
      {"syntax_match", syntax},
      {"dataflow_match", dataflow},
  };
  j["weights"] = {
      {"ngram_match", weights.ngram},
      {"weighted_ngram_match", weights.weighted},
      {"syntax_match", weights.syntax},
      {"dataflow_match", weights.dataflow},
  };
  j["total"] = total;
  j["flags"] = flags;
  return j;
}

CodeBleuReport evaluate(const std::string& reference, const std::string& candidate,
                        const EdaCommandDb& db, std::optional<Stage> stage) {
  CodeBleuReport report;
  if (stage) {
    report.stage = *stage;
    report.stage_confidence = 1.0;
    report.stage_source = "given";
  } else {
    StageGuess guess = detect_stage(reference, db);
    report.stage = guess.stage;
    report.stage_confidence = guess.confidence;
    report.stage_source = "detected";
  }

  std::vector<std::string> ref_toks = metric_tokens(reference);
  std::vector<std::string> cand_toks = metric_tokens(candidate);
  report.ngram = ngram_match(ref_toks, cand_toks, &report.flags);
  report.weighted = weighted_ngram_match(ref_toks, cand_toks, db, kKeywordWeight, &report.flags);
  report.syntax = syntax_match(reference, candidate, &report.flags);
  report.dataflow = dataflow_match(reference, candidate, db, &report.flags);

  report.weights = stage_weights(report.stage);
  report.total = report.weights.ngram * report.ngram + report.weights.weighted * report.weighted +
                 report.weights.syntax * report.syntax +
                 report.weights.dataflow * report.dataflow;
  // The weights sum to 1, so total already sits on the 0..100 scale.
  report.total /= report.weights.sum();
  return report;
}

}  // namespace edaflow::cb
