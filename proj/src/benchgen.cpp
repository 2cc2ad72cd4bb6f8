// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/benchgen.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "edaflow/error.hpp"
#include "edaflow/text.hpp"

namespace edaflow::bench {
namespace {

using cat::ParamKind;
using cat::ParamSpec;

// The ten contiguous runs of the four-stage flow.
const std::vector<std::vector<Stage>> kCombos = {
    {Stage::synthesis},
    {Stage::placement},
    {Stage::cts},
    {Stage::route},
    {Stage::synthesis, Stage::placement},
    {Stage::placement, Stage::cts},
    {Stage::cts, Stage::route},
    {Stage::synthesis, Stage::placement, Stage::cts},
    {Stage::placement, Stage::cts, Stage::route},
    {Stage::synthesis, Stage::placement, Stage::cts, Stage::route},
};

// Prompt wording per stage; "clock tree synthesis" keeps the cts verb
// unambiguous for extraction.
std::string stage_word(Stage s) {
  switch (s) {
    case Stage::synthesis: return "synthesis";
    case Stage::placement: return "placement";
    case Stage::cts: return "clock tree synthesis";
    case Stage::route: return "routing";
  }
  return "synthesis";
}

std::string format_real(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string substitute(const std::string& phrase, const std::string& value) {
  auto pos = phrase.find("{v}");
  if (pos == std::string::npos) return phrase;
  return phrase.substr(0, pos) + value + phrase.substr(pos + 3);
}

}  // namespace

const char* tone_name(Tone t) {
  switch (t) {
    case Tone::direct: return "direct";
    case Tone::conversational: return "conversational";
    case Tone::polite: return "polite";
    case Tone::brief: return "brief";
  }
  return "direct";
}

std::optional<Tone> tone_from_name(const std::string& name) {
  for (Tone t : kTones)
    if (name == tone_name(t)) return t;
  return std::nullopt;
}

std::string BenchmarkCase::tool() const {
  std::string out;
  for (Stage s : stages) {
    if (!out.empty()) out += '+';
    out += tool_name(s);
  }
  return out;
}

nlohmann::ordered_json BenchmarkCase::to_json() const {
  nlohmann::ordered_json truth;
  truth["tool"] = tool();
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  truth["params"] = std::move(p);

  nlohmann::ordered_json j;
  j["case_id"] = case_id;
  j["design"] = design;
  j["tone"] = tone_name(tone);
  j["ground_truth"] = std::move(truth);
  j["prompt"] = prompt;
  return j;
}

BenchmarkCase BenchmarkCase::from_json(const nlohmann::ordered_json& j) {
  BenchmarkCase c;
  c.case_id = j.at("case_id").get<std::string>();
  c.design = j.at("design").get<std::string>();
  auto t = tone_from_name(j.at("tone").get<std::string>());
  if (!t) raise(ErrCode::InvalidRequest, "unknown tone in benchmark case " + c.case_id);
  c.tone = *t;
  const auto& truth = j.at("ground_truth");
  for (const auto& part : text::split(truth.at("tool").get<std::string>(), '+')) {
    auto s = stage_from_name(part);
    if (!s) raise(ErrCode::InvalidRequest, "unknown tool in benchmark case: " + part);
    c.stages.push_back(*s);
  }
  for (const auto& [k, v] : truth.at("params").items())
    c.params.emplace_back(k, v.get<std::string>());
  c.prompt = j.at("prompt").get<std::string>();
  return c;
}

std::vector<int> largest_remainder(const std::vector<double>& shares, int n) {
  std::vector<int> counts(shares.size(), 0);
  std::vector<std::pair<double, std::size_t>> rema;
  int assigned = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    double exact = shares[i] * n;
    counts[i] = static_cast<int>(exact);
    assigned += counts[i];
    rema.emplace_back(exact - counts[i], i);
  }
  // Largest remainder first; equal remainders resolve by position.
  std::stable_sort(rema.begin(), rema.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; k < n - assigned && k < static_cast<int>(rema.size()); ++k)
    counts[rema[static_cast<std::size_t>(k)].second] += 1;
  return counts;
}

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t case_seed(std::uint64_t dataset_seed, std::size_t index) {
  return splitmix64(dataset_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

BenchmarkCase Generator::sample_ground_truth(std::uint64_t rng_seed, bool multi_stage,
                                             const std::string& design) const {
  std::mt19937_64 rng(rng_seed);
  BenchmarkCase c;
  c.design = design;

  if (multi_stage) {
    std::uniform_int_distribution<std::size_t> pick(0, kCombos.size() - 1);
    c.stages = kCombos[pick(rng)];
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    c.stages = {kStageOrder[pick(rng)]};
  }

  {
    std::uniform_int_distribution<int> pick(0, 3);
    c.tone = kTones[static_cast<std::size_t>(pick(rng))];
  }

  const ParamSpec* tech = catalog_->find("technology");
  if (!tech || tech->options.empty())
    raise(ErrCode::SchemaTooSmall, "catalog has no technology options");
  std::string tech_value;
  {
    std::uniform_int_distribution<std::size_t> pick(0, tech->options.size() - 1);
    tech_value = tech->options[pick(rng)];
  }

  // Candidate pool: samplable parameters of the chosen stages, flow order.
  std::vector<const ParamSpec*> pool;
  for (Stage s : c.stages)
    for (const ParamSpec* spec : catalog_->stage_params(s))
      if (spec->kind != ParamKind::str && spec->phrase.find("{v}") != std::string::npos)
        pool.push_back(spec);

  if (pool.size() + 2 < 6)
    raise(ErrCode::SchemaTooSmall,
          "stage schema offers only " + std::to_string(pool.size()) +
              " parameters; cannot reach 6 per prompt");

  std::size_t target;
  {
    std::uniform_int_distribution<std::size_t> pick(6, 10);
    target = std::min(pick(rng), pool.size() + 2);
  }

  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(target - 2);
  std::sort(idx.begin(), idx.end());  // restore flow/catalog order

  c.params.emplace_back("design", design);
  c.params.emplace_back("technology", tech_value);
  for (std::size_t i : idx) {
    const ParamSpec& spec = *pool[i];
    std::string value;
    switch (spec.kind) {
      case ParamKind::real_num: {
        std::uniform_real_distribution<double> pick(spec.min, spec.max);
        value = format_real(pick(rng), spec.decimals);
        break;
      }
      case ParamKind::int_num: {
        std::uniform_int_distribution<long long> pick(static_cast<long long>(spec.min),
                                                      static_cast<long long>(spec.max));
        value = std::to_string(pick(rng));
        break;
      }
      case ParamKind::enum_str: {
        std::uniform_int_distribution<std::size_t> pick(0, spec.options.size() - 1);
        value = spec.options[pick(rng)];
        break;
      }
      case ParamKind::boolean: {
        std::uniform_int_distribution<int> pick(0, 1);
        value = pick(rng) ? "true" : "false";
        break;
      }
      case ParamKind::str:
        break;  // filtered out above
    }
    c.params.emplace_back(spec.name, value);
  }
  return c;
}

std::string Generator::render_prompt(const BenchmarkCase& c) const {
  std::string stages;
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    if (i) stages += " then ";
    stages += stage_word(c.stages[i]);
  }

  std::string technology;
  std::string phrases;
  for (const auto& [name, value] : c.params) {
    if (name == "design") continue;
    if (name == "technology") {
      technology = value;
      continue;
    }
    const ParamSpec* spec = catalog_->find(name);
    if (!spec) raise(ErrCode::InvalidRequest, "benchmark case names unknown parameter " + name);
    std::string spoken = value;
    if (spec->kind == ParamKind::boolean) spoken = (value == "true") ? "enabled" : "disabled";
    if (!phrases.empty()) phrases += ", ";
    phrases += substitute(spec->phrase, spoken);
  }

  std::ostringstream out;
  switch (c.tone) {
    case Tone::direct:
      out << "Run " << stages << " for design \"" << c.design << "\" on " << technology
          << ". Use " << phrases << ".";
      break;
    case Tone::conversational:
      out << "Hey, I'm working on design \"" << c.design << "\" targeting " << technology
          << ". Could you kick off " << stages << " with " << phrases << "? Thanks!";
      break;
    case Tone::polite:
      out << "Please run " << stages << " on design \"" << c.design << "\" using " << technology
          << ". We would like " << phrases << ".";
      break;
    case Tone::brief:
      out << stages << ": design \"" << c.design << "\", " << technology << ", " << phrases
          << ".";
      break;
  }
  return out.str();
}

std::string Generator::render_prompt_model(const BenchmarkCase& c,
                                           model::ModelClient& client) const {
  std::string system =
      "You turn chip-design job records into realistic one-paragraph user requests. "
      "Keep the design name in double quotes, keep the technology name, and copy every "
      "parameter value exactly as written, next to wording that identifies the parameter. "
      "Reply with the request text only.";
  nlohmann::ordered_json record;
  record["tone"] = tone_name(c.tone);
  record["stages"] = nlohmann::ordered_json::array();
  for (Stage s : c.stages) record["stages"].push_back(stage_word(s));
  record["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.params) record["params"][k] = v;
  return client.complete(system, record.dump(2));
}

std::vector<BenchmarkCase> Generator::generate(const GenOptions& opts) const {
  if (opts.n <= 0) raise(ErrCode::InvalidRequest, "benchmark size must be positive");
  const ParamSpec* design = catalog_->find("design");
  if (!design || design->options.empty())
    raise(ErrCode::SchemaTooSmall, "catalog has no design options");
  const auto& designs = design->options;

  std::vector<double> shares;
  if (designs.size() == 3) {
    shares = {0.33, 0.33, 0.34};
  } else {
    shares.assign(designs.size(), 1.0 / static_cast<double>(designs.size()));
  }
  std::vector<int> quota = largest_remainder(shares, opts.n);

  std::vector<BenchmarkCase> cases;
  cases.reserve(static_cast<std::size_t>(opts.n));
  std::vector<int> remaining = quota;
  for (int i = 0; i < opts.n; ++i) {
    // Round-robin by largest remaining quota keeps the mix even mid-stream.
    std::size_t pick = 0;
    for (std::size_t j = 1; j < remaining.size(); ++j)
      if (remaining[j] > remaining[pick]) pick = j;
    remaining[pick] -= 1;

    BenchmarkCase c = sample_ground_truth(case_seed(opts.seed, static_cast<std::size_t>(i)),
                                          opts.multi_stage, designs[pick]);
    char id[32];
    std::snprintf(id, sizeof(id), "case_%04d", i);
    c.case_id = id;
    c.prompt = render_prompt(c);
    cases.push_back(std::move(c));
  }
  return cases;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<BenchmarkCase>& cases) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrCode::IoError, "cannot open " + path.string() + " for writing");
  for (const auto& c : cases) out << c.to_json().dump() << '\n';
  if (!out) raise(ErrCode::IoError, "failed writing " + path.string());
}

std::vector<BenchmarkCase> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrCode::IoError, "cannot open " + path.string());
  std::vector<BenchmarkCase> cases;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      raise(ErrCode::InvalidRequest,
            path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    cases.push_back(BenchmarkCase::from_json(j));
  }
  return cases;
}

}  // namespace edaflow::bench
