// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/catalog.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "edaflow/error.hpp"
#include "edaflow/text.hpp"

namespace edaflow::cat {

using nlohmann::json;

std::optional<bool> parse_bool_word(const std::string& w) {
  std::string t = text::to_lower(text::trim(w));
  if (t == "enabled" || t == "on" || t == "true" || t == "yes") return true;
  if (t == "disabled" || t == "off" || t == "false" || t == "no") return false;
  return std::nullopt;
}

namespace {

ParamKind kind_from(const std::string& s) {
  if (s == "real") return ParamKind::real_num;
  if (s == "int") return ParamKind::int_num;
  if (s == "enum") return ParamKind::enum_str;
  if (s == "bool") return ParamKind::boolean;
  if (s == "string") return ParamKind::str;
  raise(ErrCode::ConfigInvalid, "unknown param kind: " + s);
}

RequestSlot slot_from(const std::string& s) {
  if (s == "field") return RequestSlot::field;
  if (s == "stage_params") return RequestSlot::stage_params;
  if (s == "cts_params") return RequestSlot::cts_params;
  if (s == "route_params") return RequestSlot::route_params;
  if (s == "global") return RequestSlot::global_ctx;
  raise(ErrCode::ConfigInvalid, "unknown request slot: " + s);
}

}  // namespace

ParamCatalog ParamCatalog::load(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) raise(ErrCode::IoError, "cannot open catalog: " + json_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    raise(ErrCode::ConfigInvalid, "catalog parse error: " + std::string(e.what()));
  }

  ParamCatalog cat;
  for (const auto& p : doc.at("params")) {
    ParamSpec spec;
    spec.name = p.at("name").get<std::string>();
    std::string stage = p.at("stage").get<std::string>();
    if (stage == "global") {
      spec.global = true;
    } else {
      auto st = stage_from_name(stage);
      if (!st) raise(ErrCode::ConfigInvalid, "bad stage for param " + spec.name);
      spec.stage = *st;
    }
    spec.kind = kind_from(p.at("kind").get<std::string>());
    if (p.contains("range")) {
      spec.min = p["range"][0].get<double>();
      spec.max = p["range"][1].get<double>();
    }
    spec.decimals = p.value("decimals", 2);
    if (p.contains("options"))
      for (const auto& o : p["options"]) spec.options.push_back(o.get<std::string>());
    spec.placeholder = p.value("placeholder", "");
    spec.slot = slot_from(p.value("slot", spec.global ? "global" : "field"));
    spec.request_key = p.value("request_key", spec.name);
    spec.phrase = p.value("phrase", "");
    if (p.contains("patterns"))
      for (const auto& r : p["patterns"]) spec.patterns.push_back(r.get<std::string>());
    spec.alias = p.value("alias", "");
    spec.mandatory = p.value("mandatory", false);

    if (spec.kind == ParamKind::enum_str && spec.options.empty())
      raise(ErrCode::ConfigInvalid, "enum param without options: " + spec.name);
    if (spec.numeric() && spec.max < spec.min)
      raise(ErrCode::ConfigInvalid, "empty range for param: " + spec.name);
    cat.params_.push_back(std::move(spec));
  }

  for (size_t i = 0; i < cat.params_.size(); ++i)
    for (size_t j = i + 1; j < cat.params_.size(); ++j)
      if (cat.params_[i].name == cat.params_[j].name)
        raise(ErrCode::ConfigInvalid, "duplicate param name: " + cat.params_[i].name);
  return cat;
}

const ParamSpec* ParamCatalog::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

const ParamSpec* ParamCatalog::find_by_key(Stage stage, const std::string& key) const {
  for (const auto& p : params_)
    if (!p.global && p.stage == stage && p.request_key == key) return &p;
  return nullptr;
}

std::vector<const ParamSpec*> ParamCatalog::stage_params(Stage s) const {
  std::vector<const ParamSpec*> out;
  for (const auto& p : params_)
    if (!p.global && p.stage == s) out.push_back(&p);
  return out;
}

std::vector<const ParamSpec*> ParamCatalog::globals() const {
  std::vector<const ParamSpec*> out;
  for (const auto& p : params_)
    if (p.global) out.push_back(&p);
  return out;
}

ParamCatalog::Normalized ParamCatalog::normalize_value(const ParamSpec& spec,
                                                       const std::string& raw) {
  Normalized out;
  std::string t = text::trim(raw);
  switch (spec.kind) {
    case ParamKind::real_num:
    case ParamKind::int_num: {
      auto v = text::parse_double(t);
      if (!v) {
        out.error = "not a number: '" + t + "'";
        return out;
      }
      if (spec.kind == ParamKind::int_num && *v != std::floor(*v)) {
        out.error = "not an integer: '" + t + "'";
        return out;
      }
      if (*v < spec.min || *v > spec.max) {
        out.error = "value " + text::canonical_number(*v) + " outside [" +
                    text::canonical_number(spec.min) + ", " +
                    text::canonical_number(spec.max) + "]";
        return out;
      }
      out.ok = true;
      out.value = text::canonical_number(*v);
      return out;
    }
    case ParamKind::enum_str: {
      for (const auto& o : spec.options) {
        if (text::iequals(o, t)) {
          out.ok = true;
          out.value = o;
          return out;
        }
      }
      out.error = "'" + t + "' not one of {" + text::join(spec.options, ", ") + "}";
      return out;
    }
    case ParamKind::boolean: {
      auto b = parse_bool_word(t);
      if (!b) {
        out.error = "not a boolean word: '" + t + "'";
        return out;
      }
      out.ok = true;
      out.value = *b ? "true" : "false";
      return out;
    }
    case ParamKind::str: {
      if (t.empty()) {
        out.error = "empty value";
        return out;
      }
      if (!spec.options.empty()) {
        for (const auto& o : spec.options) {
          if (text::iequals(o, t)) {
            out.ok = true;
            out.value = o;
            return out;
          }
        }
      }
      out.ok = true;
      out.value = t;
      return out;
    }
  }
  out.error = "unhandled kind";
  return out;
}

}  // namespace edaflow::cat
