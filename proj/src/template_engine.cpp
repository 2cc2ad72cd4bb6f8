// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/template_engine.hpp"

#include <fstream>
#include <sstream>

#include "edaflow/error.hpp"
#include "edaflow/text.hpp"

namespace edaflow::tpl {
namespace {

bool is_name_start(char c) { return c >= 'A' && c <= 'Z'; }
bool is_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool valid_name(const std::string& n) {
  if (n.empty() || !is_name_start(n[0])) return false;
  for (char c : n)
    if (!is_name_char(c)) return false;
  return true;
}

std::string joined(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

// Replaces every placeholder that `lookup` knows in one left-to-right pass.
// Returns true when at least one replacement happened.
template <typename Lookup>
bool substitute_pass(std::string& body, Lookup&& lookup) {
  auto hits = find_placeholders(body);
  if (hits.empty()) return false;
  std::string out;
  out.reserve(body.size());
  size_t pos = 0;
  bool replaced = false;
  for (const auto& h : hits) {
    const std::string* value = lookup(h.name);
    if (!value) continue;
    out.append(body, pos, h.begin - pos);
    out.append(*value);
    pos = h.end;
    replaced = true;
  }
  out.append(body, pos, body.size() - pos);
  if (replaced) body = std::move(out);
  return replaced;
}

std::string unescape(const std::string& body) {
  std::string out;
  out.reserve(body.size());
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size() && body[i + 1] == '$' &&
        i + 2 < body.size() && body[i + 2] == '{') {
      out += "${";
      i += 2;
    } else {
      out += body[i];
    }
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    std::string t = text::trim(cur);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<PlaceholderHit> find_placeholders(const std::string& body) {
  std::vector<PlaceholderHit> hits;
  for (size_t i = 0; i + 1 < body.size(); ++i) {
    if (body[i] != '$' || body[i + 1] != '{') continue;
    if (i > 0 && body[i - 1] == '\\') continue;  // escaped
    size_t j = i + 2;
    if (j >= body.size() || !is_name_start(body[j])) continue;
    size_t k = j;
    while (k < body.size() && is_name_char(body[k])) ++k;
    if (k < body.size() && body[k] == '}') {
      hits.push_back({body.substr(j, k - j), i, k + 1});
      i = k;  // resume after the closing brace
    }
  }
  return hits;
}

std::set<std::string> list_placeholders(const std::string& body) {
  std::set<std::string> names;
  for (const auto& h : find_placeholders(body)) names.insert(h.name);
  return names;
}

TclTemplate TclTemplate::parse(const std::string& file_text) {
  TclTemplate t;
  bool saw_stage = false;
  for (const auto& line : text::split_lines(file_text)) {
    std::string s = text::trim(line);
    if (s.rfind("#@", 0) != 0) continue;
    std::string rest = text::trim(s.substr(2));
    if (rest.rfind("stage:", 0) == 0) {
      auto st = stage_from_name(text::trim(rest.substr(6)));
      if (!st) raise(ErrCode::TemplateInvalid, "unknown stage in template header");
      t.stage = *st;
      saw_stage = true;
    } else if (rest.rfind("required:", 0) == 0) {
      for (const auto& n : parse_name_list(rest.substr(9))) t.required.insert(n);
    } else if (rest.rfind("optional:", 0) == 0) {
      for (const auto& item : parse_name_list(rest.substr(9))) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
          raise(ErrCode::TemplateInvalid, "optional placeholder needs a default: " + item);
        std::string name = text::trim(item.substr(0, eq));
        t.optional_defaults[name] = text::trim(item.substr(eq + 1));
      }
    }
  }
  if (!saw_stage) raise(ErrCode::TemplateInvalid, "template header missing '#@ stage:' line");
  t.body = file_text;

  for (const auto& n : t.required) {
    if (!valid_name(n)) raise(ErrCode::TemplateInvalid, "bad placeholder name: " + n);
    if (t.optional_defaults.count(n))
      raise(ErrCode::TemplateInvalid, "placeholder declared required and optional: " + n);
  }
  for (const auto& [n, v] : t.optional_defaults) {
    (void)v;
    if (!valid_name(n)) raise(ErrCode::TemplateInvalid, "bad placeholder name: " + n);
  }
  for (const auto& n : list_placeholders(t.body)) {
    if (!t.required.count(n) && !t.optional_defaults.count(n))
      raise(ErrCode::TemplateInvalid, "undeclared placeholder in body: " + n);
  }
  return t;
}

TclTemplate TclTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrCode::IoError, "cannot open template: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

RenderedScript render(const TclTemplate& tmpl, const ParamBinding& binding) {
  std::set<std::string> missing;
  for (const auto& r : tmpl.required)
    if (!binding.values.count(r)) missing.insert(r);
  if (!missing.empty())
    raise(ErrCode::MissingRequiredPlaceholder,
          "missing required placeholder(s): " + joined(missing));

  auto lookup = [&](const std::string& name) -> const std::string* {
    if (auto it = binding.values.find(name); it != binding.values.end()) return &it->second;
    if (auto it = tmpl.optional_defaults.find(name); it != tmpl.optional_defaults.end())
      return &it->second;
    return nullptr;
  };

  std::string body = tmpl.body;
  int passes = 0;
  while (substitute_pass(body, lookup)) {
    if (++passes > kMaxExpansionDepth) {
      std::set<std::string> cyclic;
      for (const auto& h : find_placeholders(body))
        if (lookup(h.name)) cyclic.insert(h.name);
      raise(ErrCode::DepthExceeded,
            "placeholder expansion did not settle after " +
                std::to_string(kMaxExpansionDepth) + " passes: " + joined(cyclic));
    }
  }

  std::set<std::string> unresolved;
  for (const auto& h : find_placeholders(body)) unresolved.insert(h.name);
  if (!unresolved.empty())
    raise(ErrCode::UnresolvedPlaceholder, "unresolved placeholder(s): " + joined(unresolved));

  // Splice the env-export block at the marker line (first occurrence only).
  std::vector<std::string> lines = text::split_lines(body);
  std::vector<std::string> out_lines;
  out_lines.reserve(lines.size() + binding.env_exports.size());
  bool spliced = false;
  for (const auto& line : lines) {
    if (!spliced && text::trim(line) == kEnvExportMarker) {
      for (const auto& [name, value] : binding.env_exports)
        out_lines.push_back("set env(" + name + ") \"" + value + "\"");
      spliced = true;
      continue;
    }
    out_lines.push_back(line);
  }
  if (!spliced && !binding.env_exports.empty()) {
    std::vector<std::string> prefix;
    for (const auto& [name, value] : binding.env_exports)
      prefix.push_back("set env(" + name + ") \"" + value + "\"");
    prefix.insert(prefix.end(), out_lines.begin(), out_lines.end());
    out_lines = std::move(prefix);
  }
  body = text::join(out_lines, "\n");
  if (!body.empty()) body += "\n";

  RenderedScript result;
  result.stage = tmpl.stage;
  result.text = unescape(body);
  for (const auto& name : list_placeholders(tmpl.body)) {
    result.provenance[name] =
        binding.values.count(name) ? Origin::user_supplied : Origin::defaulted;
  }
  return result;
}

TemplateStore TemplateStore::load_dir(const std::filesystem::path& dir) {
  TemplateStore store;
  for (Stage s : kStageOrder) {
    auto path = dir / (std::string(stage_name(s)) + ".tcl");
    TclTemplate t = TclTemplate::load(path);
    if (t.stage != s)
      raise(ErrCode::TemplateInvalid,
            "template " + path.string() + " declares stage " + stage_name(t.stage));
    store.templates_.emplace(s, std::move(t));
  }
  return store;
}

const TclTemplate& TemplateStore::get(Stage s) const { return templates_.at(s); }

}  // namespace edaflow::tpl
