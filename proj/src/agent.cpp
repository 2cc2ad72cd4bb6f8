// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/agent.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <regex>

#include <httplib.h>

#include "edaflow/text.hpp"

namespace edaflow::agent {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rule engine

struct RuleEngine::CompiledPattern {
  std::regex re;
  const cat::ParamSpec* spec = nullptr;  // null for stage verbs
  Stage verb_stage = Stage::synthesis;
};

namespace {

struct Verb {
  const char* pattern;
  Stage stage;
};

// Multi-word verbs must outrank the words they contain; candidate ordering
// (earliest start, then parameters, then longest) handles the overlaps.
constexpr Verb kVerbs[] = {
    {R"(\bclock[\s-]+tree\s+synthesis\b)", Stage::cts},
    {R"(\bcts\b)", Stage::cts},
    {R"(\b(?:synthesis|synthesize|synthesizing|synthesized|synth)\b)", Stage::synthesis},
    {R"(\b(?:placement|placing|place|floorplan|floorplanning)\b)", Stage::placement},
    {R"(\b(?:routing|route|routed)\b)", Stage::route},
};

struct Candidate {
  size_t begin = 0;
  size_t end = 0;
  bool is_verb = false;
  Stage verb_stage = Stage::synthesis;
  const cat::ParamSpec* spec = nullptr;
  std::string value;
};

bool overlaps(const std::vector<std::pair<size_t, size_t>>& spans, size_t b, size_t e) {
  for (const auto& [sb, se] : spans)
    if (b < se && sb < e) return true;
  return false;
}

}  // namespace

RuleEngine::RuleEngine(const cat::ParamCatalog* catalog) : catalog_(catalog) {
  auto compiled = std::make_shared<std::vector<CompiledPattern>>();
  for (const cat::ParamSpec& spec : catalog_->all()) {
    for (const std::string& pat : spec.patterns) {
      CompiledPattern cp;
      cp.re = std::regex(pat, std::regex::ECMAScript | std::regex::icase);
      cp.spec = &spec;
      compiled->push_back(std::move(cp));
    }
  }
  for (const Verb& v : kVerbs) {
    CompiledPattern cp;
    cp.re = std::regex(v.pattern, std::regex::ECMAScript | std::regex::icase);
    cp.verb_stage = v.stage;
    compiled->push_back(std::move(cp));
  }
  patterns_ = std::move(compiled);
}

Extraction RuleEngine::extract(const std::string& prompt) {
  if (text::trim(prompt).empty()) raise(ErrCode::EmptyPrompt, "prompt is empty");

  std::vector<Candidate> candidates;
  for (const CompiledPattern& cp : *patterns_) {
    auto begin = std::sregex_iterator(prompt.begin(), prompt.end(), cp.re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      Candidate c;
      c.begin = static_cast<size_t>(it->position(0));
      c.end = c.begin + static_cast<size_t>(it->length(0));
      if (cp.spec) {
        c.spec = cp.spec;
        c.value = it->size() > 1 ? (*it)[1].str() : it->str(0);
      } else {
        c.is_verb = true;
        c.verb_stage = cp.verb_stage;
      }
      candidates.push_back(std::move(c));
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.begin != b.begin) return a.begin < b.begin;
                     if (a.is_verb != b.is_verb) return !a.is_verb;
                     return (a.end - a.begin) > (b.end - b.begin);
                   });

  Extraction ex;
  std::vector<std::pair<size_t, size_t>> consumed;
  for (const Candidate& c : candidates) {
    if (overlaps(consumed, c.begin, c.end)) continue;
    consumed.emplace_back(c.begin, c.end);
    if (c.is_verb) {
      ex.stage_mentions.push_back(c.verb_stage);
      continue;
    }
    Assignment a;
    a.global = c.spec->global;
    a.stage = c.spec->stage;
    a.param = c.spec->name;
    a.pos = c.begin;
    auto norm = cat::ParamCatalog::normalize_value(*c.spec, c.value);
    // Numbers stay verbatim so the rendered TCL echoes the user's spelling;
    // invalid values stay raw and surface later as range conflicts.
    if (norm.ok && !c.spec->numeric())
      a.value = norm.value;
    else
      a.value = text::trim(c.value);
    ex.assignments.push_back(std::move(a));
  }

  // Parameters named without a recognizable value are reported, never guessed.
  std::set<std::string> assigned;
  for (const Assignment& a : ex.assignments) assigned.insert(a.param);
  std::set<std::string> flagged;
  for (const cat::ParamSpec& spec : catalog_->all()) {
    if (spec.alias.empty() || assigned.count(spec.name) || flagged.count(spec.name)) continue;
    std::regex re(spec.alias, std::regex::ECMAScript | std::regex::icase);
    auto begin = std::sregex_iterator(prompt.begin(), prompt.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      size_t b = static_cast<size_t>(it->position(0));
      size_t e = b + static_cast<size_t>(it->length(0));
      if (overlaps(consumed, b, e)) continue;
      ex.unresolved.push_back({spec.name, "mentioned without a recognizable value"});
      flagged.insert(spec.name);
      break;
    }
  }
  return ex;
}

// ---------------------------------------------------------------------------
// JSON shapes

ordered_json Conflict::to_json() const {
  ordered_json j;
  j["kind"] = kind;
  j["detail"] = detail;
  return j;
}

ordered_json ToolPlan::to_json() const {
  ordered_json j;
  ordered_json stages_j = ordered_json::array();
  for (Stage s : stages) stages_j.push_back(tool_name(s));
  j["stages"] = stages_j;
  ordered_json per = ordered_json::object();
  for (Stage s : stages) {
    ordered_json m = ordered_json::object();
    auto it = per_stage_params.find(s);
    if (it != per_stage_params.end())
      for (const auto& [k, v] : it->second) m[k] = v;
    per[tool_name(s)] = m;
  }
  j["per_stage_params"] = per;
  j["session_id"] = session_id;
  ordered_json un = ordered_json::array();
  for (const Unresolved& u : unresolved) un.push_back({{"param", u.param}, {"reason", u.reason}});
  j["unresolved"] = un;
  return j;
}

ordered_json StageResult::to_json() const {
  ordered_json j;
  j["tool"] = tool;
  ordered_json m = ordered_json::object();
  for (const auto& [k, v] : params) m[k] = v;
  j["params"] = m;
  j["version"] = version;
  j["tcl_script"] = tcl_script;
  j["reports"] = reports;
  ordered_json prov = ordered_json::object();
  for (const auto& [k, v] : provenance) prov[k] = v;
  j["provenance"] = prov;
  if (!error.empty()) j["error"] = error;
  return j;
}

ordered_json AgentResponse::to_json() const {
  ordered_json j;
  j["status"] = status;
  j["session_id"] = session_id;
  j["tools_used"] = tools_used;
  ordered_json rs = ordered_json::array();
  for (const StageResult& r : results) rs.push_back(r.to_json());
  j["results"] = rs;
  ordered_json un = ordered_json::array();
  for (const Unresolved& u : unresolved) un.push_back({{"param", u.param}, {"reason", u.reason}});
  j["unresolved"] = un;
  ordered_json cf = ordered_json::array();
  for (const Conflict& c : conflicts) cf.push_back(c.to_json());
  j["conflicts"] = cf;
  return j;
}

// ---------------------------------------------------------------------------
// Session store

SessionStore::SessionStore(std::filesystem::path file) : file_(std::move(file)) { load(); }

void SessionStore::load() {
  std::ifstream in(file_);
  if (!in) return;
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return;
  counter_ = doc.value("counter", 0u);
  if (!doc.contains("sessions") || !doc["sessions"].is_object()) return;
  for (const auto& [id, s] : doc["sessions"].items()) {
    Session sess;
    sess.id = id;
    sess.design = s.value("design", "");
    sess.technology = s.value("technology", "");
    sess.last_syn_ver = s.value("last_syn_ver", "");
    sess.last_impl_ver = s.value("last_impl_ver", "");
    sess.last_cts_impl_ver = s.value("last_cts_impl_ver", "");
    sess.syn_count = s.value("syn_count", 0);
    sess.placement_count = s.value("placement_count", 0);
    sessions_[id] = std::move(sess);
  }
}

void SessionStore::save() {
  std::lock_guard<std::mutex> lock(mu_);
  if (file_.empty()) return;
  ordered_json doc;
  doc["counter"] = counter_;
  ordered_json all = ordered_json::object();
  for (const auto& [id, s] : sessions_) {
    ordered_json j;
    j["design"] = s.design;
    j["technology"] = s.technology;
    j["last_syn_ver"] = s.last_syn_ver;
    j["last_impl_ver"] = s.last_impl_ver;
    j["last_cts_impl_ver"] = s.last_cts_impl_ver;
    j["syn_count"] = s.syn_count;
    j["placement_count"] = s.placement_count;
    all[id] = j;
  }
  doc["sessions"] = all;
  std::filesystem::create_directories(file_.parent_path());
  std::filesystem::path tmp = file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, file_);
}

Session& SessionStore::ensure(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    Session s;
    s.id = id;
    it = sessions_.emplace(id, std::move(s)).first;
  }
  return it->second;
}

std::optional<Session> SessionStore::find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

void SessionStore::update(const Session& s) {
  std::lock_guard<std::mutex> lock(mu_);
  sessions_[s.id] = s;
}

std::string SessionStore::generate_id() {
  std::lock_guard<std::mutex> lock(mu_);
  auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count();
  char buf[48];
  std::snprintf(buf, sizeof(buf), "s%llx_%u", static_cast<unsigned long long>(now), ++counter_);
  return buf;
}

// ---------------------------------------------------------------------------
// Invokers

namespace {

json ok_envelope(const svc::StageResponse& resp) {
  json env;
  env["ok"] = true;
  env["response"] = json::parse(resp.to_json().dump());
  return env;
}

json error_envelope(const std::string& name, const std::string& message) {
  json env;
  env["ok"] = false;
  env["error"]["name"] = name;
  env["error"]["message"] = message;
  return env;
}

}  // namespace

json InProcessInvoker::invoke(Stage stage, const json& request) {
  try {
    const cat::ParamCatalog& cat = services_->catalog();
    switch (stage) {
      case Stage::synthesis:
        return ok_envelope(services_->run_synthesis(svc::parse_synth_request(request, cat)));
      case Stage::placement:
        return ok_envelope(services_->run_placement(svc::parse_placement_request(request, cat)));
      case Stage::cts:
        return ok_envelope(services_->run_cts(svc::parse_cts_request(request, cat)));
      case Stage::route:
        return ok_envelope(services_->run_route(svc::parse_route_request(request, cat)));
    }
    return error_envelope("Internal", "unknown stage");
  } catch (const Error& e) {
    return error_envelope(err_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_envelope("Internal", e.what());
  }
}

json HttpInvoker::invoke(Stage stage, const json& request) {
  auto it = base_urls_.find(stage);
  if (it == base_urls_.end())
    return error_envelope("BackendUnavailable",
                          std::string("no service URL configured for ") + stage_name(stage));
  httplib::Client cli(it->second);
  cli.set_connection_timeout(10, 0);
  cli.set_read_timeout(600, 0);
  auto res = cli.Post("/run", request.dump(), "application/json");
  if (!res)
    return error_envelope("BackendUnavailable", "no response from " + it->second);
  json body = json::parse(res->body, nullptr, false);
  if (res->status == 200 && !body.is_discarded()) {
    json env;
    env["ok"] = true;
    env["response"] = body;
    return env;
  }
  if (!body.is_discarded() && body.contains("error") && body["error"].is_object())
    return error_envelope(body["error"].value("name", "ExecutorFailure"),
                          body["error"].value("message", res->body));
  return error_envelope("ExecutorFailure",
                        "HTTP " + std::to_string(res->status) + ": " + res->body);
}

// ---------------------------------------------------------------------------
// Orchestrator

namespace {

void check_session_id(const std::string& id) {
  if (id.empty()) raise(ErrCode::InvalidRequest, "session_id must not be empty");
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '.';
    if (!ok)
      raise(ErrCode::InvalidRequest,
            std::string("session_id has unsupported character '") + c + "'");
  }
}

std::string param_location(const Assignment& a) {
  return a.global ? "global" : std::string(stage_name(a.stage));
}

}  // namespace

Orchestrator::Orchestrator(const cat::ParamCatalog* catalog, Invoker* invoker,
                           std::filesystem::path session_file, ParamExtractor* extractor)
    : catalog_(catalog),
      invoker_(invoker),
      sessions_(std::move(session_file)),
      rule_engine_(std::make_unique<RuleEngine>(catalog)),
      extractor_(extractor) {}

Extraction Orchestrator::extract_parameters(const std::string& prompt) {
  ParamExtractor* engine = extractor_ ? extractor_ : rule_engine_.get();
  return engine->extract(prompt);
}

ToolPlan Orchestrator::decompose(const Extraction& ex, const std::string& session_id) const {
  std::set<Stage> present;
  for (Stage s : ex.stage_mentions) present.insert(s);
  for (const Assignment& a : ex.assignments)
    if (!a.global) present.insert(a.stage);
  if (present.empty())
    raise(ErrCode::NoStageDetected, "no flow stage named and no stage parameter recognized");

  ToolPlan plan;
  plan.session_id = session_id;
  for (Stage s : kStageOrder)
    if (present.count(s)) plan.stages.push_back(s);
  for (Stage s : plan.stages) plan.per_stage_params[s];  // materialize empty maps

  for (const Assignment& a : ex.assignments) {
    if (a.global) {
      // First mention wins; a differing repeat becomes a duplicate conflict.
      for (Stage s : plan.stages) plan.per_stage_params[s].emplace(a.param, a.value);
    } else {
      plan.per_stage_params[a.stage].emplace(a.param, a.value);
    }
  }
  plan.unresolved = ex.unresolved;
  plan.assignments = ex.assignments;
  return plan;
}

std::vector<Conflict> Orchestrator::detect_conflicts(const ToolPlan& plan,
                                                     const std::string& session_id) {
  std::vector<Conflict> out;
  std::optional<Session> session = sessions_.find(session_id);

  // (i) the same parameter stated twice with differing values
  std::map<std::string, std::vector<const Assignment*>> groups;
  for (const Assignment& a : plan.assignments)
    groups[param_location(a) + "\x1f" + a.param].push_back(&a);
  for (const auto& [key, mentions] : groups) {
    (void)key;
    if (mentions.size() < 2) continue;
    const cat::ParamSpec* spec = catalog_->find(mentions[0]->param);
    for (size_t i = 1; i < mentions.size(); ++i) {
      const std::string& a = mentions[0]->value;
      const std::string& b = mentions[i]->value;
      bool same = a == b;
      if (!same && spec && spec->numeric()) {
        auto da = text::parse_double(a);
        auto db = text::parse_double(b);
        same = da && db && *da == *db;
      }
      if (!same) {
        out.push_back({"duplicate", "parameter '" + mentions[0]->param +
                                        "' assigned conflicting values " + a + " and " + b});
        break;
      }
    }
  }

  // (ii) values outside the schema
  std::set<std::string> seen;
  for (Stage s : plan.stages) {
    auto it = plan.per_stage_params.find(s);
    if (it == plan.per_stage_params.end()) continue;
    for (const auto& [name, value] : it->second) {
      const cat::ParamSpec* spec = catalog_->find(name);
      if (!spec) {
        if (seen.insert(name).second)
          out.push_back({"range", "parameter '" + name + "' is not in the schema"});
        continue;
      }
      auto norm = cat::ParamCatalog::normalize_value(*spec, value);
      if (!norm.ok && seen.insert(name + "=" + value).second)
        out.push_back({"range", "parameter '" + name + "': " + norm.error});
    }
  }

  // (iii) missing context for the first stage in the chain
  bool design_known = session && !session->design.empty();
  for (Stage s : plan.stages) {
    auto it = plan.per_stage_params.find(s);
    if (it != plan.per_stage_params.end() && it->second.count("design")) design_known = true;
  }
  if (!design_known)
    out.push_back({"dependency", "no design named in the prompt or known to the session"});

  auto in_plan = [&](Stage s) {
    return std::find(plan.stages.begin(), plan.stages.end(), s) != plan.stages.end();
  };
  for (Stage s : plan.stages) {
    auto up = upstream_of(s);
    if (!up || in_plan(*up)) continue;
    bool satisfied = false;
    if (session) {
      if (*up == Stage::synthesis) satisfied = !session->last_syn_ver.empty();
      if (*up == Stage::placement) satisfied = !session->last_impl_ver.empty();
      if (*up == Stage::cts) satisfied = !session->last_cts_impl_ver.empty();
    }
    if (!satisfied)
      out.push_back({"dependency", std::string(tool_name(s)) + " requires a completed " +
                                       tool_name(*up) +
                                       " and the session has none"});
  }
  return out;
}

json Orchestrator::build_request(Stage stage, const ToolPlan& plan, const Session& session,
                                 const std::string& syn_ver,
                                 const std::string& impl_ver) const {
  const auto empty_map = std::map<std::string, std::string>{};
  auto pit = plan.per_stage_params.find(stage);
  const auto& params = pit == plan.per_stage_params.end() ? empty_map : pit->second;
  auto get = [&](const char* name) {
    auto it = params.find(name);
    return it == params.end() ? std::string() : it->second;
  };

  std::string design = get("design");
  if (design.empty()) design = session.design;
  std::string tech = get("technology");
  if (tech.empty()) tech = session.technology;

  json req;
  req["design"] = design;
  if (!tech.empty()) req["technology"] = tech;

  auto fill = [&](cat::RequestSlot slot, const char* map_field) {
    json m = json::object();
    for (const cat::ParamSpec* spec : catalog_->stage_params(stage)) {
      if (spec->slot != slot) continue;
      auto it = params.find(spec->name);
      if (it == params.end()) continue;
      m[spec->request_key] = it->second;
    }
    if (!m.empty()) req[map_field] = m;
  };

  switch (stage) {
    case Stage::synthesis:
      req["syn_version"] = syn_ver;
      for (const cat::ParamSpec* spec : catalog_->stage_params(Stage::synthesis)) {
        auto it = params.find(spec->name);
        if (it != params.end()) req[spec->request_key] = it->second;
      }
      break;
    case Stage::placement:
      req["syn_ver"] = syn_ver;
      req["g_idx"] = 0;
      req["p_idx"] = session.placement_count;
      fill(cat::RequestSlot::stage_params, "stage_params");
      break;
    case Stage::cts:
      req["impl_ver"] = impl_ver;
      for (const cat::ParamSpec* spec : catalog_->stage_params(Stage::cts)) {
        if (spec->slot != cat::RequestSlot::field) continue;
        auto it = params.find(spec->name);
        if (it != params.end()) req[spec->request_key] = it->second;
      }
      fill(cat::RequestSlot::cts_params, "cts_params");
      break;
    case Stage::route:
      req["impl_ver"] = impl_ver;
      fill(cat::RequestSlot::route_params, "route_params");
      break;
  }
  return req;
}

AgentResponse Orchestrator::execute_plan(const ToolPlan& plan, const std::string& session_id) {
  auto found = sessions_.find(session_id);
  if (!found) raise(ErrCode::SessionUnknown, "unknown session: " + session_id);
  Session session = *found;

  AgentResponse resp;
  resp.session_id = session_id;
  resp.unresolved = plan.unresolved;
  resp.conflicts = detect_conflicts(plan, session_id);
  if (!resp.conflicts.empty()) {
    resp.status = "error";
    return resp;
  }

  std::string syn_ver = session.last_syn_ver;
  if (std::find(plan.stages.begin(), plan.stages.end(), Stage::synthesis) != plan.stages.end())
    syn_ver = session.id + "_v" + std::to_string(session.syn_count + 1);
  std::string impl_ver = session.last_impl_ver;

  for (Stage s : plan.stages) {
    if (s == Stage::placement) impl_ver = svc::make_impl_ver(syn_ver, 0, session.placement_count);
    json req = build_request(s, plan, session, syn_ver, impl_ver);
    json env = invoker_->invoke(s, req);

    resp.tools_used.push_back(tool_name(s));
    StageResult rec;
    rec.tool = tool_name(s);
    auto pit = plan.per_stage_params.find(s);
    if (pit != plan.per_stage_params.end()) rec.params = pit->second;

    if (!env.value("ok", false)) {
      std::string name = "Internal";
      std::string message = "stage invocation failed";
      if (env.contains("error") && env["error"].is_object()) {
        name = env["error"].value("name", name);
        message = env["error"].value("message", message);
      }
      rec.error = name + ": " + message;
      resp.results.push_back(std::move(rec));
      resp.status = "error";
      sessions_.update(session);
      sessions_.save();
      throw StageFailedError(resp, std::string(tool_name(s)) + " failed: " + message);
    }

    svc::StageResponse sr = svc::StageResponse::from_json(env["response"]);
    rec.version = sr.version;
    rec.tcl_script = sr.tcl_script;
    rec.reports = sr.report_paths;
    rec.provenance = sr.provenance;
    resp.results.push_back(std::move(rec));

    if (!req.value("design", std::string()).empty()) session.design = req["design"];
    if (req.contains("technology")) session.technology = req["technology"];
    switch (s) {
      case Stage::synthesis:
        session.syn_count += 1;
        session.last_syn_ver = sr.version;
        break;
      case Stage::placement:
        session.placement_count += 1;
        session.last_impl_ver = sr.version;
        break;
      case Stage::cts:
        session.last_cts_impl_ver = sr.version;
        break;
      case Stage::route:
        break;
    }
  }

  sessions_.update(session);
  sessions_.save();
  return resp;
}

AgentResponse Orchestrator::run_prompt(const std::string& prompt, const std::string& session_id) {
  if (text::trim(prompt).empty()) raise(ErrCode::EmptyPrompt, "prompt is empty");
  std::string sid = session_id;
  if (sid.empty())
    sid = sessions_.generate_id();
  else
    check_session_id(sid);
  sessions_.ensure(sid);

  Extraction ex = extract_parameters(prompt);
  ToolPlan plan = decompose(ex, sid);

  std::vector<Conflict> conflicts = detect_conflicts(plan, sid);
  if (!conflicts.empty()) {
    AgentResponse resp;
    resp.status = "error";
    resp.session_id = sid;
    resp.unresolved = plan.unresolved;
    resp.conflicts = std::move(conflicts);
    sessions_.save();
    return resp;
  }

  try {
    return execute_plan(plan, sid);
  } catch (const StageFailedError& e) {
    return e.response;
  }
}

}  // namespace edaflow::agent
