// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/workspace.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <fstream>

#include "edaflow/error.hpp"

namespace edaflow::ws {

using nlohmann::json;

long long now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool Manifest::stage_complete(Stage s) const {
  auto it = stages.find(stage_name(s));
  return it != stages.end() && it->second.status == "complete";
}

void Manifest::record(Stage s, StageRecord rec) { stages[stage_name(s)] = std::move(rec); }

nlohmann::ordered_json Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["design"] = design;
  j["version"] = version;
  j["kind"] = kind;
  nlohmann::ordered_json st(nlohmann::ordered_json::value_t::object);
  for (const auto& [name, rec] : stages) {
    nlohmann::ordered_json r;
    r["status"] = rec.status;
    r["checkpoint"] = rec.checkpoint;
    r["timestamp_ns"] = rec.timestamp_ns;
    r["params"] = rec.params;
    st[name] = r;
  }
  j["stages"] = st;
  return j;
}

Manifest Manifest::from_json(const json& j) {
  Manifest m;
  m.design = j.at("design").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.kind = j.at("kind").get<std::string>();
  if (j.contains("stages")) {
    for (const auto& [name, r] : j.at("stages").items()) {
      StageRecord rec;
      rec.status = r.value("status", "");
      rec.checkpoint = r.value("checkpoint", "");
      rec.timestamp_ns = r.value("timestamp_ns", 0LL);
      if (r.contains("params"))
        rec.params = r.at("params").get<std::map<std::string, std::string>>();
      m.stages[name] = std::move(rec);
    }
  }
  return m;
}

void Manifest::save(const std::filesystem::path& version_dir) const {
  std::filesystem::create_directories(version_dir);
  auto tmp = version_dir / "manifest.json.tmp";
  auto final_path = version_dir / "manifest.json";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) raise(ErrCode::IoError, "cannot write " + tmp.string());
    out << to_json().dump(2) << "\n";
    if (!out) raise(ErrCode::IoError, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) raise(ErrCode::IoError, "rename failed: " + final_path.string());
}

std::optional<Manifest> Manifest::load(const std::filesystem::path& version_dir) {
  std::ifstream in(version_dir / "manifest.json");
  if (!in) return std::nullopt;
  json j;
  try {
    in >> j;
    return from_json(j);
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable manifests are treated as absent
  }
}

VersionLocks::Guard::Guard(VersionLocks* owner, std::string key, std::filesystem::path sentinel)
    : owner_(owner), key_(std::move(key)), sentinel_(std::move(sentinel)) {}

VersionLocks::Guard::~Guard() {
  if (!owner_) return;
  owner_->release(key_);
  std::error_code ec;
  std::filesystem::remove(sentinel_, ec);
}

VersionLocks::Guard::Guard(Guard&& other) noexcept
    : owner_(other.owner_), key_(std::move(other.key_)), sentinel_(std::move(other.sentinel_)) {
  other.owner_ = nullptr;
}

VersionLocks::Guard& VersionLocks::Guard::operator=(Guard&& other) noexcept {
  if (this != &other) {
    if (owner_) {
      owner_->release(key_);
      std::error_code ec;
      std::filesystem::remove(sentinel_, ec);
    }
    owner_ = other.owner_;
    key_ = std::move(other.key_);
    sentinel_ = std::move(other.sentinel_);
    other.owner_ = nullptr;
  }
  return *this;
}

std::optional<VersionLocks::Guard> VersionLocks::try_acquire(
    const std::filesystem::path& version_dir, const std::string& design, const std::string& kind,
    const std::string& version, Stage stage) {
  std::string key = design + "|" + kind + "|" + version + "|" + stage_name(stage);
  {
    std::lock_guard<std::mutex> g(mu_);
    if (!held_.insert(key).second) return std::nullopt;
  }
  std::filesystem::create_directories(version_dir);
  auto sentinel = version_dir / (std::string(".running.") + stage_name(stage));
  int fd = ::open(sentinel.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    release(key);
    return std::nullopt;
  }
  ::close(fd);
  return Guard(this, key, sentinel);
}

void VersionLocks::release(const std::string& key) {
  std::lock_guard<std::mutex> g(mu_);
  held_.erase(key);
}

}  // namespace edaflow::ws
