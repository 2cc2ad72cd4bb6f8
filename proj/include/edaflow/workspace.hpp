// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "edaflow/stage.hpp"

namespace edaflow::ws {

// Directory layout under a workspace root:
//   <root>/<design>/synthesis/<syn_ver>/{scripts,reports,manifest.json}
//   <root>/<design>/impl/<impl_ver>/{scripts,reports,manifest.json}
struct Paths {
  std::filesystem::path root;

  std::filesystem::path design_dir(const std::string& design) const { return root / design; }
  std::filesystem::path syn_dir(const std::string& design, const std::string& ver) const {
    return root / design / "synthesis" / ver;
  }
  std::filesystem::path impl_dir(const std::string& design, const std::string& ver) const {
    return root / design / "impl" / ver;
  }
};

struct StageRecord {
  std::string status;  // "complete" | "failed"
  std::string checkpoint;
  long long timestamp_ns = 0;
  std::map<std::string, std::string> params;
};

// Per-version manifest; readers use it to find completed upstream stages.
struct Manifest {
  std::string design;
  std::string version;
  std::string kind;  // "synthesis" | "impl"
  std::map<std::string, StageRecord> stages;

  bool stage_complete(Stage s) const;
  void record(Stage s, StageRecord rec);

  nlohmann::ordered_json to_json() const;
  static Manifest from_json(const nlohmann::json& j);

  // Atomic write: temp file in the same directory, then rename.
  void save(const std::filesystem::path& version_dir) const;
  static std::optional<Manifest> load(const std::filesystem::path& version_dir);
};

// In-process advisory locks keyed by (design, kind, version, stage) plus an
// on-disk sentinel so a second process also sees the reservation.
class VersionLocks {
 public:
  class Guard {
   public:
    Guard() = default;
    Guard(VersionLocks* owner, std::string key, std::filesystem::path sentinel);
    ~Guard();
    Guard(Guard&& other) noexcept;
    Guard& operator=(Guard&& other) noexcept;
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;

   private:
    VersionLocks* owner_ = nullptr;
    std::string key_;
    std::filesystem::path sentinel_;
  };

  // Empty optional means another run currently holds the same version+stage.
  std::optional<Guard> try_acquire(const std::filesystem::path& version_dir,
                                   const std::string& design, const std::string& kind,
                                   const std::string& version, Stage stage);

 private:
  friend class Guard;
  void release(const std::string& key);
  std::mutex mu_;
  std::set<std::string> held_;
};

long long now_ns();

}  // namespace edaflow::ws
