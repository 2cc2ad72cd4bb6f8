// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace edaflow::exec {

// Shell-style matching for archive selection. '*' and '?' stop at '/',
// '**' crosses directories. A pattern without '/' matches against the
// basename at any depth.
bool glob_match(const std::string& pattern, const std::string& rel_path);

// Writes a POSIX ustar archive with normalized metadata (mode 0644, uid/gid
// 0, mtime 0) and entries in the given order, so equal inputs always produce
// identical bytes. Paths are stored relative to `base_dir`.
void write_tar(const std::filesystem::path& tar_path, const std::filesystem::path& base_dir,
               const std::vector<std::string>& rel_paths);

// Deflates `input` to gzip with a zeroed header timestamp.
void gzip_file(const std::filesystem::path& input, const std::filesystem::path& output);

}  // namespace edaflow::exec
