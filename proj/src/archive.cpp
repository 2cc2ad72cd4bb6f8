// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#include "edaflow/archive.hpp"

#include <cstring>
#include <fstream>

#include <zlib.h>

#include "edaflow/error.hpp"

namespace edaflow::exec {
namespace {

bool segment_match(const char* p, const char* pe, const char* s, const char* se) {
  while (p < pe) {
    if (*p == '*') {
      ++p;
      for (const char* t = se; t >= s; --t)
        if (segment_match(p, pe, t, se)) return true;
      return false;
    }
    if (s >= se) return false;
    if (*p != '?' && *p != *s) return false;
    ++p;
    ++s;
  }
  return s == se;
}

std::vector<std::string> split_path(const std::string& p) {
  std::vector<std::string> parts;
  size_t start = 0;
  for (size_t i = 0; i <= p.size(); ++i) {
    if (i == p.size() || p[i] == '/') {
      if (i > start) parts.push_back(p.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

bool parts_match(const std::vector<std::string>& pat, size_t pi, const std::vector<std::string>& sp,
                 size_t si) {
  if (pi == pat.size()) return si == sp.size();
  if (pat[pi] == "**") {
    for (size_t k = si; k <= sp.size(); ++k)
      if (parts_match(pat, pi + 1, sp, k)) return true;
    return false;
  }
  if (si == sp.size()) return false;
  const std::string& seg = pat[pi];
  if (!segment_match(seg.data(), seg.data() + seg.size(), sp[si].data(),
                     sp[si].data() + sp[si].size()))
    return false;
  return parts_match(pat, pi + 1, sp, si + 1);
}

void write_octal(char* field, size_t width, unsigned long long value) {
  // width-1 octal digits, NUL terminated.
  for (size_t i = width - 1; i-- > 0;) {
    field[i] = static_cast<char>('0' + (value & 7));
    value >>= 3;
  }
  field[width - 1] = '\0';
}

}  // namespace

bool glob_match(const std::string& pattern, const std::string& rel_path) {
  if (pattern.find('/') == std::string::npos) {
    auto slash = rel_path.rfind('/');
    std::string base = slash == std::string::npos ? rel_path : rel_path.substr(slash + 1);
    return segment_match(pattern.data(), pattern.data() + pattern.size(), base.data(),
                         base.data() + base.size());
  }
  return parts_match(split_path(pattern), 0, split_path(rel_path), 0);
}

void write_tar(const std::filesystem::path& tar_path, const std::filesystem::path& base_dir,
               const std::vector<std::string>& rel_paths) {
  std::ofstream out(tar_path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrCode::ArchiveWriteFailed, "cannot open " + tar_path.string());

  for (const auto& rel : rel_paths) {
    std::filesystem::path src = base_dir / rel;
    std::ifstream in(src, std::ios::binary);
    if (!in) raise(ErrCode::ArchiveWriteFailed, "cannot read " + src.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (rel.size() > 99)
      raise(ErrCode::ArchiveWriteFailed, "entry name too long for ustar: " + rel);

    char hdr[512];
    std::memset(hdr, 0, sizeof(hdr));
    std::memcpy(hdr, rel.c_str(), rel.size());          // name
    write_octal(hdr + 100, 8, 0644);                    // mode
    write_octal(hdr + 108, 8, 0);                       // uid
    write_octal(hdr + 116, 8, 0);                       // gid
    write_octal(hdr + 124, 12, data.size());            // size
    write_octal(hdr + 136, 12, 0);                      // mtime
    std::memset(hdr + 148, ' ', 8);                     // checksum placeholder
    hdr[156] = '0';                                     // regular file
    std::memcpy(hdr + 257, "ustar", 5);                 // magic
    hdr[263] = '0';                                     // version "00"
    hdr[264] = '0';

    unsigned long long sum = 0;
    for (unsigned char ch : hdr) sum += ch;
    write_octal(hdr + 148, 7, sum);
    hdr[155] = ' ';

    out.write(hdr, sizeof(hdr));
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    size_t pad = (512 - data.size() % 512) % 512;
    static const char zeros[512] = {0};
    out.write(zeros, static_cast<std::streamsize>(pad));
  }
  static const char zeros[1024] = {0};
  out.write(zeros, sizeof(zeros));  // end-of-archive marker
  if (!out) raise(ErrCode::ArchiveWriteFailed, "write failed: " + tar_path.string());
}

void gzip_file(const std::filesystem::path& input, const std::filesystem::path& output) {
  std::ifstream in(input, std::ios::binary);
  if (!in) raise(ErrCode::ArchiveWriteFailed, "cannot read " + input.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  // windowBits 15+16 selects the gzip container.
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    raise(ErrCode::ArchiveWriteFailed, "deflateInit2 failed");
  gz_header gh;
  std::memset(&gh, 0, sizeof(gh));
  gh.time = 0;  // keep output byte-stable across runs
  gh.os = 255;
  deflateSetHeader(&zs, &gh);

  std::string out;
  out.resize(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = reinterpret_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  size_t produced = out.size() - zs.avail_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) raise(ErrCode::ArchiveWriteFailed, "deflate failed");

  std::ofstream of(output, std::ios::binary | std::ios::trunc);
  of.write(out.data(), static_cast<std::streamsize>(produced));
  if (!of) raise(ErrCode::ArchiveWriteFailed, "write failed: " + output.string());
}

}  // namespace edaflow::exec
