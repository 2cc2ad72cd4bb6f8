// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The edaflow Authors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "edaflow/archive.hpp"

namespace fs = std::filesystem;
using edaflow::exec::glob_match;
using edaflow::exec::gzip_file;
using edaflow::exec::write_tar;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("edaflow_archive_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void put(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("glob matching") {
  CHECK(glob_match("*.gds", "chip_final.gds"));
  CHECK(glob_match("*.gds", "out/chip_final.gds"));  // basename match at depth
  CHECK_FALSE(glob_match("*.gds", "chip_final.def"));
  CHECK(glob_match("reports/*.rpt", "reports/qor.rpt"));
  CHECK_FALSE(glob_match("reports/*.rpt", "reports/sub/qor.rpt"));  // '*' stops at '/'
  CHECK(glob_match("reports/**", "reports/sub/qor.rpt"));
  CHECK(glob_match("**/*.rpt", "reports/sub/qor.rpt"));
  CHECK(glob_match("qor.?pt", "qor.rpt"));
  CHECK_FALSE(glob_match("qor.?pt", "qor.pt"));
  CHECK(glob_match("chip_final.*", "chip_final.def"));
}

TEST_CASE("tar output is byte-identical across runs") {
  auto dir = fresh_dir("det");
  put(dir / "a.rpt", "alpha\n");
  put(dir / "sub/b.rpt", "beta\n");
  std::vector<std::string> members = {"a.rpt", "sub/b.rpt"};

  write_tar(dir / "one.tar", dir, members);
  write_tar(dir / "two.tar", dir, members);
  auto one = slurp(dir / "one.tar");
  auto two = slurp(dir / "two.tar");
  CHECK(one == two);
  CHECK(one.size() % 512 == 0);

  gzip_file(dir / "one.tar", dir / "one.tar.gz");
  gzip_file(dir / "two.tar", dir / "two.tar.gz");
  CHECK(slurp(dir / "one.tar.gz") == slurp(dir / "two.tar.gz"));
}

TEST_CASE("tar header carries normalized metadata") {
  auto dir = fresh_dir("hdr");
  put(dir / "a.rpt", "alpha\n");
  write_tar(dir / "out.tar", dir, {"a.rpt"});
  auto bytes = slurp(dir / "out.tar");
  REQUIRE(bytes.size() >= 512);

  // POSIX ustar layout offsets.
  CHECK(std::string(bytes.c_str() + 0) == "a.rpt");            // name
  CHECK(std::string(bytes.c_str() + 100, 7) == "0000644");     // mode
  CHECK(std::string(bytes.c_str() + 108, 7) == "0000000");     // uid
  CHECK(std::string(bytes.c_str() + 116, 7) == "0000000");     // gid
  CHECK(std::string(bytes.c_str() + 136, 11) == "00000000000");  // mtime 0
  CHECK(std::string(bytes.c_str() + 257, 5) == "ustar");       // magic
  CHECK(bytes[156] == '0');                                    // regular file

  // Size field holds the payload length in octal.
  CHECK(std::string(bytes.c_str() + 124, 11) == "00000000006");

  // Header checksum validates.
  unsigned long sum = 0;
  for (int i = 0; i < 512; ++i)
    sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(bytes[i]);
  unsigned long stored = std::stoul(std::string(bytes.c_str() + 148, 6), nullptr, 8);
  CHECK(sum == stored);

  // Payload begins right after the header.
  CHECK(bytes.substr(512, 6) == "alpha\n");
}

TEST_CASE("gzip header timestamp is zeroed") {
  auto dir = fresh_dir("gz");
  put(dir / "f.txt", "hello world\n");
  gzip_file(dir / "f.txt", dir / "f.txt.gz");
  auto bytes = slurp(dir / "f.txt.gz");
  REQUIRE(bytes.size() >= 10);
  CHECK(static_cast<unsigned char>(bytes[0]) == 0x1f);
  CHECK(static_cast<unsigned char>(bytes[1]) == 0x8b);
  CHECK(bytes[2] == 8);  // deflate
  CHECK(bytes[4] == 0);  // mtime
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 0);
  CHECK(bytes[7] == 0);

  // Round trip through the system gunzip when present.
  auto out = dir / "f.txt.gz";
  std::string cmd = "gzip -dc '" + out.string() + "' > '" + (dir / "back.txt").string() + "'";
  if (std::system(cmd.c_str()) == 0) CHECK(slurp(dir / "back.txt") == "hello world\n");
}

TEST_CASE("member order is preserved as given") {
  auto dir = fresh_dir("order");
  put(dir / "z.rpt", "zz\n");
  put(dir / "a.rpt", "aa\n");
  write_tar(dir / "out.tar", dir, {"z.rpt", "a.rpt"});
  auto bytes = slurp(dir / "out.tar");
  CHECK(bytes.find("z.rpt") < bytes.find("a.rpt"));
}

TEST_CASE("tar ends with two zero blocks") {
  auto dir = fresh_dir("zeros");
  put(dir / "a.rpt", "x");
  write_tar(dir / "out.tar", dir, {"a.rpt"});
  auto bytes = slurp(dir / "out.tar");
  REQUIRE(bytes.size() >= 1024);
  for (size_t i = bytes.size() - 1024; i < bytes.size(); ++i) CHECK(bytes[i] == '\0');
}

TEST_CASE("missing member raises") {
  auto dir = fresh_dir("missing");
  CHECK_THROWS(write_tar(dir / "out.tar", dir, {"nope.rpt"}));
}
