// Copyright 2026 The slsmig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slsmig/common.hpp"

namespace slsmig::testing {

inline fs::path fixture(const std::string& name) { return fs::path(SLSMIG_FIXTURES) / name; }

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"todo_flask", "shop_express", "bookstore_flask", "async_flags"};
  return names;
}

// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("slsmig-test-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

// Relative path -> bytes for every regular file under root.
inline std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[relative_path(e.path(), root)] = read_text_file(e.path());
  }
  return out;
}

// FNV-1a over (path, bytes) pairs in path order.
inline std::uint64_t tree_hash(const fs::path& root) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& [path, bytes] : snapshot_tree(root)) {
    mix(path);
    mix(bytes);
  }
  return h;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the CLI; returns its exit status. Output goes to `log` when given.
inline int run_cli(const std::vector<std::string>& args, const fs::path& log = "/dev/null") {
  std::string cmd = shell_quote(SLSMIG_CLI);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " >" + shell_quote(log.string()) + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Non-empty, non-comment lines of a fixture's hand-written expectation file.
inline std::vector<std::string> expectation_lines(const fs::path& file) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(read_text_file(file))) {
    std::string t = trim(line);
    if (!t.empty() && t[0] != '#') out.push_back(t);
  }
  return out;
}

}  // namespace slsmig::testing
