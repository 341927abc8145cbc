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

#include <gtest/gtest.h>

#include "slsmig/workspace.hpp"
#include "support.hpp"

namespace slsmig::ws {
namespace {

using slsmig::testing::TempDir;

std::string numbered(int n) {
  std::string s;
  for (int i = 1; i <= n; ++i) s += std::to_string(i) + "\n";
  return s;
}

TEST(ReadFile, RangeIsInclusiveAndClamped) {
  TempDir d;
  write_text_atomic(d / "f.txt", numbered(10));
  auto r = read_file(d / "f.txt", std::make_pair(3, 5));
  EXPECT_EQ(r.content, "3\n4\n5\n");
  EXPECT_FALSE(r.truncated);
  auto clamped = read_file(d / "f.txt", std::make_pair(9, 50));
  EXPECT_EQ(clamped.content, "9\n10\n");
}

TEST(ReadFile, InvalidRange) {
  TempDir d;
  write_text_atomic(d / "f.txt", numbered(3));
  EXPECT_THROW(read_file(d / "f.txt", std::make_pair(0, 2)), Error);
  EXPECT_THROW(read_file(d / "f.txt", std::make_pair(3, 2)), Error);
}

TEST(ReadFile, TruncatesOnlyPastTheCap) {
  TempDir d;
  write_text_atomic(d / "a.txt", numbered(kReadLineCap));
  write_text_atomic(d / "b.txt", numbered(kReadLineCap + 1));
  EXPECT_FALSE(read_file(d / "a.txt").truncated);
  auto b = read_file(d / "b.txt");
  EXPECT_TRUE(b.truncated);
  EXPECT_EQ(b.total_lines, kReadLineCap + 1);
  EXPECT_EQ(split_lines(b.content).size(), static_cast<std::size_t>(kReadLineCap));
  EXPECT_FALSE(b.warning.empty());
  auto tail = read_file(d / "b.txt", std::make_pair(kReadLineCap + 1, kReadLineCap + 1));
  EXPECT_EQ(tail.content, std::to_string(kReadLineCap + 1) + "\n");
}

TEST(ReadFile, Errors) {
  TempDir d;
  try {
    read_file(d / "missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  write_text_atomic(d / "bin", std::string("ab\0cd", 5));
  try {
    read_file(d / "bin");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnreadable);
  }
}

TEST(WriteFile, ValidPayloadsAreWritten) {
  TempDir d;
  EXPECT_TRUE(write_file(d / "a.py", "def f():\n    return 1\n", Validation::kPython).ok);
  EXPECT_TRUE(write_file(d / "a.json", "{\"a\": [1]}", Validation::kJson).ok);
  EXPECT_TRUE(write_file(d / "t.yaml", "Resources:\n  X: !Ref Y\n", Validation::kYaml).ok);
  EXPECT_TRUE(write_file(d / "n/none.txt", "anything {", Validation::kNone).ok);
  EXPECT_EQ(read_text_file(d / "n/none.txt"), "anything {");
}

TEST(WriteFile, RejectionReportsLineAndKeepsTarget) {
  TempDir d;
  write_text_atomic(d / "a.py", "x = 1\n");
  auto r = write_file(d / "a.py", "x = 1\ndef f(:\n", Validation::kPython);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.error_line, 2);
  EXPECT_EQ(read_text_file(d / "a.py"), "x = 1\n");
  auto y = write_file(d / "new.yaml", "a: 'open\n", Validation::kYaml);
  EXPECT_FALSE(y.ok);
  EXPECT_FALSE(fs::exists(d / "new.yaml"));
}

TEST(MergeJsonKey, SetsOneKeyAndPreservesOthers) {
  TempDir d;
  write_text_atomic(d / "c.json", R"({"keep": 1, "replace": 2})");
  auto r = merge_json_key(d / "c.json", "replace", Json{{"x", true}});
  EXPECT_TRUE(r.ok);
  Json j = Json::parse(read_text_file(d / "c.json"));
  EXPECT_EQ(j["keep"], 1);
  EXPECT_EQ(j["replace"]["x"], true);
  EXPECT_TRUE(merge_json_key(d / "fresh.json", "k", 3).ok);
  EXPECT_EQ(Json::parse(read_text_file(d / "fresh.json"))["k"], 3);
}

TEST(MergeJsonKey, RefusesBadExistingContent) {
  TempDir d;
  write_text_atomic(d / "bad.json", "{oops");
  EXPECT_THROW(merge_json_key(d / "bad.json", "k", 1), Error);
  EXPECT_EQ(read_text_file(d / "bad.json"), "{oops");
  write_text_atomic(d / "arr.json", "[1]");
  try {
    merge_json_key(d / "arr.json", "k", 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
}

TEST(ListDir, SortedDepthFirst) {
  TempDir d;
  write_text_atomic(d / "b.txt", "");
  write_text_atomic(d / "a/z.txt", "");
  write_text_atomic(d / "a/y/x.txt", "");
  auto flat = list_dir(d.path(), false);
  ASSERT_EQ(flat.size(), 2u);
  EXPECT_EQ(flat[0].path, "a");
  EXPECT_EQ(flat[0].kind, EntryKind::kDirectory);
  auto deep = list_dir(d.path(), true);
  std::vector<std::string> paths;
  for (const auto& e : deep) paths.push_back(e.path);
  EXPECT_EQ(paths, (std::vector<std::string>{"a", "a/y", "a/y/x.txt", "a/z.txt", "b.txt"}));
  EXPECT_THROW(list_dir(d / "b.txt", false), Error);
}

}  // namespace
}  // namespace slsmig::ws
