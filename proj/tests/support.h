// Copyright 2026 The Outbreak Wiki Authors.
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

#ifndef OUTBREAK_TESTS_SUPPORT_H_
#define OUTBREAK_TESTS_SUPPORT_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace outbreak::testing {

std::filesystem::path fixture(std::string_view relative);

std::string read_text(const std::filesystem::path &path);
void write_text(const std::filesystem::path &path, std::string_view text);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// "file://" endpoint that replays a recorded fixture directory.
std::string replay_endpoint(std::string_view fixture_dir);

inline constexpr std::string_view kTabularTitle = "West Africa fixture outbreak";

}  // namespace outbreak::testing

#endif  // OUTBREAK_TESTS_SUPPORT_H_
