// Copyright 2026 The L2T Harness Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef L2T_FILE_UTIL_H_
#define L2T_FILE_UTIL_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace l2t {

// nullopt when the file cannot be opened.
std::optional<std::string> TryReadFile(const std::filesystem::path& path);

// Throws ConfigError when the file cannot be opened.
std::string ReadFileOrThrow(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a partially written file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

// Splits on '\n', dropping one trailing '\r' per line. A final empty line
// (from a trailing newline) is not returned.
std::vector<std::string> SplitLines(std::string_view text);

std::string_view StripTrailingNewlines(std::string_view text);

}  // namespace l2t

#endif  // L2T_FILE_UTIL_H_
