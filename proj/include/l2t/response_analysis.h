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

// Answer-letter extraction and response-language identification. Both are
// pure functions of their arguments.

#ifndef L2T_RESPONSE_ANALYSIS_H_
#define L2T_RESPONSE_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "l2t/types.h"

namespace l2t {

// The per-language phrase that introduces the final answer, e.g.
// "Therefore, the answer is". Loaded from markers.json in the template
// directory.
class MarkerTable {
 public:
  // Throws ConfigError unless every language has a non-empty marker.
  explicit MarkerTable(std::map<Language, std::string> markers);

  static MarkerTable LoadFromFile(const std::filesystem::path& path);
  static MarkerTable Defaults();

  const std::string& Marker(Language lang) const { return markers_.at(lang); }
  const std::map<Language, std::string>& markers() const { return markers_; }

 private:
  std::map<Language, std::string> markers_;
};

// 1. If any marker (of any language) occurs, take the LAST occurrence and
//    return the first standalone A-D letter after it (case-insensitive).
//    No letter after that marker is a failure; earlier text is not consulted.
// 2. Otherwise return the last standalone uppercase A-D letter.
// 3. Otherwise fail.
// A letter is standalone when neither neighbour is a Latin-script letter;
// full-width forms (Ａ, ｂ, ，) are folded to ASCII before matching.
ExtractionResult ExtractAnswer(std::string_view response,
                               const MarkerTable& markers);

enum class ScriptClass : std::uint8_t { kLatin, kHan, kHangul, kArabic, kOther };
inline constexpr std::size_t kNumScriptClasses = 5;

struct ScriptHistogram {
  std::array<std::size_t, kNumScriptClasses> counts{};
  std::size_t total = 0;

  std::size_t count(ScriptClass c) const {
    return counts[static_cast<std::size_t>(c)];
  }
  friend bool operator==(const ScriptHistogram&,
                         const ScriptHistogram&) = default;
};

// Counts letter-category code points (general category L*) by script.
// Digits, punctuation, symbols, marks and whitespace are not counted.
ScriptHistogram BuildScriptHistogram(std::string_view text);

// The winning script must hold strictly more than half of all letters;
// Latin maps to EN. Anything else, including empty input, is Unknown.
DetectedLanguage DetectLanguage(std::string_view text);
DetectedLanguage DetectLanguage(const ScriptHistogram& histogram);

}  // namespace l2t

#endif  // L2T_RESPONSE_ANALYSIS_H_
