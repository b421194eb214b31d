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

#include "l2t/response_analysis.h"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/utf8.h>

#include <json.hpp>
#include <optional>
#include <set>
#include <vector>

#include "l2t/errors.h"
#include "l2t/file_util.h"

namespace l2t {

namespace {

// Full-width ASCII variants (U+FF01..U+FF5E) fold onto U+0021..U+007E.
constexpr UChar32 FoldWidth(UChar32 c) {
  return (c >= 0xFF01 && c <= 0xFF5E) ? c - 0xFEE0 : c;
}

std::vector<UChar32> DecodeFolded(std::string_view text) {
  std::vector<UChar32> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back(FoldWidth(c));
  }
  return out;
}

constexpr UChar32 AsciiLower(UChar32 c) {
  return (c >= 'A' && c <= 'Z') ? c + ('a' - 'A') : c;
}

bool IsLatinLetter(UChar32 c) {
  if (!u_isalpha(c)) return false;
  UErrorCode status = U_ZERO_ERROR;
  return uscript_getScript(c, &status) == USCRIPT_LATIN && U_SUCCESS(status);
}

std::optional<Letter> AnswerLetterAt(const std::vector<UChar32>& cps,
                                     std::size_t i, bool case_insensitive) {
  UChar32 c = cps[i];
  if (case_insensitive) c = AsciiLower(c) - 'a' + 'A';
  if (c < 'A' || c > 'D') return std::nullopt;
  if (!case_insensitive && (cps[i] < 'A' || cps[i] > 'D')) return std::nullopt;
  if (i > 0 && IsLatinLetter(cps[i - 1])) return std::nullopt;
  if (i + 1 < cps.size() && IsLatinLetter(cps[i + 1])) return std::nullopt;
  return static_cast<Letter>(c - 'A');
}

// Start index of the last case-insensitive occurrence of `needle`, if any.
std::optional<std::size_t> FindLast(const std::vector<UChar32>& hay,
                                    const std::vector<UChar32>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return std::nullopt;
  for (std::size_t start = hay.size() - needle.size() + 1; start-- > 0;) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (AsciiLower(hay[start + j]) != AsciiLower(needle[j])) {
        match = false;
        break;
      }
    }
    if (match) return start;
  }
  return std::nullopt;
}

ScriptClass ClassifyScript(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  UScriptCode script = uscript_getScript(c, &status);
  if (U_FAILURE(status)) return ScriptClass::kOther;
  switch (script) {
    case USCRIPT_LATIN: return ScriptClass::kLatin;
    case USCRIPT_HAN: return ScriptClass::kHan;
    case USCRIPT_HANGUL: return ScriptClass::kHangul;
    case USCRIPT_ARABIC: return ScriptClass::kArabic;
    default: return ScriptClass::kOther;
  }
}

}  // namespace

MarkerTable::MarkerTable(std::map<Language, std::string> markers)
    : markers_(std::move(markers)) {
  for (Language lang : kAllLanguages) {
    auto it = markers_.find(lang);
    if (it == markers_.end() || it->second.empty()) {
      throw ConfigError("marker table has no entry for " +
                        std::string(LanguageTag(lang)));
    }
  }
}

MarkerTable MarkerTable::LoadFromFile(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(ReadFileOrThrow(path));
  std::map<Language, std::string> markers;
  for (auto& [key, value] : j.items()) {
    markers[LanguageFromTag(key)] = value.get<std::string>();
  }
  return MarkerTable(std::move(markers));
}

MarkerTable MarkerTable::Defaults() {
  return MarkerTable({
      {Language::kEN, "Therefore, the answer is"},
      {Language::kZH, "因此，答案是"},
      {Language::kKO, "따라서 답은"},
      {Language::kAR, "لذلك، الإجابة هي"},
  });
}

ExtractionResult ExtractAnswer(std::string_view response,
                               const MarkerTable& markers) {
  const std::vector<UChar32> cps = DecodeFolded(response);

  std::optional<std::size_t> best_end;
  std::optional<std::size_t> best_start;
  std::optional<Language> best_lang;
  for (const auto& [lang, marker] : markers.markers()) {
    std::vector<UChar32> needle = DecodeFolded(marker);
    auto start = FindLast(cps, needle);
    if (!start) continue;
    // Latest start wins; on equal starts the longer marker wins.
    std::size_t end = *start + needle.size();
    if (!best_start || *start > *best_start ||
        (*start == *best_start && end > *best_end)) {
      best_start = start;
      best_end = end;
      best_lang = lang;
    }
  }

  ExtractionResult result;
  if (best_end) {
    result.marker_language = best_lang;
    std::set<Letter> seen;
    for (std::size_t i = *best_end; i < cps.size(); ++i) {
      if (auto letter = AnswerLetterAt(cps, i, /*case_insensitive=*/true)) {
        if (!result.letter) result.letter = letter;
        seen.insert(*letter);
      }
    }
    result.method = result.letter ? ExtractionMethod::kMarker
                                  : ExtractionMethod::kFailed;
    result.needs_audit = seen.size() > 1;
    return result;
  }

  for (std::size_t i = cps.size(); i-- > 0;) {
    if (auto letter = AnswerLetterAt(cps, i, /*case_insensitive=*/false)) {
      result.letter = letter;
      result.method = ExtractionMethod::kFallbackLastLetter;
      return result;
    }
  }
  result.method = ExtractionMethod::kFailed;
  return result;
}

ScriptHistogram BuildScriptHistogram(std::string_view text) {
  ScriptHistogram h;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) continue;
    if ((U_GET_GC_MASK(c) & U_GC_L_MASK) == 0) continue;
    ++h.counts[static_cast<std::size_t>(ClassifyScript(c))];
    ++h.total;
  }
  return h;
}

DetectedLanguage DetectLanguage(const ScriptHistogram& h) {
  if (h.total == 0) return std::nullopt;
  auto best = ScriptClass::kLatin;
  bool tie = false;
  for (std::size_t i = 1; i < kNumScriptClasses; ++i) {
    auto c = static_cast<ScriptClass>(i);
    if (h.count(c) > h.count(best)) {
      best = c;
      tie = false;
    } else if (h.count(c) == h.count(best)) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  // share > 1/2, in integers.
  if (2 * h.count(best) <= h.total) return std::nullopt;
  switch (best) {
    case ScriptClass::kLatin: return Language::kEN;
    case ScriptClass::kHan: return Language::kZH;
    case ScriptClass::kHangul: return Language::kKO;
    case ScriptClass::kArabic: return Language::kAR;
    case ScriptClass::kOther: return std::nullopt;
  }
  return std::nullopt;
}

DetectedLanguage DetectLanguage(std::string_view text) {
  return DetectLanguage(BuildScriptHistogram(text));
}

}  // namespace l2t
