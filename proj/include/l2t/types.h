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

// Shared vocabulary: languages, prompt settings, questions, transcripts and
// token traces. Every type here is a plain value; once built it is never
// mutated, so instances can be shared freely between worker threads.

#ifndef L2T_TYPES_H_
#define L2T_TYPES_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace l2t {

enum class Language : std::uint8_t { kEN, kZH, kKO, kAR };

enum class Script : std::uint8_t { kLatin, kHan, kHangul, kArabic };

inline constexpr std::array<Language, 4> kAllLanguages = {
    Language::kEN, Language::kZH, Language::kKO, Language::kAR};

constexpr Script ScriptOf(Language lang) {
  switch (lang) {
    case Language::kEN: return Script::kLatin;
    case Language::kZH: return Script::kHan;
    case Language::kKO: return Script::kHangul;
    case Language::kAR: return Script::kArabic;
  }
  return Script::kLatin;
}

// "EN", "ZH", "KO", "AR".
std::string_view LanguageTag(Language lang);
std::optional<Language> ParseLanguage(std::string_view tag);
// Throws InvalidSetting for anything outside the closed set.
Language LanguageFromTag(std::string_view tag);
std::string_view ScriptName(Script script);

// nullopt is the "Unknown" detection result.
using DetectedLanguage = std::optional<Language>;
std::string_view DetectedTag(DetectedLanguage lang);
DetectedLanguage ParseDetectedTag(std::string_view tag);

enum class Letter : std::uint8_t { kA, kB, kC, kD };

inline constexpr std::size_t kMaxOptions = 4;

constexpr char LetterChar(Letter l) {
  return static_cast<char>('A' + static_cast<int>(l));
}
constexpr Letter LetterAt(std::size_t index) {
  return static_cast<Letter>(index);
}
constexpr std::size_t LetterIndex(Letter l) {
  return static_cast<std::size_t>(l);
}
std::optional<Letter> ParseLetter(std::string_view s);

enum class SettingKind : std::uint8_t {
  kBaseline,
  kConsistent,
  kTransfer,
  kAlign,
  kPersonaConsistent,
  kPersonaTransfer,
};

inline constexpr std::array<SettingKind, 6> kAllSettingKinds = {
    SettingKind::kBaseline,          SettingKind::kConsistent,
    SettingKind::kTransfer,          SettingKind::kAlign,
    SettingKind::kPersonaConsistent, SettingKind::kPersonaTransfer};

inline constexpr int kPersonaVariants = 3;

std::string_view SettingKindName(SettingKind kind);
std::optional<SettingKind> ParseSettingKind(std::string_view name);
constexpr bool IsPersona(SettingKind kind) {
  return kind == SettingKind::kPersonaConsistent ||
         kind == SettingKind::kPersonaTransfer;
}

// One prompt configuration in I/T/O form. `thought` and `output` are the
// optional T and O slots; for persona kinds `thought` is the persona's
// language.
struct L2TSetting {
  SettingKind kind = SettingKind::kBaseline;
  Language input = Language::kEN;
  std::optional<Language> thought;
  std::optional<Language> output;
  std::optional<int> persona_variant;

  Language EffectiveThought() const { return thought.value_or(input); }

  static L2TSetting Baseline(Language input);
  static L2TSetting Consistent(Language input);
  static L2TSetting Transfer(Language input, Language thought);
  static L2TSetting Align(Language input, Language thought);
  static L2TSetting PersonaConsistent(Language input, int variant);
  static L2TSetting PersonaTransfer(Language input, Language persona,
                                    int variant);

  friend auto operator<=>(const L2TSetting&, const L2TSetting&) = default;
};

// Throws InvalidSetting naming the first violated shape rule.
void ValidateSetting(const L2TSetting& setting);
bool IsValidSetting(const L2TSetting& setting);

// I/T/O notation, e.g. "I:EN-T:ZH-O:EN"; persona settings append "#<variant>".
std::string SettingNotation(const L2TSetting& setting);
// Filesystem-safe identifier, e.g. "align_EN_ZH_EN" or "persona-transfer_EN_AR_v1".
std::string SettingSlug(const L2TSetting& setting);

struct MCQItem {
  std::string id;
  std::string dataset;
  std::string topic;  // empty when the source carries no topic
  Language language = Language::kEN;
  std::string question;
  std::vector<std::string> options;  // options[i] is letter 'A' + i
  Letter gold = Letter::kA;
  std::optional<std::string> paired_id;

  friend bool operator==(const MCQItem&, const MCQItem&) = default;
};

// Throws InvalidItem.
void ValidateItem(const MCQItem& item);

struct RequestParams {
  int max_new_tokens = 1024;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::optional<std::int64_t> seed;

  friend bool operator==(const RequestParams&, const RequestParams&) = default;
};

enum class ExtractionMethod : std::uint8_t { kMarker, kFallbackLastLetter, kFailed };

std::string_view ExtractionMethodName(ExtractionMethod method);
std::optional<ExtractionMethod> ParseExtractionMethod(std::string_view name);

struct ExtractionResult {
  std::optional<Letter> letter;
  ExtractionMethod method = ExtractionMethod::kFailed;
  std::optional<Language> marker_language;
  // Set when more than one distinct letter follows the last marker.
  bool needs_audit = false;

  friend bool operator==(const ExtractionResult&,
                         const ExtractionResult&) = default;
};

struct EvalTranscript {
  std::string item_id;
  std::string dataset;
  L2TSetting setting;
  int run_index = 0;
  std::string system_prompt;
  std::string user_prompt;
  std::string raw_response;
  ExtractionResult extraction;
  DetectedLanguage detected_lang;
  Letter gold = Letter::kA;
  bool correct = false;
  bool truncated = false;
  RequestParams request_params;

  friend bool operator==(const EvalTranscript&,
                         const EvalTranscript&) = default;
};

// Throws InvalidItem when `correct` disagrees with the extraction or the run
// index is out of range.
void ValidateTranscript(const EvalTranscript& transcript, int run_count);

// Per-token natural-log probabilities over system + user context; [k, m] is
// the inclusive user-prompt window.
struct TokenLogProbTrace {
  std::vector<std::string> tokens;
  std::vector<double> logprobs;
  std::size_t k = 0;
  std::size_t m = 0;

  friend bool operator==(const TokenLogProbTrace&,
                         const TokenLogProbTrace&) = default;
};

// Throws InvalidTrace on length mismatch, out-of-range indices or positive
// log-probabilities, and EmptyWindow when k > m.
void ValidateTrace(const TokenLogProbTrace& trace);

}  // namespace l2t

#endif  // L2T_TYPES_H_
