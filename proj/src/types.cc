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

#include "l2t/types.h"

#include <cmath>
#include <string>

#include "l2t/errors.h"

namespace l2t {

std::string_view LanguageTag(Language lang) {
  switch (lang) {
    case Language::kEN: return "EN";
    case Language::kZH: return "ZH";
    case Language::kKO: return "KO";
    case Language::kAR: return "AR";
  }
  return "??";
}

std::optional<Language> ParseLanguage(std::string_view tag) {
  for (Language lang : kAllLanguages) {
    if (LanguageTag(lang) == tag) return lang;
  }
  return std::nullopt;
}

Language LanguageFromTag(std::string_view tag) {
  auto lang = ParseLanguage(tag);
  if (!lang) {
    throw InvalidSetting("unsupported language code '" + std::string(tag) +
                         "'");
  }
  return *lang;
}

std::string_view ScriptName(Script script) {
  switch (script) {
    case Script::kLatin: return "Latin";
    case Script::kHan: return "Han";
    case Script::kHangul: return "Hangul";
    case Script::kArabic: return "Arabic";
  }
  return "??";
}

std::string_view DetectedTag(DetectedLanguage lang) {
  return lang ? LanguageTag(*lang) : std::string_view("Unknown");
}

DetectedLanguage ParseDetectedTag(std::string_view tag) {
  if (tag == "Unknown") return std::nullopt;
  return LanguageFromTag(tag);
}

std::optional<Letter> ParseLetter(std::string_view s) {
  if (s.size() != 1) return std::nullopt;
  char c = s[0];
  if (c < 'A' || c > 'D') return std::nullopt;
  return static_cast<Letter>(c - 'A');
}

std::string_view SettingKindName(SettingKind kind) {
  switch (kind) {
    case SettingKind::kBaseline: return "Baseline";
    case SettingKind::kConsistent: return "Consistent";
    case SettingKind::kTransfer: return "Transfer";
    case SettingKind::kAlign: return "Align";
    case SettingKind::kPersonaConsistent: return "PersonaConsistent";
    case SettingKind::kPersonaTransfer: return "PersonaTransfer";
  }
  return "??";
}

std::optional<SettingKind> ParseSettingKind(std::string_view name) {
  for (SettingKind kind : kAllSettingKinds) {
    if (SettingKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

L2TSetting L2TSetting::Baseline(Language input) {
  return {SettingKind::kBaseline, input, std::nullopt, std::nullopt,
          std::nullopt};
}

L2TSetting L2TSetting::Consistent(Language input) {
  return {SettingKind::kConsistent, input, input, std::nullopt, std::nullopt};
}

L2TSetting L2TSetting::Transfer(Language input, Language thought) {
  return {SettingKind::kTransfer, input, thought, std::nullopt, std::nullopt};
}

L2TSetting L2TSetting::Align(Language input, Language thought) {
  return {SettingKind::kAlign, input, thought, input, std::nullopt};
}

L2TSetting L2TSetting::PersonaConsistent(Language input, int variant) {
  return {SettingKind::kPersonaConsistent, input, input, std::nullopt,
          variant};
}

L2TSetting L2TSetting::PersonaTransfer(Language input, Language persona,
                                       int variant) {
  return {SettingKind::kPersonaTransfer, input, persona, std::nullopt,
          variant};
}

namespace {

void Fail(const char* reason) { throw InvalidSetting(reason); }

}  // namespace

void ValidateSetting(const L2TSetting& s) {
  if (IsPersona(s.kind)) {
    if (!s.persona_variant) Fail("persona setting needs a variant");
    if (*s.persona_variant < 0 || *s.persona_variant >= kPersonaVariants) {
      Fail("persona variant out of range");
    }
  } else if (s.persona_variant) {
    Fail("only persona settings carry a variant");
  }

  switch (s.kind) {
    case SettingKind::kBaseline:
      if (s.thought) Fail("baseline has no thought slot");
      if (s.output) Fail("baseline has no output slot");
      return;
    case SettingKind::kConsistent:
    case SettingKind::kPersonaConsistent:
      if (!s.thought) Fail("consistent needs a thought language");
      if (*s.thought != s.input) Fail("thought must equal input");
      if (s.output) Fail("consistent has no output slot");
      return;
    case SettingKind::kTransfer:
    case SettingKind::kPersonaTransfer:
      if (!s.thought) Fail("transfer needs a thought language");
      if (*s.thought == s.input) Fail("thought must differ");
      if (s.output) Fail("transfer has no output slot");
      return;
    case SettingKind::kAlign:
      if (!s.thought) Fail("align needs a thought language");
      if (*s.thought == s.input) Fail("thought must differ");
      if (!s.output || *s.output != s.input) {
        Fail("align output must equal input");
      }
      return;
  }
  Fail("unknown setting kind");
}

bool IsValidSetting(const L2TSetting& setting) {
  try {
    ValidateSetting(setting);
    return true;
  } catch (const InvalidSetting&) {
    return false;
  }
}

std::string SettingNotation(const L2TSetting& s) {
  std::string out = "I:";
  out += LanguageTag(s.input);
  if (s.thought) {
    out += "-T:";
    out += LanguageTag(*s.thought);
  }
  if (s.output) {
    out += "-O:";
    out += LanguageTag(*s.output);
  }
  if (s.persona_variant) out += "#" + std::to_string(*s.persona_variant);
  return out;
}

std::string SettingSlug(const L2TSetting& s) {
  std::string out;
  switch (s.kind) {
    case SettingKind::kBaseline: out = "baseline"; break;
    case SettingKind::kConsistent: out = "consistent"; break;
    case SettingKind::kTransfer: out = "transfer"; break;
    case SettingKind::kAlign: out = "align"; break;
    case SettingKind::kPersonaConsistent: out = "persona-consistent"; break;
    case SettingKind::kPersonaTransfer: out = "persona-transfer"; break;
  }
  out += "_";
  out += LanguageTag(s.input);
  if (s.thought) {
    out += "_";
    out += LanguageTag(*s.thought);
  }
  if (s.output) {
    out += "_";
    out += LanguageTag(*s.output);
  }
  if (s.persona_variant) out += "_v" + std::to_string(*s.persona_variant);
  return out;
}

void ValidateItem(const MCQItem& item) {
  if (item.id.empty()) throw InvalidItem("item id is empty");
  if (item.options.empty()) {
    throw InvalidItem("item " + item.id + " has no options");
  }
  if (item.options.size() > kMaxOptions) {
    throw InvalidItem("item " + item.id + " has more than 4 options");
  }
  if (LetterIndex(item.gold) >= item.options.size()) {
    throw InvalidItem("item " + item.id + " gold letter has no option");
  }
}

std::string_view ExtractionMethodName(ExtractionMethod method) {
  switch (method) {
    case ExtractionMethod::kMarker: return "marker";
    case ExtractionMethod::kFallbackLastLetter: return "fallback-last-letter";
    case ExtractionMethod::kFailed: return "failed";
  }
  return "??";
}

std::optional<ExtractionMethod> ParseExtractionMethod(std::string_view name) {
  for (auto m : {ExtractionMethod::kMarker, ExtractionMethod::kFallbackLastLetter,
                 ExtractionMethod::kFailed}) {
    if (ExtractionMethodName(m) == name) return m;
  }
  return std::nullopt;
}

void ValidateTranscript(const EvalTranscript& t, int run_count) {
  if (t.run_index < 0 || t.run_index >= run_count) {
    throw InvalidItem("transcript " + t.item_id + " run index out of range");
  }
  bool expected = t.extraction.letter && *t.extraction.letter == t.gold;
  if (t.correct != expected) {
    throw InvalidItem("transcript " + t.item_id +
                      " correctness disagrees with extraction");
  }
  if ((t.extraction.method == ExtractionMethod::kFailed) !=
      !t.extraction.letter) {
    throw InvalidItem("transcript " + t.item_id +
                      " extraction method disagrees with letter");
  }
}

void ValidateTrace(const TokenLogProbTrace& trace) {
  if (trace.tokens.size() != trace.logprobs.size()) {
    throw InvalidTrace("token and logprob counts differ");
  }
  if (trace.k > trace.m) throw EmptyWindow("empty user-prompt window (k > m)");
  if (trace.m >= trace.tokens.size()) {
    throw InvalidTrace("user-prompt window exceeds trace length");
  }
  for (double lp : trace.logprobs) {
    if (!(lp <= 0.0) || std::isinf(lp)) {
      throw InvalidTrace("log-probabilities must be finite and <= 0");
    }
  }
}

}  // namespace l2t
