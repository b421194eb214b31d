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

// Builds the system and user prompts for every prompt setting.
//
// Template directory layout (UTF-8, no BOM, trailing newlines stripped):
//
//   templates.json                 per-language placeholder counts
//   <LANG>/instruction.txt         instruction placed before each question
//   <LANG>/consistent.txt          "Think in {thought}." style phrases
//   <LANG>/transfer.txt
//   <LANG>/align.txt               uses {thought} and {output}
//   <LANG>/persona_<0..2>.txt      uses {persona}, possibly more than once
//   <LANG>/language_names.json     language names written in <LANG>
//   <LANG>/persona_descriptors.json  "an English speaker" style phrases
//
// Every phrase is chosen by the INPUT language; the slot values are written
// in the input language too (a Korean-input transfer says 영어, not English).

#ifndef L2T_PROMPT_FORGE_H_
#define L2T_PROMPT_FORGE_H_

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l2t/types.h"

namespace l2t {

enum class TemplateKind : std::uint8_t {
  kInstruction,
  kConsistent,
  kTransfer,
  kAlign,
  kPersona0,
  kPersona1,
  kPersona2,
};

inline constexpr std::size_t kNumTemplateKinds = 7;

// File stem, e.g. "consistent" or "persona_1".
std::string_view TemplateKindName(TemplateKind kind);

struct LanguageTemplates {
  std::array<std::string, kNumTemplateKinds> text;
  std::map<Language, std::string> language_names;
  std::map<Language, std::string> persona_descriptors;
};

class PromptTemplateSet {
 public:
  // Throws MissingTemplate when a file is absent or empty, and ConfigError
  // when placeholders disagree with templates.json.
  static PromptTemplateSet LoadFromDirectory(const std::filesystem::path& dir);

  // Builds a set from in-memory tables; runs the same checks as loading.
  static PromptTemplateSet FromTables(std::map<Language, LanguageTemplates> tables);

  const std::string& Text(Language lang, TemplateKind kind) const;
  const std::string& LanguageName(Language in_language, Language named) const;
  const std::string& PersonaDescriptor(Language in_language,
                                       Language persona) const;

  // Overrides one persona descriptor (descriptors are configurable).
  void SetPersonaDescriptor(Language in_language, Language persona,
                            std::string descriptor);

 private:
  void CheckComplete() const;

  std::map<Language, LanguageTemplates> tables_;
};

struct PromptPair {
  std::string system_prompt;
  std::string user_prompt;

  friend bool operator==(const PromptPair&, const PromptPair&) = default;
};

// Baseline yields an empty string. Throws InvalidSetting for invalid settings
// and MissingTemplate when a table cell is absent.
std::string BuildSystemPrompt(const L2TSetting& setting,
                              const PromptTemplateSet& templates);

// instruction, question and "A. text" option lines joined by single newlines.
std::string BuildUserPrompt(const MCQItem& item,
                            const PromptTemplateSet& templates);

PromptPair BuildPromptPair(const MCQItem& item, const L2TSetting& setting,
                           const PromptTemplateSet& templates);

// For providers without a system role: the system prompt, when non-empty, is
// moved to the front of the user prompt followed by a newline.
PromptPair FoldSystemIntoUser(const PromptPair& pair);

inline constexpr std::array<int, 3> kDefaultPersonaVariants = {0, 1, 2};

struct MatrixCell {
  const MCQItem* item;
  L2TSetting setting;
};

// Ordered item x kind x thought language x persona variant. Combinations that
// fail ValidateSetting are skipped. Baseline, Consistent and
// PersonaConsistent have their thought slot fixed by the input language, so
// they appear once per item (per variant) whatever `thought_langs` holds.
std::vector<MatrixCell> EnumerateMatrix(
    std::span<const MCQItem> items, std::span<const SettingKind> kinds,
    std::span<const Language> thought_langs,
    std::span<const int> persona_variants = kDefaultPersonaVariants);

}  // namespace l2t

#endif  // L2T_PROMPT_FORGE_H_
