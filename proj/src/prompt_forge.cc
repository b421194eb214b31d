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

#include "l2t/prompt_forge.h"

#include <json.hpp>

#include "l2t/errors.h"
#include "l2t/file_util.h"

namespace l2t {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kThoughtSlot = "{thought}";
constexpr std::string_view kOutputSlot = "{output}";
constexpr std::string_view kPersonaSlot = "{persona}";
constexpr std::string_view kNewline = "\n";

constexpr std::array<TemplateKind, kNumTemplateKinds> kAllTemplateKinds = {
    TemplateKind::kInstruction, TemplateKind::kConsistent,
    TemplateKind::kTransfer,    TemplateKind::kAlign,
    TemplateKind::kPersona0,    TemplateKind::kPersona1,
    TemplateKind::kPersona2};

std::size_t CountOccurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string ReplaceAll(std::string text, std::string_view needle,
                       std::string_view value) {
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + value.size())) {
    text.replace(pos, needle.size(), value);
  }
  return text;
}

std::string MissingMessage(Language lang, std::string_view what) {
  return "missing template " + std::string(LanguageTag(lang)) + "/" +
         std::string(what);
}

std::string ReadTemplateFile(const fs::path& path, Language lang,
                             std::string_view what) {
  auto content = TryReadFile(path);
  if (!content) throw MissingTemplate(MissingMessage(lang, what));
  if (content->starts_with("\xEF\xBB\xBF")) {
    throw ConfigError(path.string() + " starts with a byte-order mark");
  }
  return std::string(StripTrailingNewlines(*content));
}

std::map<Language, std::string> ReadLanguageMap(const fs::path& path,
                                                Language lang,
                                                std::string_view what) {
  auto content = TryReadFile(path);
  if (!content) throw MissingTemplate(MissingMessage(lang, what));
  std::map<Language, std::string> out;
  auto j = nlohmann::json::parse(*content);
  for (auto& [key, value] : j.items()) {
    out[LanguageFromTag(key)] = value.get<std::string>();
  }
  return out;
}

// Number of language mentions each L2T phrase must carry.
std::size_t ExpectedMentions(TemplateKind kind) {
  return kind == TemplateKind::kAlign ? 2 : 1;
}

void CheckMentions(Language lang, TemplateKind kind, std::string_view text,
                   std::size_t declared) {
  std::string where = std::string(LanguageTag(lang)) + "/" +
                      std::string(TemplateKindName(kind));
  if (declared != ExpectedMentions(kind)) {
    throw ConfigError("templates.json declares " + std::to_string(declared) +
                      " language mentions for " + where + ", expected " +
                      std::to_string(ExpectedMentions(kind)));
  }
  std::size_t thought = CountOccurrences(text, kThoughtSlot);
  std::size_t output = CountOccurrences(text, kOutputSlot);
  bool ok = kind == TemplateKind::kAlign ? (thought == 1 && output == 1)
                                         : (thought == 1 && output == 0);
  if (!ok || thought + output != declared) {
    throw ConfigError(where + " placeholders do not match its declared " +
                      std::to_string(declared) + " language mention(s)");
  }
}

TemplateKind PersonaTemplate(int variant) {
  return static_cast<TemplateKind>(
      static_cast<int>(TemplateKind::kPersona0) + variant);
}

}  // namespace

std::string_view TemplateKindName(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::kInstruction: return "instruction";
    case TemplateKind::kConsistent: return "consistent";
    case TemplateKind::kTransfer: return "transfer";
    case TemplateKind::kAlign: return "align";
    case TemplateKind::kPersona0: return "persona_0";
    case TemplateKind::kPersona1: return "persona_1";
    case TemplateKind::kPersona2: return "persona_2";
  }
  return "??";
}

PromptTemplateSet PromptTemplateSet::LoadFromDirectory(const fs::path& dir) {
  auto meta_text = TryReadFile(dir / "templates.json");
  if (!meta_text) {
    throw ConfigError("template directory " + dir.string() +
                      " has no templates.json");
  }
  auto meta = nlohmann::json::parse(*meta_text);

  std::map<Language, LanguageTemplates> tables;
  for (Language lang : kAllLanguages) {
    fs::path lang_dir = dir / std::string(LanguageTag(lang));
    LanguageTemplates t;
    for (TemplateKind kind : kAllTemplateKinds) {
      std::string name(TemplateKindName(kind));
      t.text[static_cast<std::size_t>(kind)] =
          ReadTemplateFile(lang_dir / (name + ".txt"), lang, name);
    }
    t.language_names = ReadLanguageMap(lang_dir / "language_names.json", lang,
                                       "language_names");
    t.persona_descriptors = ReadLanguageMap(
        lang_dir / "persona_descriptors.json", lang, "persona_descriptors");

    const auto& mentions =
        meta.at("languages").at(std::string(LanguageTag(lang))).at("mentions");
    for (TemplateKind kind : {TemplateKind::kConsistent, TemplateKind::kTransfer,
                              TemplateKind::kAlign}) {
      CheckMentions(lang, kind, t.text[static_cast<std::size_t>(kind)],
                    mentions.at(std::string(TemplateKindName(kind)))
                        .get<std::size_t>());
    }
    tables.emplace(lang, std::move(t));
  }
  return FromTables(std::move(tables));
}

PromptTemplateSet PromptTemplateSet::FromTables(
    std::map<Language, LanguageTemplates> tables) {
  PromptTemplateSet set;
  set.tables_ = std::move(tables);
  set.CheckComplete();
  return set;
}

void PromptTemplateSet::CheckComplete() const {
  for (Language lang : kAllLanguages) {
    auto it = tables_.find(lang);
    if (it == tables_.end()) {
      throw MissingTemplate(MissingMessage(lang, "*"));
    }
    for (TemplateKind kind : kAllTemplateKinds) {
      if (it->second.text[static_cast<std::size_t>(kind)].empty()) {
        throw MissingTemplate(MissingMessage(lang, TemplateKindName(kind)));
      }
    }
    for (TemplateKind kind : {TemplateKind::kPersona0, TemplateKind::kPersona1,
                              TemplateKind::kPersona2}) {
      if (CountOccurrences(it->second.text[static_cast<std::size_t>(kind)],
                           kPersonaSlot) == 0) {
        throw ConfigError(MissingMessage(lang, TemplateKindName(kind)) +
                          " has no {persona} placeholder");
      }
    }
    for (Language named : kAllLanguages) {
      auto name = it->second.language_names.find(named);
      if (name == it->second.language_names.end() || name->second.empty()) {
        throw MissingTemplate(MissingMessage(lang, "language_names") + "[" +
                              std::string(LanguageTag(named)) + "]");
      }
      auto desc = it->second.persona_descriptors.find(named);
      if (desc == it->second.persona_descriptors.end() ||
          desc->second.empty()) {
        throw MissingTemplate(MissingMessage(lang, "persona_descriptors") +
                              "[" + std::string(LanguageTag(named)) + "]");
      }
    }
  }
}

const std::string& PromptTemplateSet::Text(Language lang,
                                           TemplateKind kind) const {
  auto it = tables_.find(lang);
  if (it == tables_.end() ||
      it->second.text[static_cast<std::size_t>(kind)].empty()) {
    throw MissingTemplate(MissingMessage(lang, TemplateKindName(kind)));
  }
  return it->second.text[static_cast<std::size_t>(kind)];
}

const std::string& PromptTemplateSet::LanguageName(Language in_language,
                                                   Language named) const {
  auto it = tables_.find(in_language);
  if (it != tables_.end()) {
    auto name = it->second.language_names.find(named);
    if (name != it->second.language_names.end()) return name->second;
  }
  throw MissingTemplate(MissingMessage(in_language, "language_names"));
}

const std::string& PromptTemplateSet::PersonaDescriptor(
    Language in_language, Language persona) const {
  auto it = tables_.find(in_language);
  if (it != tables_.end()) {
    auto desc = it->second.persona_descriptors.find(persona);
    if (desc != it->second.persona_descriptors.end()) return desc->second;
  }
  throw MissingTemplate(MissingMessage(in_language, "persona_descriptors"));
}

void PromptTemplateSet::SetPersonaDescriptor(Language in_language,
                                             Language persona,
                                             std::string descriptor) {
  if (descriptor.empty()) {
    throw ConfigError("persona descriptor must not be empty");
  }
  tables_[in_language].persona_descriptors[persona] = std::move(descriptor);
}

std::string BuildSystemPrompt(const L2TSetting& setting,
                              const PromptTemplateSet& templates) {
  ValidateSetting(setting);
  const Language in = setting.input;
  switch (setting.kind) {
    case SettingKind::kBaseline:
      return std::string();
    case SettingKind::kConsistent:
    case SettingKind::kTransfer: {
      auto kind = setting.kind == SettingKind::kConsistent
                      ? TemplateKind::kConsistent
                      : TemplateKind::kTransfer;
      return ReplaceAll(templates.Text(in, kind), kThoughtSlot,
                        templates.LanguageName(in, *setting.thought));
    }
    case SettingKind::kAlign: {
      std::string text = ReplaceAll(templates.Text(in, TemplateKind::kAlign),
                                    kThoughtSlot,
                                    templates.LanguageName(in, *setting.thought));
      return ReplaceAll(std::move(text), kOutputSlot,
                        templates.LanguageName(in, *setting.output));
    }
    case SettingKind::kPersonaConsistent:
    case SettingKind::kPersonaTransfer:
      return ReplaceAll(
          templates.Text(in, PersonaTemplate(*setting.persona_variant)),
          kPersonaSlot, templates.PersonaDescriptor(in, *setting.thought));
  }
  throw InvalidSetting("unknown setting kind");
}

std::string BuildUserPrompt(const MCQItem& item,
                            const PromptTemplateSet& templates) {
  ValidateItem(item);
  std::string out = templates.Text(item.language, TemplateKind::kInstruction);
  out += kNewline;
  out += item.question;
  for (std::size_t i = 0; i < item.options.size(); ++i) {
    out += kNewline;
    out += LetterChar(LetterAt(i));
    out += ". ";
    out += item.options[i];
  }
  return out;
}

PromptPair BuildPromptPair(const MCQItem& item, const L2TSetting& setting,
                           const PromptTemplateSet& templates) {
  if (setting.input != item.language) {
    throw InvalidSetting("setting input language " +
                         std::string(LanguageTag(setting.input)) +
                         " does not match item " + item.id);
  }
  return {BuildSystemPrompt(setting, templates),
          BuildUserPrompt(item, templates)};
}

PromptPair FoldSystemIntoUser(const PromptPair& pair) {
  if (pair.system_prompt.empty()) return pair;
  return {std::string(),
          pair.system_prompt + std::string(kNewline) + pair.user_prompt};
}

std::vector<MatrixCell> EnumerateMatrix(std::span<const MCQItem> items,
                                        std::span<const SettingKind> kinds,
                                        std::span<const Language> thought_langs,
                                        std::span<const int> persona_variants) {
  std::vector<MatrixCell> cells;
  auto emit = [&cells](const MCQItem& item, const L2TSetting& s) {
    if (IsValidSetting(s)) cells.push_back({&item, s});
  };
  for (const MCQItem& item : items) {
    const Language in = item.language;
    for (SettingKind kind : kinds) {
      switch (kind) {
        case SettingKind::kBaseline:
          emit(item, L2TSetting::Baseline(in));
          break;
        case SettingKind::kConsistent:
          emit(item, L2TSetting::Consistent(in));
          break;
        case SettingKind::kTransfer:
          for (Language t : thought_langs) emit(item, L2TSetting::Transfer(in, t));
          break;
        case SettingKind::kAlign:
          for (Language t : thought_langs) emit(item, L2TSetting::Align(in, t));
          break;
        case SettingKind::kPersonaConsistent:
          for (int v : persona_variants) {
            emit(item, L2TSetting::PersonaConsistent(in, v));
          }
          break;
        case SettingKind::kPersonaTransfer:
          for (Language t : thought_langs) {
            for (int v : persona_variants) {
              emit(item, L2TSetting::PersonaTransfer(in, t, v));
            }
          }
          break;
      }
    }
  }
  return cells;
}

}  // namespace l2t
