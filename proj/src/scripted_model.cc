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

#include "l2t/scripted_model.h"

#include "l2t/errors.h"
#include "l2t/file_util.h"
#include "l2t/types_json.h"

namespace l2t {

namespace {

// Opening sentence of a scripted response, per response language.
std::string_view BodySentence(Language lang) {
  switch (lang) {
    case Language::kEN: return "Let me recall what I know about this question.";
    case Language::kZH: return "让我回忆一下关于这个问题的知识。";
    case Language::kKO: return "이 문제에 대해 알고 있는 내용을 떠올려 보겠습니다.";
    case Language::kAR: return "دعني أتذكر ما أعرفه عن هذا السؤال.";
  }
  return "";
}

std::string MarkerSentence(Language lang, const MarkerTable& markers,
                           Letter letter) {
  const std::string& marker = markers.Marker(lang);
  const std::string x(1, LetterChar(letter));
  switch (lang) {
    case Language::kEN: return marker + " " + x + ".";
    case Language::kZH: return marker + x + "。";
    case Language::kKO: return marker + " " + x + "입니다.";
    case Language::kAR: return marker + " " + x + ".";
  }
  return marker + " " + x;
}

std::vector<L2TSetting> AllSettingsFor(Language input) {
  std::vector<L2TSetting> out;
  out.push_back(L2TSetting::Baseline(input));
  out.push_back(L2TSetting::Consistent(input));
  for (int v = 0; v < kPersonaVariants; ++v) {
    out.push_back(L2TSetting::PersonaConsistent(input, v));
  }
  for (Language t : kAllLanguages) {
    if (t == input) continue;
    out.push_back(L2TSetting::Transfer(input, t));
    out.push_back(L2TSetting::Align(input, t));
    for (int v = 0; v < kPersonaVariants; ++v) {
      out.push_back(L2TSetting::PersonaTransfer(input, t, v));
    }
  }
  return out;
}

}  // namespace

bool ScriptedModelSpec::Knows(std::string_view item_id, Language lang) const {
  return knowledge.contains({std::string(item_id), lang});
}

Language ScriptedModelSpec::ResponseLanguage(const L2TSetting& s) const {
  auto it = overrides.find({s.input, s.EffectiveThought()});
  if (it != overrides.end()) return it->second;
  if (policy == AnswerLanguagePolicy::kInputLanguage) return s.input;
  if (s.output) return *s.output;
  return s.EffectiveThought();
}

ScriptedModelSpec ScriptedModelSpec::LoadFromFile(
    const std::filesystem::path& path) {
  Json j = Json::parse(ReadFileOrThrow(path));
  ScriptedModelSpec spec;
  for (const auto& entry : j.value("knowledge", Json::array())) {
    spec.knowledge.emplace(entry.at(0).get<std::string>(),
                           entry.at(1).get<Language>());
  }
  std::string policy = j.value("policy", std::string("follow-instruction"));
  if (policy == "follow-instruction") {
    spec.policy = AnswerLanguagePolicy::kFollowInstruction;
  } else if (policy == "input-language") {
    spec.policy = AnswerLanguagePolicy::kInputLanguage;
  } else {
    throw ConfigError("unknown scripted answer policy '" + policy + "'");
  }
  for (const auto& o : j.value("overrides", Json::array())) {
    spec.overrides[{o.at("input").get<Language>(),
                    o.at("thought").get<Language>()}] =
        o.at("respond").get<Language>();
  }
  if (j.contains("distractor")) spec.distractor = j.at("distractor").get<Letter>();
  return spec;
}

Letter ScriptedAnswer(const ScriptedModelSpec& spec, const MCQItem& item,
                      const L2TSetting& setting) {
  const Language thought = setting.EffectiveThought();
  // A translated item asks about the same fact as its original.
  const bool known = spec.Knows(item.id, thought) ||
                     (item.paired_id && spec.Knows(*item.paired_id, thought));
  return known ? item.gold : spec.distractor;
}

std::string ScriptedRespond(const ScriptedModelSpec& spec, const MCQItem& item,
                            const L2TSetting& setting,
                            const MarkerTable& markers) {
  ValidateSetting(setting);
  const Language lang = spec.ResponseLanguage(setting);
  std::string out(BodySentence(lang));
  out += lang == Language::kZH ? "" : " ";
  out += MarkerSentence(lang, markers, ScriptedAnswer(spec, item, setting));
  return out;
}

ScriptedChatProvider::ScriptedChatProvider(ScriptedModelSpec spec,
                                           std::span<const MCQItem> items,
                                           const PromptTemplateSet& templates,
                                           MarkerTable markers,
                                           std::string model_id)
    : spec_(std::move(spec)),
      items_(items.begin(), items.end()),
      markers_(std::move(markers)),
      model_id_(std::move(model_id)) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    auto [it, inserted] =
        by_user_prompt_.emplace(BuildUserPrompt(items_[i], templates), i);
    if (!inserted && items_[it->second].id != items_[i].id) {
      throw ConfigError("items " + items_[it->second].id + " and " +
                        items_[i].id + " render to the same user prompt");
    }
  }
  for (Language lang : kAllLanguages) {
    for (const L2TSetting& s : AllSettingsFor(lang)) {
      by_system_prompt_[lang].emplace(BuildSystemPrompt(s, templates), s);
    }
  }
}

std::optional<std::pair<std::size_t, L2TSetting>>
ScriptedChatProvider::Resolve(const std::string& system_prompt,
                              const std::string& user_prompt) const {
  auto item = by_user_prompt_.find(user_prompt);
  if (item == by_user_prompt_.end()) return std::nullopt;
  const auto& systems = by_system_prompt_.at(items_[item->second].language);
  auto setting = systems.find(system_prompt);
  if (setting == systems.end()) return std::nullopt;
  return std::make_pair(item->second, setting->second);
}

ChatReply ScriptedChatProvider::Chat(const ChatRequest& request) {
  ++calls_;
  auto resolved = Resolve(request.system_prompt, request.user_prompt);
  if (!resolved && request.system_prompt.empty()) {
    // System prompt folded into the user turn.
    for (const auto& [lang, systems] : by_system_prompt_) {
      for (const auto& [system, setting] : systems) {
        if (system.empty()) continue;
        const std::string prefix = system + "\n";
        if (request.user_prompt.starts_with(prefix)) {
          resolved = Resolve(system, request.user_prompt.substr(prefix.size()));
          if (resolved) break;
        }
      }
      if (resolved) break;
    }
  }
  if (!resolved) {
    throw ProviderRejection("scripted model does not recognise the prompt");
  }
  const auto& [index, setting] = *resolved;
  return {ScriptedRespond(spec_, items_[index], setting, markers_), false};
}

}  // namespace l2t
