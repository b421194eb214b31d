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

// A deterministic model double whose knowledge is bound to languages: it
// answers an item correctly only when the fact is stored in the language it
// is thinking in (the thought slot, or the input language when no thought
// instruction is given).

#ifndef L2T_SCRIPTED_MODEL_H_
#define L2T_SCRIPTED_MODEL_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "l2t/prompt_forge.h"
#include "l2t/provider.h"
#include "l2t/response_analysis.h"
#include "l2t/types.h"

namespace l2t {

enum class AnswerLanguagePolicy : std::uint8_t {
  // Align answers in its output language; other settings with a thought slot
  // answer in the thought language; Baseline answers in the input language.
  kFollowInstruction,
  // Always answer in the input language.
  kInputLanguage,
};

struct ScriptedModelSpec {
  std::set<std::pair<std::string, Language>> knowledge;
  AnswerLanguagePolicy policy = AnswerLanguagePolicy::kFollowInstruction;
  // (input, effective thought) -> response language; consulted before policy.
  std::map<std::pair<Language, Language>, Language> overrides;
  Letter distractor = Letter::kA;

  bool Knows(std::string_view item_id, Language lang) const;
  Language ResponseLanguage(const L2TSetting& setting) const;

  // {"knowledge": [["q1", "KO"], ...], "policy": "follow-instruction",
  //  "overrides": [{"input": "EN", "thought": "KO", "respond": "EN"}],
  //  "distractor": "A"}
  static ScriptedModelSpec LoadFromFile(const std::filesystem::path& path);
};

// The letter the scripted model commits to for this cell. Knowledge keyed by
// either the item id or its paired_id counts.
Letter ScriptedAnswer(const ScriptedModelSpec& spec, const MCQItem& item,
                      const L2TSetting& setting);

// A short body written in the response language, ending with that language's
// marker sentence. Pure function of its arguments.
std::string ScriptedRespond(const ScriptedModelSpec& spec, const MCQItem& item,
                            const L2TSetting& setting,
                            const MarkerTable& markers);

// ChatProvider face of the scripted model. It recovers (item, setting) from
// the prompt bytes it receives by indexing every prompt the harness can
// build for the registered items, so the scheduler treats it like any other
// provider. Unknown prompts are rejected.
class ScriptedChatProvider : public ChatProvider {
 public:
  ScriptedChatProvider(ScriptedModelSpec spec, std::span<const MCQItem> items,
                       const PromptTemplateSet& templates, MarkerTable markers,
                       std::string model_id = "scripted");

  std::string provider_id() const override { return "scripted"; }
  std::string model_id() const override { return model_id_; }
  ChatReply Chat(const ChatRequest& request) override;

  std::size_t calls() const { return calls_.load(); }
  const ScriptedModelSpec& spec() const { return spec_; }

 private:
  std::optional<std::pair<std::size_t, L2TSetting>> Resolve(
      const std::string& system_prompt, const std::string& user_prompt) const;

  ScriptedModelSpec spec_;
  std::vector<MCQItem> items_;
  MarkerTable markers_;
  std::string model_id_;
  std::map<std::string, std::size_t, std::less<>> by_user_prompt_;
  std::map<Language, std::map<std::string, L2TSetting, std::less<>>> by_system_prompt_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace l2t

#endif  // L2T_SCRIPTED_MODEL_H_
