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

#include <gtest/gtest.h>

#include "l2t/errors.h"
#include "l2t/file_util.h"
#include "l2t/prompt_forge.h"
#include "test_util.h"

namespace l2t {
namespace {

using testing::GoldenDir;
using testing::TemplateDir;

const PromptTemplateSet& Templates() {
  static const PromptTemplateSet set =
      PromptTemplateSet::LoadFromDirectory(TemplateDir());
  return set;
}

std::string Golden(const std::string& rel) {
  return ReadFileOrThrow(GoldenDir() / "system_prompts" / rel);
}

struct GoldenCase {
  std::string file;
  L2TSetting setting;
};

std::vector<GoldenCase> GoldenCases() {
  using L = Language;
  return {
      {"EN/consistent_EN.txt", L2TSetting::Consistent(L::kEN)},
      {"EN/transfer_KO.txt", L2TSetting::Transfer(L::kEN, L::kKO)},
      {"EN/align_ZH.txt", L2TSetting::Align(L::kEN, L::kZH)},
      {"EN/persona_0_EN.txt", L2TSetting::PersonaConsistent(L::kEN, 0)},
      {"EN/persona_1_EN.txt", L2TSetting::PersonaConsistent(L::kEN, 1)},
      {"EN/persona_2_EN.txt", L2TSetting::PersonaConsistent(L::kEN, 2)},
      {"EN/persona_0_AR.txt", L2TSetting::PersonaTransfer(L::kEN, L::kAR, 0)},
      {"ZH/consistent_ZH.txt", L2TSetting::Consistent(L::kZH)},
      {"ZH/transfer_EN.txt", L2TSetting::Transfer(L::kZH, L::kEN)},
      {"ZH/align_EN.txt", L2TSetting::Align(L::kZH, L::kEN)},
      {"ZH/persona_0_ZH.txt", L2TSetting::PersonaConsistent(L::kZH, 0)},
      {"ZH/persona_1_ZH.txt", L2TSetting::PersonaConsistent(L::kZH, 1)},
      {"ZH/persona_2_ZH.txt", L2TSetting::PersonaConsistent(L::kZH, 2)},
      {"KO/consistent_KO.txt", L2TSetting::Consistent(L::kKO)},
      {"KO/transfer_EN.txt", L2TSetting::Transfer(L::kKO, L::kEN)},
      {"KO/align_EN.txt", L2TSetting::Align(L::kKO, L::kEN)},
      {"KO/persona_0_KO.txt", L2TSetting::PersonaConsistent(L::kKO, 0)},
      {"KO/persona_1_KO.txt", L2TSetting::PersonaConsistent(L::kKO, 1)},
      {"KO/persona_2_KO.txt", L2TSetting::PersonaConsistent(L::kKO, 2)},
      {"AR/consistent_AR.txt", L2TSetting::Consistent(L::kAR)},
      {"AR/transfer_EN.txt", L2TSetting::Transfer(L::kAR, L::kEN)},
      {"AR/align_EN.txt", L2TSetting::Align(L::kAR, L::kEN)},
      {"AR/persona_0_AR.txt", L2TSetting::PersonaConsistent(L::kAR, 0)},
      {"AR/persona_1_AR.txt", L2TSetting::PersonaConsistent(L::kAR, 1)},
      {"AR/persona_2_AR.txt", L2TSetting::PersonaConsistent(L::kAR, 2)},
  };
}

TEST(SystemPromptTest, MatchesGoldensByteForByte) {
  for (const GoldenCase& c : GoldenCases()) {
    EXPECT_EQ(BuildSystemPrompt(c.setting, Templates()), Golden(c.file))
        << c.file;
  }
}

TEST(SystemPromptTest, AlignEnglishChinese) {
  EXPECT_EQ(BuildSystemPrompt(L2TSetting::Align(Language::kEN, Language::kZH),
                              Templates()),
            "Think in Chinese and answer in English.");
}

TEST(SystemPromptTest, BaselineIsEmpty) {
  for (Language lang : kAllLanguages) {
    EXPECT_EQ(BuildSystemPrompt(L2TSetting::Baseline(lang), Templates()), "");
  }
}

TEST(SystemPromptTest, InvalidSettingRejected) {
  L2TSetting bad{SettingKind::kTransfer, Language::kEN, Language::kEN,
                 std::nullopt, std::nullopt};
  EXPECT_THROW(BuildSystemPrompt(bad, Templates()), InvalidSetting);
}

TEST(SystemPromptTest, KoreanNamesAreInKorean) {
  EXPECT_EQ(BuildSystemPrompt(L2TSetting::Transfer(Language::kKO, Language::kZH),
                              Templates()),
            "중국어로 생각하시오.");
}

TEST(SystemPromptTest, PersonaDescriptorIsConfigurable) {
  PromptTemplateSet set = Templates();
  set.SetPersonaDescriptor(Language::kEN, Language::kKO, "a native of Seoul");
  EXPECT_EQ(BuildSystemPrompt(
                L2TSetting::PersonaTransfer(Language::kEN, Language::kKO, 2),
                set),
            "You are a native of Seoul. Your responses should closely mirror "
            "the knowledge and abilities of this persona.");
}

MCQItem EnItem() {
  MCQItem item;
  item.id = "add";
  item.language = Language::kEN;
  item.question = "2+2?";
  item.options = {"3", "4"};
  item.gold = Letter::kB;
  return item;
}

TEST(UserPromptTest, EnglishLayout) {
  EXPECT_EQ(BuildUserPrompt(EnItem(), Templates()),
            "Answer the given multiple choice question and show your work. The "
            "answer can only be an option like A, B, C, or D. You need to "
            "output the answer in your final sentence like “Therefore, the "
            "answer is ...”.\n2+2?\nA. 3\nB. 4");
}

TEST(UserPromptTest, KoreanInstructionFirst) {
  MCQItem item = EnItem();
  item.language = Language::kKO;
  item.question = "수도는?";
  std::string prompt = BuildUserPrompt(item, Templates());
  EXPECT_TRUE(prompt.starts_with("주어진 객관식 문제에 답하고, 풀이 과정을 보이시오."));
  EXPECT_TRUE(prompt.ends_with("\n수도는?\nA. 3\nB. 4"));
}

TEST(UserPromptTest, Deterministic) {
  EXPECT_EQ(BuildUserPrompt(EnItem(), Templates()),
            BuildUserPrompt(EnItem(), Templates()));
}

TEST(PromptPairTest, InputMustMatchItemLanguage) {
  EXPECT_THROW(BuildPromptPair(EnItem(), L2TSetting::Baseline(Language::kKO),
                               Templates()),
               InvalidSetting);
  PromptPair p = BuildPromptPair(
      EnItem(), L2TSetting::Align(Language::kEN, Language::kKO), Templates());
  EXPECT_EQ(p.system_prompt, "Think in Korean and answer in English.");
  PromptPair folded = FoldSystemIntoUser(p);
  EXPECT_EQ(folded.system_prompt, "");
  EXPECT_EQ(folded.user_prompt, p.system_prompt + "\n" + p.user_prompt);
  PromptPair base = BuildPromptPair(EnItem(), L2TSetting::Baseline(Language::kEN),
                                    Templates());
  EXPECT_EQ(FoldSystemIntoUser(base), base);
}

TEST(MatrixTest, TransferSkipsSameLanguage) {
  std::vector<MCQItem> items = {EnItem()};
  std::vector<SettingKind> kinds = {SettingKind::kTransfer};
  std::vector<Language> thoughts = {Language::kEN, Language::kKO};
  auto cells = EnumerateMatrix(items, kinds, thoughts);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].setting, L2TSetting::Transfer(Language::kEN, Language::kKO));
}

TEST(MatrixTest, BaselinePerItem) {
  MCQItem b = EnItem();
  b.id = "other";
  std::vector<MCQItem> items = {EnItem(), b};
  std::vector<SettingKind> kinds = {SettingKind::kBaseline};
  std::vector<Language> thoughts = {Language::kEN, Language::kKO, Language::kZH};
  auto cells = EnumerateMatrix(items, kinds, thoughts);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].item->id, "add");
  EXPECT_EQ(cells[1].item->id, "other");
}

TEST(MatrixTest, AlignChineseEnglish) {
  MCQItem item = EnItem();
  item.language = Language::kZH;
  std::vector<MCQItem> items = {item};
  std::vector<SettingKind> kinds = {SettingKind::kAlign};
  std::vector<Language> thoughts = {Language::kEN};
  auto cells = EnumerateMatrix(items, kinds, thoughts);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].setting, (L2TSetting{SettingKind::kAlign, Language::kZH,
                                          Language::kEN, Language::kZH,
                                          std::nullopt}));
}

TEST(MatrixTest, EveryCellIsValidAndOrderIsStable) {
  MCQItem ko = EnItem();
  ko.language = Language::kKO;
  ko.id = "ko";
  std::vector<MCQItem> items = {EnItem(), ko};
  std::vector<SettingKind> kinds(kAllSettingKinds.begin(),
                                 kAllSettingKinds.end());
  std::vector<Language> thoughts(kAllLanguages.begin(), kAllLanguages.end());
  auto cells = EnumerateMatrix(items, kinds, thoughts);
  // Per item: Baseline 1, Consistent 1, Transfer 3, Align 3,
  // PersonaConsistent 3, PersonaTransfer 9.
  EXPECT_EQ(cells.size(), 2u * 20u);
  for (const MatrixCell& c : cells) EXPECT_TRUE(IsValidSetting(c.setting));
  auto again = EnumerateMatrix(items, kinds, thoughts);
  ASSERT_EQ(again.size(), cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(again[i].item, cells[i].item);
    EXPECT_EQ(again[i].setting, cells[i].setting);
  }
}

TEST(TemplateLoadTest, MissingFileReported) {
  testing::ScratchDir dir("tpl");
  std::filesystem::copy(TemplateDir(), dir.path(),
                        std::filesystem::copy_options::recursive);
  std::filesystem::remove(dir / "KO" / "align.txt");
  EXPECT_THROW(PromptTemplateSet::LoadFromDirectory(dir.path()),
               MissingTemplate);
}

TEST(TemplateLoadTest, PlaceholderCountChecked) {
  testing::ScratchDir dir("tpl");
  std::filesystem::copy(TemplateDir(), dir.path(),
                        std::filesystem::copy_options::recursive);
  WriteFileAtomic(dir / "EN" / "align.txt", "Think in {thought}.\n");
  EXPECT_THROW(PromptTemplateSet::LoadFromDirectory(dir.path()), ConfigError);
}

TEST(TemplateLoadTest, TrailingNewlineStripped) {
  testing::ScratchDir dir("tpl");
  std::filesystem::copy(TemplateDir(), dir.path(),
                        std::filesystem::copy_options::recursive);
  WriteFileAtomic(dir / "EN" / "consistent.txt", "Think in {thought}.\n\n");
  auto set = PromptTemplateSet::LoadFromDirectory(dir.path());
  EXPECT_EQ(BuildSystemPrompt(L2TSetting::Consistent(Language::kEN), set),
            "Think in English.");
}

}  // namespace
}  // namespace l2t
