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

// Line-delimited MCQ datasets: loading, topic filtering, translated pairs
// and the manifest naming them.

#ifndef L2T_DATASET_H_
#define L2T_DATASET_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l2t/provider.h"
#include "l2t/types.h"

namespace l2t {

struct LoadedDataset {
  std::vector<MCQItem> items;
  // Items without a topic are counted under "".
  std::map<std::string, std::size_t> topic_counts;
};

// One JSON record per line; blank lines are skipped. Throws SchemaError on
// the first malformed record or duplicate id (lines are 1-based) and
// LanguageMismatch when a record declares another language.
LoadedDataset ParseDataset(std::string_view content, Language expected);
LoadedDataset LoadDataset(const std::filesystem::path& path,
                          Language expected);

std::string EmitDataset(std::span<const MCQItem> items);
void WriteDataset(const std::filesystem::path& path,
                  std::span<const MCQItem> items);

using TopicAllowlist = std::set<std::string, std::less<>>;

// Items whose topic is in the allowlist, order preserved. Topic-less items
// never pass.
std::vector<MCQItem> ApplyTopicFilter(std::span<const MCQItem> items,
                                      const TopicAllowlist& allowlist);

// The factual-topic allowlists shipped as defaults. These are the topics
// named for each language; operators extend them to hit their target counts.
TopicAllowlist DefaultTopicAllowlist(Language lang);

struct TranslationPairs {
  // Input items with paired_id pointing at their translation.
  std::vector<MCQItem> originals;
  // Translated items, id "<orig id>@<TARGET>", paired_id = original id.
  std::vector<MCQItem> translated;
};

// Question and options go through the translator; gold, dataset and topic
// are copied. TranslationMiss and TransportError are rethrown with the item
// id in the message. std::invalid_argument when an item is already in
// `target`.
TranslationPairs BuildTranslationPairs(std::span<const MCQItem> items,
                                       Translator& translator,
                                       Language target);

struct DatasetEntry {
  std::string tag;
  Language language = Language::kEN;
  std::filesystem::path path;
  // English counterpart, paired to `path` by paired_id.
  std::optional<std::filesystem::path> english_path;
  std::optional<TopicAllowlist> topics;
  std::optional<std::size_t> expected_count;
};

// {"datasets": [{"tag": "click", "language": "KO", "path": "click.jsonl",
//   "english_path": "click_en.jsonl", "topics": ["History"] | "default",
//   "expected_count": 1345}]}
// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::vector<DatasetEntry> datasets;

  static DatasetManifest LoadFromFile(const std::filesystem::path& path);
};

struct LoadedEntry {
  const DatasetEntry* entry;
  std::vector<MCQItem> orig;
  std::vector<MCQItem> english;  // empty without english_path
  std::map<std::string, std::size_t> topic_counts;  // before filtering
  // Set when expected_count is configured and differs from orig.size().
  std::optional<std::string> count_warning;
};

// Loads, filters, and keeps only English items whose pair survived the
// filter. Throws SchemaError, LanguageMismatch or ConfigError (dangling
// pairs in either direction, or gold letters that differ across a pair).
LoadedEntry LoadEntry(const DatasetEntry& entry);

}  // namespace l2t

#endif  // L2T_DATASET_H_
