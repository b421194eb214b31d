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

#include "l2t/dataset.h"

#include <stdexcept>

#include "l2t/errors.h"
#include "l2t/file_util.h"
#include "l2t/types_json.h"

namespace l2t {

namespace fs = std::filesystem;

LoadedDataset ParseDataset(std::string_view content, Language expected) {
  LoadedDataset out;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  for (const std::string& line : SplitLines(content)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw SchemaError(line_no, "not valid JSON");
    if (!j.is_object()) throw SchemaError(line_no, "record is not an object");
    if (j.contains("language") && j["language"].is_string()) {
      auto lang = ParseLanguage(j["language"].get<std::string>());
      if (!lang) {
        throw SchemaError(line_no, "unknown language '" +
                                       j["language"].get<std::string>() + "'");
      }
      if (*lang != expected) {
        throw LanguageMismatch("line " + std::to_string(line_no) +
                               ": record language " +
                               std::string(LanguageTag(*lang)) + ", expected " +
                               std::string(LanguageTag(expected)));
      }
    }
    MCQItem item;
    try {
      item = j.get<MCQItem>();
    } catch (const Json::exception& e) {
      throw SchemaError(line_no, e.what());
    } catch (const Error& e) {
      throw SchemaError(line_no, e.what());
    }
    if (!seen.insert(item.id).second) {
      throw SchemaError(line_no, "duplicate id '" + item.id + "'");
    }
    ++out.topic_counts[item.topic];
    out.items.push_back(std::move(item));
  }
  return out;
}

LoadedDataset LoadDataset(const fs::path& path, Language expected) {
  return ParseDataset(ReadFileOrThrow(path), expected);
}

std::string EmitDataset(std::span<const MCQItem> items) {
  std::string out;
  for (const MCQItem& item : items) {
    out += Json(item).dump();
    out += '\n';
  }
  return out;
}

void WriteDataset(const fs::path& path, std::span<const MCQItem> items) {
  WriteFileAtomic(path, EmitDataset(items));
}

std::vector<MCQItem> ApplyTopicFilter(std::span<const MCQItem> items,
                                      const TopicAllowlist& allowlist) {
  std::vector<MCQItem> out;
  for (const MCQItem& item : items) {
    if (!item.topic.empty() && allowlist.contains(item.topic)) {
      out.push_back(item);
    }
  }
  return out;
}

TopicAllowlist DefaultTopicAllowlist(Language lang) {
  switch (lang) {
    case Language::kZH:
      return {"Food Culture", "Foreign Policy", "History", "Literature",
              "Traditional Chinese Medicine"};
    case Language::kKO:
      return {"Economy", "Geography", "History", "Law", "Politics",
              "Popular Culture", "Society", "Tradition"};
    case Language::kAR:
      return {"Islamic Studies"};
    case Language::kEN:
      break;
  }
  return {};
}

TranslationPairs BuildTranslationPairs(std::span<const MCQItem> items,
                                       Translator& translator,
                                       Language target) {
  TranslationPairs out;
  for (const MCQItem& item : items) {
    if (item.language == target) {
      throw std::invalid_argument("item " + item.id + " is already in " +
                                  std::string(LanguageTag(target)));
    }
    MCQItem t;
    t.id = item.id + "@" + std::string(LanguageTag(target));
    t.dataset = item.dataset;
    t.topic = item.topic;
    t.language = target;
    t.gold = item.gold;
    t.paired_id = item.id;
    try {
      t.question = translator.Translate(item.question, item.language, target);
      for (const std::string& option : item.options) {
        t.options.push_back(translator.Translate(option, item.language, target));
      }
    } catch (const TranslationMiss& e) {
      throw TranslationMiss("item " + item.id + ": " + e.what());
    } catch (const TransportError& e) {
      throw TransportError("item " + item.id + ": " + e.what());
    }
    MCQItem orig = item;
    orig.paired_id = t.id;
    out.originals.push_back(std::move(orig));
    out.translated.push_back(std::move(t));
  }
  return out;
}

DatasetManifest DatasetManifest::LoadFromFile(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(ReadFileOrThrow(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  DatasetManifest manifest;
  try {
    for (const Json& d : j.at("datasets")) {
      DatasetEntry e;
      e.tag = d.at("tag").get<std::string>();
      e.language = d.at("language").get<Language>();
      e.path = resolve(d.at("path").get<std::string>());
      if (d.contains("english_path")) {
        e.english_path = resolve(d["english_path"].get<std::string>());
      }
      if (d.contains("topics")) {
        const Json& t = d["topics"];
        if (t.is_string() && t.get<std::string>() == "default") {
          e.topics = DefaultTopicAllowlist(e.language);
        } else {
          e.topics = t.get<std::set<std::string, std::less<>>>();
        }
      }
      if (d.contains("expected_count")) {
        e.expected_count = d["expected_count"].get<std::size_t>();
      }
      manifest.datasets.push_back(std::move(e));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const InvalidSetting& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return manifest;
}

LoadedEntry LoadEntry(const DatasetEntry& entry) {
  LoadedEntry out;
  out.entry = &entry;
  LoadedDataset orig = LoadDataset(entry.path, entry.language);
  out.topic_counts = orig.topic_counts;
  std::map<std::string, Letter, std::less<>> all_orig;
  for (const MCQItem& item : orig.items) all_orig.emplace(item.id, item.gold);
  out.orig = entry.topics ? ApplyTopicFilter(orig.items, *entry.topics)
                          : std::move(orig.items);
  if (entry.expected_count && *entry.expected_count != out.orig.size()) {
    out.count_warning = entry.tag + ": expected " +
                        std::to_string(*entry.expected_count) +
                        " items after filtering, found " +
                        std::to_string(out.orig.size());
  }
  if (entry.english_path) {
    std::set<std::string, std::less<>> kept;
    for (const MCQItem& item : out.orig) kept.insert(item.id);
    LoadedDataset en = LoadDataset(*entry.english_path, Language::kEN);
    std::set<std::string, std::less<>> all_en;
    for (const MCQItem& item : en.items) all_en.insert(item.id);
    for (const MCQItem& item : out.orig) {
      if (item.paired_id && !all_en.contains(*item.paired_id)) {
        throw ConfigError(entry.tag + ": item " + item.id +
                          " pairs with missing English id " + *item.paired_id);
      }
    }
    for (MCQItem& item : en.items) {
      if (!item.paired_id) {
        throw ConfigError(entry.tag + ": English item " + item.id +
                          " has no paired_id");
      }
      auto orig_it = all_orig.find(*item.paired_id);
      if (orig_it == all_orig.end()) {
        throw ConfigError(entry.tag + ": English item " + item.id +
                          " pairs with unknown id " + *item.paired_id);
      }
      if (orig_it->second != item.gold) {
        throw ConfigError(entry.tag + ": gold letters differ between " +
                          item.id + " and " + *item.paired_id);
      }
      if (kept.contains(*item.paired_id)) out.english.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace l2t
