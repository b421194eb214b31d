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

#include "l2t/corpus.h"

#include <stdexcept>

#include "l2t/errors.h"
#include "l2t/hashing.h"
#include "l2t/types_json.h"

namespace l2t {

namespace {

std::string_view EnglishLanguageName(Language lang) {
  switch (lang) {
    case Language::kEN: return "English";
    case Language::kZH: return "Chinese";
    case Language::kKO: return "Korean";
    case Language::kAR: return "Arabic";
  }
  return "";
}

bool IsPrefixKind(CorpusKind kind) {
  return kind == CorpusKind::kL2TPrefixOrig || kind == CorpusKind::kL2TPrefixEN;
}

}  // namespace

std::string_view CorpusKindName(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kOrigOnly: return "orig-only";
    case CorpusKind::kTranslatedEN: return "translated-en";
    case CorpusKind::kL2TPrefixOrig: return "l2t-prefix-orig";
    case CorpusKind::kL2TPrefixEN: return "l2t-prefix-en";
  }
  return "";
}

std::optional<CorpusKind> ParseCorpusKind(std::string_view name) {
  for (CorpusKind k : {CorpusKind::kOrigOnly, CorpusKind::kTranslatedEN,
                       CorpusKind::kL2TPrefixOrig, CorpusKind::kL2TPrefixEN}) {
    if (CorpusKindName(k) == name) return k;
  }
  return std::nullopt;
}

std::string DefaultCorpusPrefix(CorpusKind kind, Language source) {
  switch (kind) {
    case CorpusKind::kL2TPrefixOrig:
      return "Let's think in " + std::string(EnglishLanguageName(source)) + ".";
    case CorpusKind::kL2TPrefixEN:
      return "Let's think in English.";
    default:
      return "";
  }
}

std::string EffectivePrefix(const CorpusConfig& config) {
  if (!IsPrefixKind(config.kind)) return "";
  return config.prefix ? *config.prefix
                       : DefaultCorpusPrefix(config.kind, config.source_language);
}

std::vector<std::string> BuildCorpus(std::span<const std::string> statements,
                                     const CorpusConfig& config,
                                     Translator* translator) {
  if (statements.empty()) throw std::invalid_argument("no statements");
  for (std::size_t i = 0; i < statements.size(); ++i) {
    if (statements[i].find('\n') != std::string::npos) {
      throw std::invalid_argument("statement " + std::to_string(i) +
                                  " contains a newline");
    }
  }
  const std::string prefix = EffectivePrefix(config);
  if (IsPrefixKind(config.kind) && prefix.empty()) {
    throw std::invalid_argument("prefix corpus needs a non-empty prefix");
  }
  std::vector<std::string> out;
  out.reserve(statements.size());
  for (std::size_t i = 0; i < statements.size(); ++i) {
    const std::string& s = statements[i];
    switch (config.kind) {
      case CorpusKind::kOrigOnly:
        out.push_back(s);
        break;
      case CorpusKind::kTranslatedEN: {
        if (translator == nullptr) {
          throw std::invalid_argument("translated corpus needs a translator");
        }
        try {
          out.push_back(
              translator->Translate(s, config.source_language, Language::kEN));
        } catch (const TranslationMiss& e) {
          throw TranslationMiss("line " + std::to_string(i) + ": " + e.what());
        } catch (const TransportError& e) {
          throw TransportError("line " + std::to_string(i) + ": " + e.what());
        }
        break;
      }
      case CorpusKind::kL2TPrefixOrig:
      case CorpusKind::kL2TPrefixEN:
        out.push_back(config.placement == PrefixPlacement::kPrepend
                          ? prefix + " " + s
                          : s + " " + prefix);
        break;
    }
  }
  return out;
}

std::optional<std::string> StripCorpusPrefix(std::string_view line,
                                             const CorpusConfig& config) {
  const std::string prefix = EffectivePrefix(config);
  if (prefix.empty()) return std::string(line);
  if (config.placement == PrefixPlacement::kPrepend) {
    const std::string head = prefix + " ";
    if (!line.starts_with(head)) return std::nullopt;
    return std::string(line.substr(head.size()));
  }
  const std::string tail = " " + prefix;
  if (!line.ends_with(tail)) return std::nullopt;
  return std::string(line.substr(0, line.size() - tail.size()));
}

std::string JoinCorpus(std::span<const std::string> lines) {
  std::string out;
  for (const std::string& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string CorpusManifestJson(std::span<const std::string> lines,
                               const CorpusConfig& config) {
  const std::string prefix = EffectivePrefix(config);
  Json j;
  j["kind"] = CorpusKindName(config.kind);
  j["source_language"] = config.source_language;
  j["count"] = lines.size();
  j["prefix"] = prefix;
  j["prefix_bytes"] = prefix.size();
  j["placement"] =
      config.placement == PrefixPlacement::kPrepend ? "prepend" : "append";
  j["sha256"] = Sha256Hex(JoinCorpus(lines));
  return j.dump(2) + "\n";
}

}  // namespace l2t
