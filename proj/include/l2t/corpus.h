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

// Continued-pretraining corpora built from a file of monolingual statements.

#ifndef L2T_CORPUS_H_
#define L2T_CORPUS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "l2t/provider.h"
#include "l2t/types.h"

namespace l2t {

enum class CorpusKind : std::uint8_t {
  kOrigOnly,
  kTranslatedEN,
  kL2TPrefixOrig,
  kL2TPrefixEN,
};
std::string_view CorpusKindName(CorpusKind kind);
// "orig-only", "translated-en", "l2t-prefix-orig", "l2t-prefix-en".
std::optional<CorpusKind> ParseCorpusKind(std::string_view name);

enum class PrefixPlacement : std::uint8_t { kPrepend, kAppend };

struct CorpusConfig {
  CorpusKind kind = CorpusKind::kOrigOnly;
  Language source_language = Language::kKO;
  // Overrides the default prefix for the two prefix kinds.
  std::optional<std::string> prefix;
  PrefixPlacement placement = PrefixPlacement::kPrepend;
};

// "Let's think in Korean." style sentence naming the thought language in
// English. Empty for the non-prefix kinds.
std::string DefaultCorpusPrefix(CorpusKind kind, Language source);
std::string EffectivePrefix(const CorpusConfig& config);

// Throws std::invalid_argument for an empty statement list, a statement
// containing a newline, or a prefix kind with an empty prefix. Translation
// failures are rethrown with the 0-based line index. `translator` is only
// consulted for kTranslatedEN and may be null otherwise.
std::vector<std::string> BuildCorpus(std::span<const std::string> statements,
                                     const CorpusConfig& config,
                                     Translator* translator);

// Inverse of the prefix step: the statement a prefixed line came from.
// std::nullopt when the line does not carry the prefix.
std::optional<std::string> StripCorpusPrefix(std::string_view line,
                                             const CorpusConfig& config);

// One line per record, each newline-terminated.
std::string JoinCorpus(std::span<const std::string> lines);

// {"kind", "source_language", "count", "prefix", "prefix_bytes",
//  "placement", "sha256"}; sha256 is over JoinCorpus(lines).
std::string CorpusManifestJson(std::span<const std::string> lines,
                               const CorpusConfig& config);

}  // namespace l2t

#endif  // L2T_CORPUS_H_
