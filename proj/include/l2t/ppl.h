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

// Perplexity over the user-prompt window of a trace, and the study that
// compares it across the two sides of a consistency partition.

#ifndef L2T_PPL_H_
#define L2T_PPL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "l2t/metrics.h"
#include "l2t/prompt_forge.h"
#include "l2t/provider.h"
#include "l2t/types.h"

namespace l2t {

// exp(-mean(logprobs[k..m])) with compensated summation. Throws EmptyWindow
// when k > m and InvalidTrace for any other malformed trace.
double ComputePpl(const TokenLogProbTrace& trace);

struct PplRecord {
  std::string item_id;
  L2TSetting setting;
  double ppl = 0.0;
  std::size_t k = 0;
  std::size_t m = 0;
};

enum class PartitionSide : std::uint8_t { kEnCorrectOrigWrong, kEnWrongOrigCorrect };
std::string_view PartitionSideName(PartitionSide side);

struct PplStudyRow {
  PartitionSide side;
  L2TSetting setting;
  std::size_t n_items = 0;
  // Items dropped because their trace was unavailable.
  std::size_t n_dropped = 0;
  // Arithmetic mean of per-item PPL; 0 when n_items is 0.
  double mean_ppl = 0.0;
};

struct PplStudyResult {
  std::vector<PplStudyRow> rows;
  std::vector<PplRecord> records;
};

struct PplStudyInput {
  // Original-language items keyed by their id in the partition, and the
  // English items whose paired_id names them.
  std::span<const MCQItem> orig_items;
  std::span<const MCQItem> en_items;
  ConsistencyPartition partition;
  // Each setting picks the item variant in its input language.
  std::vector<L2TSetting> settings;
  int concurrency = 1;
};

// Rows are ordered side, then settings in input order. Throws
// std::invalid_argument when a setting's input language matches neither
// variant of a partitioned item. CapabilityUnsupported propagates.
PplStudyResult RunPplStudy(const PplStudyInput& input,
                           const PromptTemplateSet& templates,
                           LogprobProvider& provider);

// partition_side,setting,n_items,n_dropped,mean_ppl
std::string RenderPplCsv(std::span<const PplStudyRow> rows);

}  // namespace l2t

#endif  // L2T_PPL_H_
