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

#ifndef L2T_METRICS_H_
#define L2T_METRICS_H_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "l2t/types.h"

namespace l2t {

struct RunSummary {
  L2TSetting setting;
  int run_index = 0;
  std::size_t n_items = 0;
  std::size_t n_correct = 0;
  std::size_t n_input_language = 0;
  double accuracy = 0.0;  // n_correct / n_items
  double in_ratio = 0.0;  // n_input_language / n_items; Unknown never counts
};

// All transcripts must share setting and run index (std::invalid_argument
// otherwise); throws EmptyRun for an empty span.
RunSummary SummarizeRun(std::span<const EvalTranscript> transcripts);

struct AggregateCell {
  L2TSetting setting;
  std::size_t n_items = 0;
  double mean_accuracy = 0.0;
  double accuracy_stddev = 0.0;  // sample (n-1) estimator; 0 for one run
  double mean_in_ratio = 0.0;
  std::size_t n_runs = 0;
};

// Mean and sample standard deviation over runs. Values are summed in sorted
// order, so the result does not depend on run order. Throws EmptyRun when
// `runs` is empty and std::invalid_argument when settings differ.
AggregateCell Aggregate(std::span<const RunSummary> runs);

// Signed accuracy difference cell - baseline, in the same units as the cells.
double DeltaVsBaseline(const AggregateCell& cell, const AggregateCell& baseline);

// item key -> correctness per run.
using CorrectnessGrid = std::map<std::string, std::vector<bool>>;

// Items unanimous in both conditions and in opposite directions. The first
// grid is treated as the English condition.
struct ConsistencyPartition {
  std::set<std::string> en_correct_orig_wrong;
  std::set<std::string> en_wrong_orig_correct;

  friend bool operator==(const ConsistencyPartition&,
                         const ConsistencyPartition&) = default;
};

// Throws GridMismatch when the item sets or per-item run counts differ.
ConsistencyPartition PartitionByConsistency(const CorrectnessGrid& en_runs,
                                            const CorrectnessGrid& orig_runs);

}  // namespace l2t

#endif  // L2T_METRICS_H_
