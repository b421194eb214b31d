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

// CSV and Markdown rendering of aggregate results. Output is a pure function
// of the input rows, so reports are byte-stable across reruns.

#ifndef L2T_REPORT_H_
#define L2T_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l2t/metrics.h"

namespace l2t {

// 0.57641 -> "57.64".
std::string FormatPercent(double ratio);
// "60.47 (±0.77)".
std::string FormatMeanStd(double mean_ratio, double stddev_ratio);
// Signed, "+1.64" / "-0.51" / "+0.00".
std::string FormatSignedPercent(double ratio);

struct ReportRow {
  std::string dataset;
  AggregateCell cell;
  // Accuracy delta against the Baseline cell with the same dataset and input.
  std::optional<double> delta_vs_baseline;
};

// Sorts rows into report order and fills delta_vs_baseline.
std::vector<ReportRow> PrepareReportRows(std::vector<ReportRow> rows);

// Header: dataset,kind,setting,input,thought,output,persona_variant,n_items,
// n_runs,acc_mean_pct,acc_std_pct,in_pct,delta_vs_baseline_pct
std::string RenderAggregateCsv(std::span<const ReportRow> rows);

// One section per dataset, one table per setting kind with Acc / IN % columns.
std::string RenderAggregateMarkdown(std::string_view model_id,
                                    std::span<const ReportRow> rows);

struct ConsistencyCountRow {
  Language orig_language = Language::kKO;
  std::size_t en_correct_orig_wrong = 0;
  std::size_t en_wrong_orig_correct = 0;
};

// Columns "EN O / Orig X" and "EN X / Orig O", rows "EN vs. KO".
std::string RenderConsistencyCsv(std::span<const ConsistencyCountRow> rows);
std::string RenderConsistencyMarkdown(std::span<const ConsistencyCountRow> rows);

}  // namespace l2t

#endif  // L2T_REPORT_H_
