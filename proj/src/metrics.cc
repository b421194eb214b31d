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

#include "l2t/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "l2t/errors.h"

namespace l2t {

namespace {

double SortedSum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

double SortedMean(const std::vector<double>& values) {
  return SortedSum(values) / static_cast<double>(values.size());
}

}  // namespace

RunSummary SummarizeRun(std::span<const EvalTranscript> transcripts) {
  if (transcripts.empty()) throw EmptyRun("run has no transcripts");
  RunSummary s;
  s.setting = transcripts.front().setting;
  s.run_index = transcripts.front().run_index;
  for (const EvalTranscript& t : transcripts) {
    if (t.setting != s.setting || t.run_index != s.run_index) {
      throw std::invalid_argument(
          "transcripts of one run must share setting and run index");
    }
    ++s.n_items;
    if (t.correct) ++s.n_correct;
    if (t.detected_lang && *t.detected_lang == s.setting.input) {
      ++s.n_input_language;
    }
  }
  const auto n = static_cast<double>(s.n_items);
  s.accuracy = static_cast<double>(s.n_correct) / n;
  s.in_ratio = static_cast<double>(s.n_input_language) / n;
  return s;
}

AggregateCell Aggregate(std::span<const RunSummary> runs) {
  if (runs.empty()) throw EmptyRun("nothing to aggregate");
  AggregateCell cell;
  cell.setting = runs.front().setting;
  cell.n_items = runs.front().n_items;
  cell.n_runs = runs.size();

  std::vector<double> acc;
  std::vector<double> in;
  for (const RunSummary& r : runs) {
    if (r.setting != cell.setting) {
      throw std::invalid_argument("aggregated runs must share a setting");
    }
    acc.push_back(r.accuracy);
    in.push_back(r.in_ratio);
  }
  cell.mean_accuracy = SortedMean(acc);
  cell.mean_in_ratio = SortedMean(in);
  if (runs.size() >= 2) {
    std::vector<double> sq;
    for (double a : acc) sq.push_back((a - cell.mean_accuracy) * (a - cell.mean_accuracy));
    cell.accuracy_stddev =
        std::sqrt(SortedSum(sq) / static_cast<double>(runs.size() - 1));
  }
  return cell;
}

double DeltaVsBaseline(const AggregateCell& cell,
                       const AggregateCell& baseline) {
  return cell.mean_accuracy - baseline.mean_accuracy;
}

ConsistencyPartition PartitionByConsistency(const CorrectnessGrid& en_runs,
                                            const CorrectnessGrid& orig_runs) {
  if (en_runs.size() != orig_runs.size()) {
    throw GridMismatch("grids cover different numbers of items");
  }
  ConsistencyPartition p;
  for (const auto& [id, en] : en_runs) {
    auto it = orig_runs.find(id);
    if (it == orig_runs.end()) {
      throw GridMismatch("item " + id + " missing from the second grid");
    }
    const std::vector<bool>& orig = it->second;
    if (en.size() != orig.size() || en.empty()) {
      throw GridMismatch("item " + id + " has mismatched run counts");
    }
    auto all = [](const std::vector<bool>& v, bool value) {
      return std::all_of(v.begin(), v.end(),
                         [value](bool b) { return b == value; });
    };
    if (all(en, true) && all(orig, false)) {
      p.en_correct_orig_wrong.insert(id);
    } else if (all(en, false) && all(orig, true)) {
      p.en_wrong_orig_correct.insert(id);
    }
  }
  return p;
}

}  // namespace l2t
