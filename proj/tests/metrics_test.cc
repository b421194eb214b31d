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

#include <algorithm>
#include <random>

#include "l2t/errors.h"
#include "l2t/metrics.h"
#include "l2t/report.h"

namespace l2t {
namespace {

EvalTranscript T(const L2TSetting& s, int run, bool correct,
                 DetectedLanguage detected) {
  EvalTranscript t;
  t.item_id = "x";
  t.setting = s;
  t.run_index = run;
  t.gold = Letter::kA;
  t.correct = correct;
  t.extraction.letter = correct ? Letter::kA : Letter::kB;
  t.extraction.method = ExtractionMethod::kMarker;
  t.detected_lang = detected;
  return t;
}

RunSummary RunWith(double accuracy, int run = 0) {
  RunSummary r;
  r.setting = L2TSetting::Baseline(Language::kKO);
  r.run_index = run;
  r.n_items = 100;
  r.accuracy = accuracy;
  r.in_ratio = 1.0;
  return r;
}

TEST(SummarizeRunTest, CountsAccuracyAndInputLanguage) {
  const L2TSetting s = L2TSetting::Baseline(Language::kKO);
  std::vector<EvalTranscript> ts = {
      T(s, 0, true, Language::kKO), T(s, 0, false, Language::kKO),
      T(s, 0, true, Language::kEN), T(s, 0, false, std::nullopt)};
  RunSummary r = SummarizeRun(ts);
  EXPECT_EQ(r.n_items, 4u);
  EXPECT_EQ(r.n_correct, 2u);
  EXPECT_EQ(r.n_input_language, 2u);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.in_ratio, 0.5);
}

TEST(SummarizeRunTest, Errors) {
  const L2TSetting s = L2TSetting::Baseline(Language::kKO);
  EXPECT_THROW(SummarizeRun({}), EmptyRun);
  std::vector<EvalTranscript> mixed = {T(s, 0, true, Language::kKO),
                                       T(s, 1, true, Language::kKO)};
  EXPECT_THROW(SummarizeRun(mixed), std::invalid_argument);
}

TEST(AggregateTest, MeanAndSampleStddev) {
  std::vector<RunSummary> runs = {RunWith(0.50, 0), RunWith(0.60, 1), RunWith(0.55, 2)};
  AggregateCell c = Aggregate(runs);
  EXPECT_NEAR(c.mean_accuracy, 0.55, 1e-12);
  EXPECT_NEAR(c.accuracy_stddev, 0.05, 1e-12);
  EXPECT_EQ(c.n_runs, 3u);
}

TEST(AggregateTest, SingleRunHasZeroStddev) {
  std::vector<RunSummary> runs = {RunWith(0.7)};
  EXPECT_EQ(Aggregate(runs).accuracy_stddev, 0.0);
}

TEST(AggregateTest, PermutationInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RunSummary> runs;
  for (int i = 0; i < 9; ++i) runs.push_back(RunWith(u(rng), i));
  AggregateCell ref = Aggregate(runs);
  for (int i = 0; i < 200; ++i) {
    std::shuffle(runs.begin(), runs.end(), rng);
    AggregateCell c = Aggregate(runs);
    EXPECT_EQ(c.mean_accuracy, ref.mean_accuracy);
    EXPECT_EQ(c.accuracy_stddev, ref.accuracy_stddev);
  }
}

TEST(AggregateTest, Errors) {
  EXPECT_THROW(Aggregate({}), EmptyRun);
  std::vector<RunSummary> runs = {RunWith(0.5), RunWith(0.5)};
  runs[1].setting = L2TSetting::Baseline(Language::kEN);
  EXPECT_THROW(Aggregate(runs), std::invalid_argument);
}

TEST(PartitionTest, SmallExample) {
  CorrectnessGrid en = {{"a", {true, true, true}},
                        {"b", {false, false, false}},
                        {"c", {true, false, true}},
                        {"d", {true, true, true}}};
  CorrectnessGrid orig = {{"a", {false, false, false}},
                          {"b", {true, true, true}},
                          {"c", {false, false, false}},
                          {"d", {true, true, true}}};
  ConsistencyPartition p = PartitionByConsistency(en, orig);
  EXPECT_EQ(p.en_correct_orig_wrong, std::set<std::string>({"a"}));
  EXPECT_EQ(p.en_wrong_orig_correct, std::set<std::string>({"b"}));
}

TEST(PartitionTest, Mismatches) {
  CorrectnessGrid en = {{"a", {true, true}}};
  CorrectnessGrid orig = {{"b", {true, true}}};
  EXPECT_THROW(PartitionByConsistency(en, orig), GridMismatch);
  orig = {{"a", {true, true, true}}};
  EXPECT_THROW(PartitionByConsistency(en, orig), GridMismatch);
  orig = {{"a", {true, true}}, {"b", {true, true}}};
  EXPECT_THROW(PartitionByConsistency(en, orig), GridMismatch);
}

TEST(FormatTest, Percentages) {
  EXPECT_EQ(FormatPercent(0.6047), "60.47");
  EXPECT_EQ(FormatMeanStd(0.6047, 0.0077), "60.47 (±0.77)");
  EXPECT_EQ(FormatSignedPercent(0.0164), "+1.64");
  EXPECT_EQ(FormatSignedPercent(-0.0051), "-0.51");
  EXPECT_EQ(FormatSignedPercent(-0.00001), "+0.00");
}

AggregateCell Cell(const L2TSetting& s, double acc) {
  AggregateCell c;
  c.setting = s;
  c.n_items = 10;
  c.n_runs = 3;
  c.mean_accuracy = acc;
  c.mean_in_ratio = 1.0;
  return c;
}

TEST(ReportTest, RowsSortedWithDeltas) {
  std::vector<ReportRow> rows = {
      {"click", Cell(L2TSetting::Align(Language::kEN, Language::kKO), 0.62),
       std::nullopt},
      {"click", Cell(L2TSetting::Baseline(Language::kEN), 0.60), std::nullopt},
      {"click", Cell(L2TSetting::Baseline(Language::kKO), 0.70), std::nullopt},
  };
  rows = PrepareReportRows(rows);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].cell.setting, L2TSetting::Baseline(Language::kEN));
  EXPECT_EQ(rows[1].cell.setting.kind, SettingKind::kAlign);
  ASSERT_TRUE(rows[1].delta_vs_baseline.has_value());
  EXPECT_NEAR(*rows[1].delta_vs_baseline, 0.02, 1e-12);
  std::string csv = RenderAggregateCsv(rows);
  EXPECT_TRUE(csv.starts_with(
      "dataset,kind,setting,input,thought,output,persona_variant,n_items,"
      "n_runs,acc_mean_pct,acc_std_pct,in_pct,delta_vs_baseline_pct\n"));
  EXPECT_NE(csv.find("click,Align,I:EN-T:KO-O:EN,EN,KO,EN,,10,3,62.00,0.00,"
                     "100.00,+2.00\n"),
            std::string::npos);
  std::string md = RenderAggregateMarkdown("m", rows);
  EXPECT_NE(md.find("| I:EN-T:KO-O:EN | 10 | 62.00 (±0.00) | 100.00 | +2.00 |"),
            std::string::npos);
}

TEST(ReportTest, ConsistencySchema) {
  std::vector<ConsistencyCountRow> rows = {{Language::kZH, 24, 36},
                                           {Language::kKO, 27, 51}};
  EXPECT_EQ(RenderConsistencyCsv(rows),
            "pair,en_correct_orig_wrong,en_wrong_orig_correct\n"
            "EN vs. ZH,24,36\nEN vs. KO,27,51\n");
  EXPECT_EQ(RenderConsistencyMarkdown(rows),
            "|  | EN O / Orig X | EN X / Orig O |\n|---|---:|---:|\n"
            "| EN vs. ZH | 24 | 36 |\n| EN vs. KO | 27 | 51 |\n");
}

}  // namespace
}  // namespace l2t
