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

#include "l2t/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace l2t {

namespace {

std::string Fixed2(double value) {
  // Avoid "-0.00".
  if (std::fabs(value) < 0.005) value = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

std::string OptionalTag(const std::optional<Language>& lang) {
  return lang ? std::string(LanguageTag(*lang)) : std::string();
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

auto RowOrder(const ReportRow& r) {
  const L2TSetting& s = r.cell.setting;
  return std::make_tuple(r.dataset, static_cast<int>(s.input),
                         static_cast<int>(s.kind),
                         s.thought ? static_cast<int>(*s.thought) : -1,
                         s.persona_variant.value_or(-1));
}

}  // namespace

std::string FormatPercent(double ratio) { return Fixed2(ratio * 100.0); }

std::string FormatMeanStd(double mean_ratio, double stddev_ratio) {
  return FormatPercent(mean_ratio) + " (±" + FormatPercent(stddev_ratio) + ")";
}

std::string FormatSignedPercent(double ratio) {
  std::string s = Fixed2(ratio * 100.0);
  return s.starts_with('-') ? s : "+" + s;
}

std::vector<ReportRow> PrepareReportRows(std::vector<ReportRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     return RowOrder(a) < RowOrder(b);
                   });
  std::map<std::pair<std::string, Language>, double> baseline;
  for (const ReportRow& r : rows) {
    if (r.cell.setting.kind == SettingKind::kBaseline) {
      baseline[{r.dataset, r.cell.setting.input}] = r.cell.mean_accuracy;
    }
  }
  for (ReportRow& r : rows) {
    auto it = baseline.find({r.dataset, r.cell.setting.input});
    if (it != baseline.end()) {
      r.delta_vs_baseline = r.cell.mean_accuracy - it->second;
    }
  }
  return rows;
}

std::string RenderAggregateCsv(std::span<const ReportRow> rows) {
  std::string out =
      "dataset,kind,setting,input,thought,output,persona_variant,n_items,"
      "n_runs,acc_mean_pct,acc_std_pct,in_pct,delta_vs_baseline_pct\n";
  for (const ReportRow& r : rows) {
    const L2TSetting& s = r.cell.setting;
    out += CsvField(r.dataset);
    out += ',';
    out += SettingKindName(s.kind);
    out += ',';
    out += SettingNotation(s);
    out += ',';
    out += LanguageTag(s.input);
    out += ',' + OptionalTag(s.thought) + ',' + OptionalTag(s.output) + ',';
    if (s.persona_variant) out += std::to_string(*s.persona_variant);
    out += ',' + std::to_string(r.cell.n_items);
    out += ',' + std::to_string(r.cell.n_runs);
    out += ',' + FormatPercent(r.cell.mean_accuracy);
    out += ',' + FormatPercent(r.cell.accuracy_stddev);
    out += ',' + FormatPercent(r.cell.mean_in_ratio);
    out += ',';
    if (r.delta_vs_baseline) out += FormatSignedPercent(*r.delta_vs_baseline);
    out += '\n';
  }
  return out;
}

std::string RenderAggregateMarkdown(std::string_view model_id,
                                    std::span<const ReportRow> rows) {
  std::string out = "# Results: " + std::string(model_id) + "\n";
  std::string current_dataset;
  std::optional<SettingKind> current_kind;
  bool first = true;
  for (const ReportRow& r : rows) {
    if (first || r.dataset != current_dataset) {
      current_dataset = r.dataset;
      current_kind.reset();
      out += "\n## " + (r.dataset.empty() ? std::string("(unnamed)") : r.dataset) + "\n";
    }
    first = false;
    if (current_kind != r.cell.setting.kind) {
      current_kind = r.cell.setting.kind;
      out += "\n### " + std::string(SettingKindName(r.cell.setting.kind)) + "\n\n";
      out += "| I-T-O | n | Acc | IN % | Δ vs Baseline |\n";
      out += "|---|---:|---:|---:|---:|\n";
    }
    out += "| " + SettingNotation(r.cell.setting) + " | " +
           std::to_string(r.cell.n_items) + " | " +
           FormatMeanStd(r.cell.mean_accuracy, r.cell.accuracy_stddev) + " | " +
           FormatPercent(r.cell.mean_in_ratio) + " | " +
           (r.delta_vs_baseline ? FormatSignedPercent(*r.delta_vs_baseline)
                                : std::string("-")) +
           " |\n";
  }
  return out;
}

std::string RenderConsistencyCsv(std::span<const ConsistencyCountRow> rows) {
  std::string out = "pair,en_correct_orig_wrong,en_wrong_orig_correct\n";
  for (const auto& r : rows) {
    out += "EN vs. " + std::string(LanguageTag(r.orig_language)) + "," +
           std::to_string(r.en_correct_orig_wrong) + "," +
           std::to_string(r.en_wrong_orig_correct) + "\n";
  }
  return out;
}

std::string RenderConsistencyMarkdown(
    std::span<const ConsistencyCountRow> rows) {
  std::string out = "|  | EN O / Orig X | EN X / Orig O |\n|---|---:|---:|\n";
  for (const auto& r : rows) {
    out += "| EN vs. " + std::string(LanguageTag(r.orig_language)) + " | " +
           std::to_string(r.en_correct_orig_wrong) + " | " +
           std::to_string(r.en_wrong_orig_correct) + " |\n";
  }
  return out;
}

}  // namespace l2t
