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

#include "l2t/ppl.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "l2t/errors.h"

namespace l2t {

double ComputePpl(const TokenLogProbTrace& trace) {
  ValidateTrace(trace);
  // Neumaier summation.
  double sum = 0.0;
  double c = 0.0;
  for (std::size_t i = trace.k; i <= trace.m; ++i) {
    const double v = trace.logprobs[i];
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  const double n = static_cast<double>(trace.m - trace.k + 1);
  return std::exp(-(sum + c) / n);
}

std::string_view PartitionSideName(PartitionSide side) {
  switch (side) {
    case PartitionSide::kEnCorrectOrigWrong: return "en_correct_orig_wrong";
    case PartitionSide::kEnWrongOrigCorrect: return "en_wrong_orig_correct";
  }
  return "";
}

namespace {

struct Task {
  std::size_t row;
  const MCQItem* item;
};

}  // namespace

PplStudyResult RunPplStudy(const PplStudyInput& input,
                           const PromptTemplateSet& templates,
                           LogprobProvider& provider) {
  std::map<std::string, const MCQItem*, std::less<>> orig_by_id;
  for (const MCQItem& item : input.orig_items) orig_by_id[item.id] = &item;
  std::map<std::string, const MCQItem*, std::less<>> en_by_orig;
  for (const MCQItem& item : input.en_items) {
    if (item.paired_id) en_by_orig[*item.paired_id] = &item;
  }
  auto variant = [&](const std::string& key, Language lang) -> const MCQItem* {
    auto o = orig_by_id.find(key);
    if (o != orig_by_id.end() && o->second->language == lang) return o->second;
    auto e = en_by_orig.find(key);
    if (e != en_by_orig.end() && e->second->language == lang) return e->second;
    return nullptr;
  };

  PplStudyResult result;
  std::vector<Task> tasks;
  const std::pair<PartitionSide, const std::set<std::string>*> sides[] = {
      {PartitionSide::kEnCorrectOrigWrong, &input.partition.en_correct_orig_wrong},
      {PartitionSide::kEnWrongOrigCorrect, &input.partition.en_wrong_orig_correct},
  };
  for (const auto& [side, keys] : sides) {
    for (const L2TSetting& setting : input.settings) {
      ValidateSetting(setting);
      const std::size_t row = result.rows.size();
      result.rows.push_back({side, setting, 0, 0, 0.0});
      for (const std::string& key : *keys) {
        const MCQItem* item = variant(key, setting.input);
        if (item == nullptr) {
          throw std::invalid_argument("no " +
                                      std::string(LanguageTag(setting.input)) +
                                      " variant for partitioned item " + key);
        }
        tasks.push_back({row, item});
      }
    }
  }

  std::vector<std::optional<PplRecord>> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= tasks.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) return;
      }
      const Task& task = tasks[i];
      const L2TSetting& setting = result.rows[task.row].setting;
      try {
        PromptPair prompts = BuildPromptPair(*task.item, setting, templates);
        TokenLogProbTrace trace =
            provider.EchoLogprobs(prompts.system_prompt, prompts.user_prompt);
        out[i] = PplRecord{task.item->id, setting, ComputePpl(trace), trace.k,
                           trace.m};
      } catch (const TraceUnavailable&) {
        // Counted as dropped below.
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp<int>(
      input.concurrency, 1, static_cast<int>(std::max<std::size_t>(1, tasks.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<double>> values(result.rows.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    PplStudyRow& row = result.rows[tasks[i].row];
    if (!out[i]) {
      ++row.n_dropped;
      continue;
    }
    values[tasks[i].row].push_back(out[i]->ppl);
    result.records.push_back(std::move(*out[i]));
  }
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    auto& v = values[r];
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    result.rows[r].n_items = v.size();
    result.rows[r].mean_ppl = v.empty() ? 0.0 : sum / static_cast<double>(v.size());
  }
  return result;
}

std::string RenderPplCsv(std::span<const PplStudyRow> rows) {
  std::string out = "partition_side,setting,n_items,n_dropped,mean_ppl\n";
  char buf[64];
  for (const PplStudyRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", row.mean_ppl);
    out += std::string(PartitionSideName(row.side)) + "," +
           SettingNotation(row.setting) + "," + std::to_string(row.n_items) +
           "," + std::to_string(row.n_dropped) + "," + buf + "\n";
  }
  return out;
}

}  // namespace l2t
