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

// Experiment configuration, the resumable cell scheduler and report folding.

#ifndef L2T_EXPERIMENT_H_
#define L2T_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "l2t/http_provider.h"
#include "l2t/metrics.h"
#include "l2t/ppl.h"
#include "l2t/report.h"
#include "l2t/types.h"

namespace l2t {

enum class RunMode : std::uint8_t { kLive, kScripted };

struct ExperimentConfig {
  std::filesystem::path manifest;
  RunMode mode = RunMode::kScripted;
  std::filesystem::path scripted_spec;    // scripted mode
  std::filesystem::path provider_config;  // live mode
  std::filesystem::path templates_dir;    // empty: the installed templates
  std::filesystem::path markers;          // empty: <templates_dir>/markers.json
  std::vector<SettingKind> kinds;
  std::vector<Language> thought_languages;
  std::vector<int> persona_variants = {0, 1, 2};
  int run_count = 3;
  int concurrency = 4;
  std::filesystem::path cache_dir;  // empty: no response cache
  std::filesystem::path output_dir;
  // seeds[r] is sent with run r; shorter lists leave later runs unset.
  std::vector<std::int64_t> seeds;
  bool collapse_runs = false;
  int max_new_tokens = 1024;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::string model_id = "scripted";  // scripted mode
  // Settings scored by the PPL study; empty uses DefaultPplSettings.
  std::vector<L2TSetting> ppl_settings;
  // Scripted-mode PPL source: constant per-token logprob, if set.
  std::optional<double> stub_logprob;

  // Throws ConfigError when an invariant fails.
  void Validate() const;

  // Relative paths resolve against the config file's directory.
  static ExperimentConfig LoadFromFile(const std::filesystem::path& path);
};

// The installed template directory.
std::filesystem::path DefaultTemplateDir();

// Hash of everything that affects results: the result-relevant config
// fields plus the bytes of the manifest, datasets, templates and scripted
// spec. Concurrency, cache and output locations are excluded.
std::string ExperimentHash(const ExperimentConfig& config);

struct CellFailure {
  std::string dataset;
  std::string item_id;
  L2TSetting setting;
  int run_index = 0;
  std::string error;
};

struct RunOptions {
  // Stop scheduling after this many new cells (simulated interruption).
  std::optional<std::size_t> cell_limit;
  std::ostream* log = nullptr;
  // Replaces the provider built from the config. Must outlive the call.
  ChatProvider* provider_override = nullptr;
  Sleeper sleep = RealSleep;
};

struct ExperimentOutcome {
  std::filesystem::path dir;
  std::size_t n_cells = 0;
  std::size_t n_resumed = 0;  // transcripts already on disk
  std::size_t n_completed = 0;  // written by this call
  std::size_t provider_calls = 0;
  std::size_t cache_hits = 0;
  std::vector<CellFailure> failures;
  bool reports_written = false;

  bool complete() const { return n_resumed + n_completed == n_cells; }
};

// Runs every (item, setting, run) cell not yet on disk, then folds the
// transcript set into summary.csv, report.md, runs.csv and, for datasets
// with English pairs, consistency.csv/.md and partition.json. Reports are
// only written once every cell has a transcript; otherwise failures.json
// lists what is missing.
ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                const RunOptions& options = {});

// Rebuilds the reports of a complete experiment from its transcripts.
// Throws MissingExperiment when cells are missing.
void WriteReports(const ExperimentConfig& config);

// Baseline, Consistent, Transfer and Align for each original language and
// English, with either one as input.
std::vector<L2TSetting> DefaultPplSettings(std::span<const Language> orig);

struct PplStudyOutcome {
  std::filesystem::path dir;
  std::vector<PplStudyRow> rows;
  std::vector<ConsistencyCountRow> counts;
};

// Partitions the Baseline runs of a complete experiment and scores the
// partitioned items with `provider` (or the provider the config implies when
// null). Throws MissingExperiment when the Baseline transcripts for a
// language variant are absent or incomplete.
PplStudyOutcome RunPplStudyForExperiment(const ExperimentConfig& config,
                                         LogprobProvider* provider = nullptr);

}  // namespace l2t

#endif  // L2T_EXPERIMENT_H_
