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

// l2t: run experiments, PPL studies, corpus builds and reports.
// Exit codes: 0 success, 1 partial failure or runtime error, 2 bad config.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "l2t/corpus.h"
#include "l2t/errors.h"
#include "l2t/experiment.h"
#include "l2t/file_util.h"

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfig = 2;

struct Overrides {
  std::optional<int> concurrency;
  std::optional<int> run_count;
  std::optional<int> max_new_tokens;
  std::string output_dir;
  std::string cache_dir;
  std::vector<std::int64_t> seeds;
  bool collapse_runs = false;
};

void AddOverrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--concurrency", o.concurrency, "In-flight request bound");
  cmd->add_option("--run-count", o.run_count, "Runs per cell");
  cmd->add_option("--max-new-tokens", o.max_new_tokens, "Generation cap");
  cmd->add_option("--output-dir", o.output_dir, "Experiment output root");
  cmd->add_option("--cache-dir", o.cache_dir, "Response cache directory");
  cmd->add_option("--seeds", o.seeds, "Per-run seeds");
  cmd->add_flag("--collapse-runs", o.collapse_runs,
                "Share one cached reply across runs");
}

l2t::ExperimentConfig LoadConfig(const std::string& path, const Overrides& o) {
  l2t::ExperimentConfig c = l2t::ExperimentConfig::LoadFromFile(path);
  if (o.concurrency) c.concurrency = *o.concurrency;
  if (o.run_count) c.run_count = *o.run_count;
  if (o.max_new_tokens) c.max_new_tokens = *o.max_new_tokens;
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (o.collapse_runs) c.collapse_runs = true;
  c.Validate();
  return c;
}

int RunVerb(const std::string& config_path, const Overrides& o) {
  l2t::ExperimentConfig config = LoadConfig(config_path, o);
  l2t::RunOptions options;
  options.log = &std::cerr;
  l2t::ExperimentOutcome out = l2t::RunExperiment(config, options);
  std::cout << out.dir.string() << "\n";
  std::cerr << out.n_completed << " cells run, " << out.n_resumed
            << " resumed, " << out.provider_calls << " provider calls, "
            << out.cache_hits << " cache hits\n";
  if (!out.complete()) {
    std::cerr << out.failures.size() << " cells failed; see "
              << (out.dir / "failures.json").string() << "\n";
    return kPartial;
  }
  return kOk;
}

int PplVerb(const std::string& config_path, const Overrides& o) {
  l2t::ExperimentConfig config = LoadConfig(config_path, o);
  l2t::PplStudyOutcome out = l2t::RunPplStudyForExperiment(config);
  std::cout << out.dir.string() << "\n";
  return kOk;
}

int ReportVerb(const std::string& config_path, const Overrides& o) {
  l2t::ExperimentConfig config = LoadConfig(config_path, o);
  l2t::WriteReports(config);
  return kOk;
}

struct CorpusArgs {
  std::string input;
  std::string output;
  std::string kind = "orig-only";
  std::string source = "KO";
  std::optional<std::string> prefix;
  std::string placement = "prepend";
  std::string translations;
};

int CorpusVerb(const CorpusArgs& a) {
  l2t::CorpusConfig config;
  auto kind = l2t::ParseCorpusKind(a.kind);
  if (!kind) throw l2t::ConfigError("unknown corpus kind '" + a.kind + "'");
  config.kind = *kind;
  config.source_language = l2t::LanguageFromTag(a.source);
  config.prefix = a.prefix;
  if (a.placement == "prepend") {
    config.placement = l2t::PrefixPlacement::kPrepend;
  } else if (a.placement == "append") {
    config.placement = l2t::PrefixPlacement::kAppend;
  } else {
    throw l2t::ConfigError("placement must be prepend or append");
  }
  std::optional<l2t::DictionaryTranslator> translator;
  if (!a.translations.empty()) {
    translator = l2t::DictionaryTranslator::LoadFromFile(a.translations);
  }
  if (config.kind == l2t::CorpusKind::kTranslatedEN && !translator) {
    throw l2t::ConfigError("translated-en needs --translations");
  }
  std::vector<std::string> statements =
      l2t::SplitLines(l2t::ReadFileOrThrow(a.input));
  std::vector<std::string> lines = l2t::BuildCorpus(
      statements, config, translator ? &*translator : nullptr);
  l2t::WriteFileAtomic(a.output, l2t::JoinCorpus(lines));
  l2t::WriteFileAtomic(a.output + ".manifest.json",
                       l2t::CorpusManifestJson(lines, config));
  std::cerr << lines.size() << " lines written to " << a.output << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language-to-Thought evaluation harness"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;

  CLI::App* run = app.add_subcommand("run", "Run or resume an experiment");
  run->add_option("--config", config_path, "Experiment config")->required();
  AddOverrides(run, overrides);

  CLI::App* ppl = app.add_subcommand("ppl-study", "PPL over partitioned items");
  ppl->add_option("--config", config_path, "Experiment config")->required();
  AddOverrides(ppl, overrides);

  CLI::App* report = app.add_subcommand("report", "Rebuild reports");
  report->add_option("--config", config_path, "Experiment config")->required();
  AddOverrides(report, overrides);

  CorpusArgs corpus_args;
  CLI::App* corpus =
      app.add_subcommand("build-corpus", "Build a pretraining corpus");
  corpus->add_option("--input", corpus_args.input, "One statement per line")
      ->required();
  corpus->add_option("--output", corpus_args.output, "Output file")->required();
  corpus->add_option("--kind", corpus_args.kind,
                     "orig-only | translated-en | l2t-prefix-orig | "
                     "l2t-prefix-en");
  corpus->add_option("--source-language", corpus_args.source, "EN|ZH|KO|AR");
  corpus->add_option("--prefix", corpus_args.prefix, "Prefix override");
  corpus->add_option("--placement", corpus_args.placement, "prepend | append");
  corpus->add_option("--translations", corpus_args.translations,
                     "Phrase table for translated-en");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return RunVerb(config_path, overrides);
    if (*ppl) return PplVerb(config_path, overrides);
    if (*report) return ReportVerb(config_path, overrides);
    if (*corpus) return CorpusVerb(corpus_args);
  } catch (const l2t::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const l2t::SchemaError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kConfig;
  } catch (const l2t::LanguageMismatch& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kConfig;
  } catch (const l2t::MissingTemplate& e) {
    std::cerr << "template error: " << e.what() << "\n";
    return kConfig;
  } catch (const l2t::InvalidSetting& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPartial;
  }
  return kOk;
}
