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

#include "l2t/experiment.h"

#include <algorithm>
#include <atomic>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "l2t/cache.h"
#include "l2t/dataset.h"
#include "l2t/errors.h"
#include "l2t/file_util.h"
#include "l2t/hashing.h"
#include "l2t/prompt_forge.h"
#include "l2t/response_analysis.h"
#include "l2t/scripted_model.h"
#include "l2t/types_json.h"

#ifndef L2T_TEMPLATE_DIR
#define L2T_TEMPLATE_DIR "templates"
#endif

namespace l2t {

namespace fs = std::filesystem;

fs::path DefaultTemplateDir() { return fs::path(L2T_TEMPLATE_DIR); }

namespace {

fs::path TemplatesOf(const ExperimentConfig& c) {
  return c.templates_dir.empty() ? DefaultTemplateDir() : c.templates_dir;
}

fs::path MarkersOf(const ExperimentConfig& c) {
  return c.markers.empty() ? TemplatesOf(c) / "markers.json" : c.markers;
}

template <typename T>
T Field(const Json& j, const char* key, T fallback) {
  try {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

// Everything loaded from the config's files.
struct Context {
  DatasetManifest manifest;
  std::vector<LoadedEntry> entries;
  PromptTemplateSet templates;
  MarkerTable markers = MarkerTable::Defaults();
  // All items evaluated, in manifest order: originals then English pairs.
  std::vector<std::pair<std::string, const MCQItem*>> items;
};

std::unique_ptr<Context> LoadContext(const ExperimentConfig& config,
                                     std::ostream* log) {
  auto ctx = std::make_unique<Context>();
  ctx->manifest = DatasetManifest::LoadFromFile(config.manifest);
  for (const DatasetEntry& entry : ctx->manifest.datasets) {
    ctx->entries.push_back(LoadEntry(entry));
    if (log && ctx->entries.back().count_warning) {
      *log << "warning: " << *ctx->entries.back().count_warning << "\n";
    }
  }
  std::set<std::string> tags;
  for (const LoadedEntry& e : ctx->entries) {
    if (!tags.insert(e.entry->tag).second) {
      throw ConfigError("duplicate dataset tag '" + e.entry->tag + "'");
    }
    for (const MCQItem& item : e.orig) ctx->items.emplace_back(e.entry->tag, &item);
    for (const MCQItem& item : e.english) {
      ctx->items.emplace_back(e.entry->tag, &item);
    }
  }
  ctx->templates = PromptTemplateSet::LoadFromDirectory(TemplatesOf(config));
  ctx->markers = MarkerTable::LoadFromFile(MarkersOf(config));
  return ctx;
}

struct Cell {
  std::string dataset;
  const MCQItem* item;
  L2TSetting setting;
  int run;
};

std::vector<Cell> EnumerateCells(const ExperimentConfig& config,
                                 const Context& ctx) {
  std::vector<Cell> cells;
  for (const auto& [tag, item] : ctx.items) {
    auto matrix = EnumerateMatrix(std::span(item, 1), config.kinds,
                                  config.thought_languages,
                                  config.persona_variants);
    for (const MatrixCell& m : matrix) {
      for (int r = 0; r < config.run_count; ++r) {
        cells.push_back({tag, item, m.setting, r});
      }
    }
  }
  return cells;
}

std::string SafeFileStem(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' ||
                    c == '@';
    out += ok ? c : '_';
  }
  if (out.size() > 80) out.resize(80);
  return out + "-" + Sha256Hex(id).substr(0, 8);
}

fs::path CellPath(const fs::path& dir, const Cell& cell) {
  return dir / "transcripts" / SafeFileStem(cell.dataset) /
         SettingSlug(cell.setting) /
         (SafeFileStem(cell.item->id) + ".r" + std::to_string(cell.run) +
          ".json");
}

std::optional<EvalTranscript> ReadTranscript(const fs::path& path,
                                             int run_count) {
  auto content = TryReadFile(path);
  if (!content) return std::nullopt;
  Json j = Json::parse(*content, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::nullopt;
  try {
    EvalTranscript t = j.get<EvalTranscript>();
    ValidateTranscript(t, run_count);
    return t;
  } catch (const std::exception&) {
    // A torn or stale file is treated as missing and redone.
    return std::nullopt;
  }
}

fs::path ExperimentDir(const ExperimentConfig& config) {
  return config.output_dir / ("exp-" + ExperimentHash(config).substr(0, 16));
}

std::string ModelLabel(const ExperimentConfig& config) {
  if (config.mode == RunMode::kScripted) return config.model_id;
  return ProviderConfig::LoadFromFile(config.provider_config).model;
}

RequestParams ParamsFor(const ExperimentConfig& config, int run) {
  RequestParams p;
  p.max_new_tokens = config.max_new_tokens;
  p.temperature = config.temperature;
  p.top_p = config.top_p;
  if (run < static_cast<int>(config.seeds.size())) p.seed = config.seeds[run];
  return p;
}

std::string CellLabel(const Cell& c) {
  return c.dataset + "/" + c.item->id + " " + SettingNotation(c.setting) +
         " run " + std::to_string(c.run);
}

Json FailureJson(const CellFailure& f) {
  return {{"dataset", f.dataset},
          {"item_id", f.item_id},
          {"setting", SettingNotation(f.setting)},
          {"run_index", f.run_index},
          {"error", f.error}};
}

// Reads every transcript; throws MissingExperiment on the first gap.
std::vector<std::pair<const Cell*, EvalTranscript>> LoadAll(
    const ExperimentConfig& config, const fs::path& dir,
    const std::vector<Cell>& cells) {
  std::vector<std::pair<const Cell*, EvalTranscript>> out;
  out.reserve(cells.size());
  for (const Cell& cell : cells) {
    auto t = ReadTranscript(CellPath(dir, cell), config.run_count);
    if (!t) throw MissingExperiment("no transcript for " + CellLabel(cell));
    out.emplace_back(&cell, std::move(*t));
  }
  return out;
}

std::string RenderRunsCsv(
    const std::vector<std::pair<std::string, RunSummary>>& runs) {
  std::string out =
      "dataset,setting,run,n_items,n_correct,n_input_language,acc_pct,in_pct\n";
  for (const auto& [tag, r] : runs) {
    out += tag + "," + SettingNotation(r.setting) + "," +
           std::to_string(r.run_index) + "," + std::to_string(r.n_items) + "," +
           std::to_string(r.n_correct) + "," +
           std::to_string(r.n_input_language) + "," +
           FormatPercent(r.accuracy) + "," + FormatPercent(r.in_ratio) + "\n";
  }
  return out;
}

// Baseline correctness grid keyed by the original item id.
CorrectnessGrid BaselineGrid(
    const std::vector<std::pair<const Cell*, EvalTranscript>>& all,
    const std::string& tag, Language lang, int run_count) {
  CorrectnessGrid grid;
  for (const auto& [cell, t] : all) {
    if (cell->dataset != tag || t.setting != L2TSetting::Baseline(lang) ||
        cell->item->language != lang) {
      continue;
    }
    const std::string key =
        lang == Language::kEN ? *cell->item->paired_id : cell->item->id;
    auto& runs = grid[key];
    runs.resize(run_count);
    runs[t.run_index] = t.correct;
  }
  return grid;
}

struct Partitions {
  std::vector<ConsistencyCountRow> counts;
  std::map<std::string, ConsistencyPartition> by_tag;
};

Partitions ComputePartitions(
    const ExperimentConfig& config, const Context& ctx,
    const std::vector<std::pair<const Cell*, EvalTranscript>>& all) {
  Partitions out;
  const bool has_baseline =
      std::find(config.kinds.begin(), config.kinds.end(),
                SettingKind::kBaseline) != config.kinds.end();
  if (!has_baseline) return out;
  std::map<Language, ConsistencyCountRow> rows;
  for (const LoadedEntry& e : ctx.entries) {
    if (e.english.empty() || e.entry->language == Language::kEN) continue;
    const Language lang = e.entry->language;
    CorrectnessGrid orig = BaselineGrid(all, e.entry->tag, lang, config.run_count);
    CorrectnessGrid en =
        BaselineGrid(all, e.entry->tag, Language::kEN, config.run_count);
    // Only items present in both conditions can be compared.
    std::erase_if(orig, [&](const auto& kv) { return !en.contains(kv.first); });
    std::erase_if(en, [&](const auto& kv) { return !orig.contains(kv.first); });
    ConsistencyPartition p = PartitionByConsistency(en, orig);
    auto& row = rows[lang];
    row.orig_language = lang;
    row.en_correct_orig_wrong += p.en_correct_orig_wrong.size();
    row.en_wrong_orig_correct += p.en_wrong_orig_correct.size();
    out.by_tag[e.entry->tag] = std::move(p);
  }
  for (auto& [lang, row] : rows) out.counts.push_back(row);
  return out;
}

void WriteReportsFrom(const ExperimentConfig& config, const Context& ctx,
                      const fs::path& dir, const std::vector<Cell>& cells) {
  auto all = LoadAll(config, dir, cells);

  std::map<std::pair<std::string, L2TSetting>,
           std::map<int, std::vector<EvalTranscript>>>
      groups;
  for (const auto& [cell, t] : all) {
    groups[{cell->dataset, t.setting}][t.run_index].push_back(t);
  }
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, RunSummary>> runs;
  for (const auto& [key, by_run] : groups) {
    std::vector<RunSummary> summaries;
    for (const auto& [run, ts] : by_run) {
      summaries.push_back(SummarizeRun(ts));
      runs.emplace_back(key.first, summaries.back());
    }
    rows.push_back({key.first, Aggregate(summaries), std::nullopt});
  }
  rows = PrepareReportRows(std::move(rows));
  WriteFileAtomic(dir / "summary.csv", RenderAggregateCsv(rows));
  WriteFileAtomic(dir / "report.md",
                  RenderAggregateMarkdown(ModelLabel(config), rows));
  WriteFileAtomic(dir / "runs.csv", RenderRunsCsv(runs));

  Partitions parts = ComputePartitions(config, ctx, all);
  if (!parts.counts.empty()) {
    WriteFileAtomic(dir / "consistency.csv", RenderConsistencyCsv(parts.counts));
    WriteFileAtomic(dir / "consistency.md",
                    RenderConsistencyMarkdown(parts.counts));
    Json pj = Json::object();
    for (const auto& [tag, p] : parts.by_tag) {
      pj[tag] = {{"en_correct_orig_wrong", p.en_correct_orig_wrong},
                 {"en_wrong_orig_correct", p.en_wrong_orig_correct}};
    }
    WriteFileAtomic(dir / "partition.json", pj.dump(2) + "\n");
  }
  fs::remove(dir / "failures.json");
}

void HashTree(FieldHasher& h, const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    h.Add(fs::relative(f, root).generic_string()).Add(ReadFileOrThrow(f));
  }
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (manifest.empty()) throw ConfigError("manifest is required");
  if (run_count < 1) throw ConfigError("run_count must be >= 1");
  if (concurrency < 1) throw ConfigError("concurrency must be >= 1");
  if (max_new_tokens < 1) throw ConfigError("max_new_tokens must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (kinds.empty()) throw ConfigError("at least one setting kind is required");
  if (mode == RunMode::kScripted && scripted_spec.empty()) {
    throw ConfigError("scripted mode requires scripted_spec");
  }
  if (mode == RunMode::kLive && provider_config.empty()) {
    throw ConfigError("live mode requires provider");
  }
  for (int v : persona_variants) {
    if (v < 0 || v >= kPersonaVariants) {
      throw ConfigError("persona variant out of range: " + std::to_string(v));
    }
  }
  for (const L2TSetting& s : ppl_settings) {
    if (!IsValidSetting(s)) {
      throw ConfigError("invalid PPL setting " + SettingNotation(s));
    }
  }
}

ExperimentConfig ExperimentConfig::LoadFromFile(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(ReadFileOrThrow(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](const char* key) -> fs::path {
    std::string p = Field<std::string>(j, key, "");
    if (p.empty()) return {};
    fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  ExperimentConfig c;
  c.manifest = resolve("manifest");
  const std::string mode = Field<std::string>(j, "mode", "scripted");
  if (mode == "scripted") {
    c.mode = RunMode::kScripted;
  } else if (mode == "live") {
    c.mode = RunMode::kLive;
  } else {
    throw ConfigError("mode must be 'live' or 'scripted', got '" + mode + "'");
  }
  c.scripted_spec = resolve("scripted_spec");
  c.provider_config = resolve("provider");
  c.templates_dir = resolve("templates");
  c.markers = resolve("markers");
  for (const std::string& k :
       Field<std::vector<std::string>>(j, "kinds", {"Baseline"})) {
    auto kind = ParseSettingKind(k);
    if (!kind) throw ConfigError("unknown setting kind '" + k + "'");
    c.kinds.push_back(*kind);
  }
  for (const std::string& t :
       Field<std::vector<std::string>>(j, "thought_languages", {})) {
    auto lang = ParseLanguage(t);
    if (!lang) throw ConfigError("unknown language '" + t + "'");
    c.thought_languages.push_back(*lang);
  }
  c.persona_variants = Field(j, "persona_variants", c.persona_variants);
  c.run_count = Field(j, "run_count", c.run_count);
  c.concurrency = Field(j, "concurrency", c.concurrency);
  c.cache_dir = resolve("cache_dir");
  c.output_dir = resolve("output_dir");
  c.seeds = Field(j, "seeds", c.seeds);
  c.collapse_runs = Field(j, "collapse_runs", c.collapse_runs);
  c.max_new_tokens = Field(j, "max_new_tokens", c.max_new_tokens);
  if (j.contains("temperature")) c.temperature = Field(j, "temperature", 0.0);
  if (j.contains("top_p")) c.top_p = Field(j, "top_p", 0.0);
  c.model_id = Field(j, "model_id", c.model_id);
  if (j.contains("ppl_settings")) {
    try {
      c.ppl_settings = j["ppl_settings"].get<std::vector<L2TSetting>>();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("ppl_settings: ") + e.what());
    }
  }
  if (j.contains("stub_logprob")) c.stub_logprob = Field(j, "stub_logprob", 0.0);
  c.Validate();
  return c;
}

std::string ExperimentHash(const ExperimentConfig& c) {
  FieldHasher h;
  h.Add(c.mode == RunMode::kScripted ? "scripted" : "live");
  h.Add(ReadFileOrThrow(c.manifest));
  DatasetManifest manifest = DatasetManifest::LoadFromFile(c.manifest);
  for (const DatasetEntry& e : manifest.datasets) {
    h.Add(e.tag).Add(ReadFileOrThrow(e.path));
    if (e.english_path) h.Add(ReadFileOrThrow(*e.english_path));
  }
  if (c.mode == RunMode::kScripted) {
    h.Add(ReadFileOrThrow(c.scripted_spec)).Add(c.model_id);
  } else {
    ProviderConfig p = ProviderConfig::LoadFromFile(c.provider_config);
    h.Add(p.provider_id).Add(p.model).Add(p.base_url).Add(p.chat_path);
    h.Add(static_cast<std::int64_t>(p.system_role));
  }
  HashTree(h, TemplatesOf(c));
  h.Add(ReadFileOrThrow(MarkersOf(c)));
  for (SettingKind k : c.kinds) h.Add(SettingKindName(k));
  h.Add("|");
  for (Language l : c.thought_languages) h.Add(LanguageTag(l));
  h.Add("|");
  for (int v : c.persona_variants) h.Add(static_cast<std::int64_t>(v));
  h.Add("|");
  h.Add(static_cast<std::int64_t>(c.run_count));
  for (std::int64_t s : c.seeds) h.Add(s);
  h.Add("|");
  h.Add(static_cast<std::int64_t>(c.collapse_runs));
  h.Add(static_cast<std::int64_t>(c.max_new_tokens));
  h.Add(c.temperature).Add(c.top_p);
  return h.HexDigest();
}

ExperimentOutcome RunExperiment(const ExperimentConfig& config,
                                const RunOptions& options) {
  config.Validate();
  auto ctx = LoadContext(config, options.log);
  std::vector<Cell> cells = EnumerateCells(config, *ctx);

  ExperimentOutcome outcome;
  outcome.dir = ExperimentDir(config);
  outcome.n_cells = cells.size();
  fs::create_directories(outcome.dir);

  std::vector<const Cell*> pending;
  for (const Cell& cell : cells) {
    if (ReadTranscript(CellPath(outcome.dir, cell), config.run_count)) {
      ++outcome.n_resumed;
    } else {
      pending.push_back(&cell);
    }
  }
  if (options.cell_limit && pending.size() > *options.cell_limit) {
    pending.resize(*options.cell_limit);
  }
  if (options.log) {
    *options.log << outcome.dir.string() << ": " << cells.size() << " cells, "
                 << outcome.n_resumed << " on disk, " << pending.size()
                 << " to run\n";
  }

  std::unique_ptr<ChatProvider> owned;
  ChatProvider* provider = options.provider_override;
  std::vector<MCQItem> scripted_items;
  if (provider == nullptr && !pending.empty()) {
    if (config.mode == RunMode::kScripted) {
      for (const auto& [tag, item] : ctx->items) scripted_items.push_back(*item);
      owned = std::make_unique<ScriptedChatProvider>(
          ScriptedModelSpec::LoadFromFile(config.scripted_spec), scripted_items,
          ctx->templates, ctx->markers, config.model_id);
    } else {
      ProviderConfig pc = ProviderConfig::LoadFromFile(config.provider_config);
      owned = std::make_unique<HttpProvider>(pc, options.sleep);
    }
    provider = owned.get();
  }

  std::optional<ResponseCache> cache;
  if (!config.cache_dir.empty()) cache.emplace(config.cache_dir);
  RetryPolicy retry;
  if (config.mode == RunMode::kLive && options.provider_override == nullptr &&
      !pending.empty()) {
    retry = ProviderConfig::LoadFromFile(config.provider_config).retry;
  }
  std::optional<CachingChatClient> client;
  if (provider != nullptr) {
    client.emplace(*provider, cache ? &*cache : nullptr, retry,
                   config.collapse_runs, options.sleep);
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next++;
      if (i >= pending.size()) return;
      const Cell& cell = *pending[i];
      try {
        PromptPair prompts =
            BuildPromptPair(*cell.item, cell.setting, ctx->templates);
        if (!provider->supports_system_role()) {
          prompts = FoldSystemIntoUser(prompts);
        }
        ChatRequest request{prompts.system_prompt, prompts.user_prompt,
                            ParamsFor(config, cell.run)};
        ChatReply reply = client->Chat(request, cell.run);

        EvalTranscript t;
        t.item_id = cell.item->id;
        t.dataset = cell.dataset;
        t.setting = cell.setting;
        t.run_index = cell.run;
        t.system_prompt = request.system_prompt;
        t.user_prompt = request.user_prompt;
        t.raw_response = reply.text;
        t.extraction = ExtractAnswer(reply.text, ctx->markers);
        t.detected_lang = DetectLanguage(reply.text);
        t.gold = cell.item->gold;
        t.correct = t.extraction.letter == cell.item->gold;
        t.truncated = reply.truncated;
        t.request_params = request.params;
        WriteFileAtomic(CellPath(outcome.dir, cell), Json(t).dump(2) + "\n");
        ++completed;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        outcome.failures.push_back({cell.dataset, cell.item->id, cell.setting,
                                    cell.run, e.what()});
        if (options.log) *options.log << "failed: " << CellLabel(cell) << ": "
                                      << e.what() << "\n";
      }
    }
  };
  const int n_threads = std::clamp<int>(
      config.concurrency, 1,
      static_cast<int>(std::max<std::size_t>(1, pending.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  outcome.n_completed = completed.load();
  if (client) {
    outcome.provider_calls = client->provider_calls();
    outcome.cache_hits = client->cache_hits();
  }

  if (outcome.complete()) {
    WriteReportsFrom(config, *ctx, outcome.dir, cells);
    outcome.reports_written = true;
  } else {
    std::sort(outcome.failures.begin(), outcome.failures.end(),
              [](const CellFailure& a, const CellFailure& b) {
                return std::tie(a.dataset, a.item_id, a.setting, a.run_index) <
                       std::tie(b.dataset, b.item_id, b.setting, b.run_index);
              });
    Json fj = {{"missing_cells", outcome.n_cells - outcome.n_resumed -
                                     outcome.n_completed},
               {"failures", Json::array()}};
    for (const CellFailure& f : outcome.failures) {
      fj["failures"].push_back(FailureJson(f));
    }
    WriteFileAtomic(outcome.dir / "failures.json", fj.dump(2) + "\n");
  }
  return outcome;
}

void WriteReports(const ExperimentConfig& config) {
  config.Validate();
  auto ctx = LoadContext(config, nullptr);
  std::vector<Cell> cells = EnumerateCells(config, *ctx);
  const fs::path dir = ExperimentDir(config);
  if (!fs::exists(dir)) {
    throw MissingExperiment("no experiment directory " + dir.string());
  }
  WriteReportsFrom(config, *ctx, dir, cells);
}

std::vector<L2TSetting> DefaultPplSettings(std::span<const Language> orig) {
  std::vector<L2TSetting> out;
  for (Language o : orig) {
    if (o == Language::kEN) continue;
    out.push_back(L2TSetting::Baseline(o));
    out.push_back(L2TSetting::Baseline(Language::kEN));
    out.push_back(L2TSetting::Consistent(o));
    out.push_back(L2TSetting::Consistent(Language::kEN));
    out.push_back(L2TSetting::Transfer(o, Language::kEN));
    out.push_back(L2TSetting::Transfer(Language::kEN, o));
    out.push_back(L2TSetting::Align(o, Language::kEN));
    out.push_back(L2TSetting::Align(Language::kEN, o));
  }
  return out;
}

PplStudyOutcome RunPplStudyForExperiment(const ExperimentConfig& config,
                                         LogprobProvider* provider) {
  config.Validate();
  auto ctx = LoadContext(config, nullptr);
  std::vector<Cell> cells = EnumerateCells(config, *ctx);
  const fs::path dir = ExperimentDir(config);

  if (std::find(config.kinds.begin(), config.kinds.end(),
                SettingKind::kBaseline) == config.kinds.end()) {
    throw MissingExperiment("the experiment has no Baseline runs");
  }
  std::vector<const LoadedEntry*> paired;
  for (const LoadedEntry& e : ctx->entries) {
    if (e.entry->language == Language::kEN) continue;
    if (e.english.empty()) {
      throw MissingExperiment(e.entry->tag + ": no English variant");
    }
    if (e.orig.empty()) {
      throw MissingExperiment(e.entry->tag + ": no original-language items");
    }
    paired.push_back(&e);
  }
  if (paired.empty()) throw MissingExperiment("no paired datasets");

  // Only the Baseline transcripts are needed.
  std::vector<Cell> baseline;
  for (const Cell& c : cells) {
    if (c.setting.kind == SettingKind::kBaseline) baseline.push_back(c);
  }
  auto all = LoadAll(config, dir, baseline);
  Partitions parts = ComputePartitions(config, *ctx, all);

  std::unique_ptr<LogprobProvider> owned;
  if (provider == nullptr) {
    if (config.mode == RunMode::kLive) {
      owned = std::make_unique<HttpProvider>(
          ProviderConfig::LoadFromFile(config.provider_config));
    } else if (config.stub_logprob) {
      const double v = *config.stub_logprob;
      owned = std::make_unique<StubLogprobProvider>(
          [v](const StubLogprobProvider::TokenContext&) { return v; });
    } else {
      throw CapabilityUnsupported(
          "scripted mode has no logprob source; set stub_logprob");
    }
    provider = owned.get();
  }

  PplStudyOutcome outcome;
  outcome.dir = dir / "ppl";
  outcome.counts = parts.counts;
  std::string csv = "dataset,";
  bool header_done = false;
  for (const LoadedEntry* e : paired) {
    const Language o = e->entry->language;
    std::vector<L2TSetting> settings;
    const std::vector<L2TSetting> pool =
        config.ppl_settings.empty() ? DefaultPplSettings(std::span(&o, 1))
                                    : config.ppl_settings;
    auto ok = [&](std::optional<Language> l) {
      return !l || *l == o || *l == Language::kEN;
    };
    for (const L2TSetting& s : pool) {
      if (ok(s.input) && ok(s.thought) && ok(s.output)) settings.push_back(s);
    }
    PplStudyInput input{e->orig, e->english, parts.by_tag[e->entry->tag],
                        settings, config.concurrency};
    PplStudyResult result = RunPplStudy(input, ctx->templates, *provider);
    std::string part = RenderPplCsv(result.rows);
    const std::size_t eol = part.find('\n');
    if (!header_done) {
      csv += part.substr(0, eol + 1);
      header_done = true;
    }
    for (std::size_t pos = eol + 1; pos < part.size();) {
      const std::size_t end = part.find('\n', pos);
      csv += e->entry->tag + "," + part.substr(pos, end - pos + 1);
      pos = end + 1;
    }
    outcome.rows.insert(outcome.rows.end(), result.rows.begin(),
                        result.rows.end());
  }
  fs::create_directories(outcome.dir);
  WriteFileAtomic(outcome.dir / "ppl.csv", csv);
  WriteFileAtomic(outcome.dir / "consistency.csv",
                  RenderConsistencyCsv(outcome.counts));
  return outcome;
}

}  // namespace l2t
