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

#include "l2t/types_json.h"

#include <string>

#include "l2t/errors.h"

namespace l2t {

namespace {

template <typename T>
void PutOptional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
std::optional<T> GetOptional(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->template get<T>();
}

}  // namespace

void to_json(Json& j, Language lang) { j = std::string(LanguageTag(lang)); }

void from_json(const Json& j, Language& lang) {
  lang = LanguageFromTag(j.get<std::string>());
}

void to_json(Json& j, Letter letter) { j = std::string(1, LetterChar(letter)); }

void from_json(const Json& j, Letter& letter) {
  auto s = j.get<std::string>();
  auto parsed = ParseLetter(s);
  if (!parsed) throw InvalidItem("answer letter must be one of A-D, got '" + s + "'");
  letter = *parsed;
}

void to_json(Json& j, SettingKind kind) { j = std::string(SettingKindName(kind)); }

void from_json(const Json& j, SettingKind& kind) {
  auto s = j.get<std::string>();
  auto parsed = ParseSettingKind(s);
  if (!parsed) throw InvalidSetting("unknown setting kind '" + s + "'");
  kind = *parsed;
}

void to_json(Json& j, const L2TSetting& s) {
  j = Json::object();
  j["kind"] = s.kind;
  j["input"] = s.input;
  PutOptional(j, "thought", s.thought);
  PutOptional(j, "output", s.output);
  PutOptional(j, "persona_variant", s.persona_variant);
}

void from_json(const Json& j, L2TSetting& s) {
  s.kind = j.at("kind").get<SettingKind>();
  s.input = j.at("input").get<Language>();
  s.thought = GetOptional<Language>(j, "thought");
  s.output = GetOptional<Language>(j, "output");
  s.persona_variant = GetOptional<int>(j, "persona_variant");
  ValidateSetting(s);
}

void to_json(Json& j, const MCQItem& item) {
  j = Json::object();
  j["id"] = item.id;
  j["dataset"] = item.dataset;
  j["topic"] = item.topic;
  j["language"] = item.language;
  j["question"] = item.question;
  Json options = Json::object();
  for (std::size_t i = 0; i < item.options.size(); ++i) {
    options[std::string(1, LetterChar(LetterAt(i)))] = item.options[i];
  }
  j["options"] = std::move(options);
  j["answer"] = item.gold;
  PutOptional(j, "paired_id", item.paired_id);
}

void from_json(const Json& j, MCQItem& item) {
  if (!j.is_object()) throw InvalidItem("record is not an object");
  item.id = j.at("id").get<std::string>();
  item.dataset = j.value("dataset", std::string());
  item.topic = j.contains("topic") && !j.at("topic").is_null()
                   ? j.at("topic").get<std::string>()
                   : std::string();
  item.language = j.at("language").get<Language>();
  item.question = j.at("question").get<std::string>();

  const Json& options = j.at("options");
  item.options.clear();
  if (options.is_array()) {
    for (const auto& o : options) item.options.push_back(o.get<std::string>());
  } else if (options.is_object()) {
    // Letters must run contiguously from A.
    for (std::size_t i = 0; i < options.size(); ++i) {
      std::string key(1, static_cast<char>('A' + i));
      if (!options.contains(key)) {
        throw InvalidItem("option letters must be contiguous from A");
      }
      item.options.push_back(options.at(key).get<std::string>());
    }
  } else {
    throw InvalidItem("options must be an object or array");
  }
  if (item.options.size() > kMaxOptions) {
    throw InvalidItem("more than 4 options");
  }
  item.gold = j.at("answer").get<Letter>();
  item.paired_id = GetOptional<std::string>(j, "paired_id");
  ValidateItem(item);
}

void to_json(Json& j, const RequestParams& p) {
  j = Json::object();
  j["max_new_tokens"] = p.max_new_tokens;
  PutOptional(j, "temperature", p.temperature);
  PutOptional(j, "top_p", p.top_p);
  PutOptional(j, "seed", p.seed);
}

void from_json(const Json& j, RequestParams& p) {
  p.max_new_tokens = j.value("max_new_tokens", 1024);
  p.temperature = GetOptional<double>(j, "temperature");
  p.top_p = GetOptional<double>(j, "top_p");
  p.seed = GetOptional<std::int64_t>(j, "seed");
}

void to_json(Json& j, const ExtractionResult& r) {
  j = Json::object();
  PutOptional(j, "letter", r.letter);
  j["method"] = std::string(ExtractionMethodName(r.method));
  PutOptional(j, "marker_language", r.marker_language);
  j["needs_audit"] = r.needs_audit;
}

void from_json(const Json& j, ExtractionResult& r) {
  r.letter = GetOptional<Letter>(j, "letter");
  auto method = ParseExtractionMethod(j.at("method").get<std::string>());
  if (!method) throw InvalidItem("unknown extraction method");
  r.method = *method;
  r.marker_language = GetOptional<Language>(j, "marker_language");
  r.needs_audit = j.value("needs_audit", false);
}

void to_json(Json& j, const EvalTranscript& t) {
  j = Json::object();
  j["item_id"] = t.item_id;
  j["dataset"] = t.dataset;
  j["setting"] = t.setting;
  j["run_index"] = t.run_index;
  j["system_prompt"] = t.system_prompt;
  j["user_prompt"] = t.user_prompt;
  j["raw_response"] = t.raw_response;
  j["extraction"] = t.extraction;
  j["detected_lang"] = std::string(DetectedTag(t.detected_lang));
  j["gold"] = t.gold;
  j["correct"] = t.correct;
  j["truncated"] = t.truncated;
  j["request_params"] = t.request_params;
}

void from_json(const Json& j, EvalTranscript& t) {
  t.item_id = j.at("item_id").get<std::string>();
  t.dataset = j.value("dataset", std::string());
  t.setting = j.at("setting").get<L2TSetting>();
  t.run_index = j.at("run_index").get<int>();
  t.system_prompt = j.at("system_prompt").get<std::string>();
  t.user_prompt = j.at("user_prompt").get<std::string>();
  t.raw_response = j.at("raw_response").get<std::string>();
  t.extraction = j.at("extraction").get<ExtractionResult>();
  t.detected_lang = ParseDetectedTag(j.at("detected_lang").get<std::string>());
  t.gold = j.at("gold").get<Letter>();
  t.correct = j.at("correct").get<bool>();
  t.truncated = j.value("truncated", false);
  t.request_params = j.at("request_params").get<RequestParams>();
}

void to_json(Json& j, const TokenLogProbTrace& t) {
  j = Json::object();
  j["tokens"] = t.tokens;
  j["logprobs"] = t.logprobs;
  j["k"] = t.k;
  j["m"] = t.m;
}

void from_json(const Json& j, TokenLogProbTrace& t) {
  t.tokens = j.at("tokens").get<std::vector<std::string>>();
  t.logprobs = j.at("logprobs").get<std::vector<double>>();
  t.k = j.at("k").get<std::size_t>();
  t.m = j.at("m").get<std::size_t>();
  ValidateTrace(t);
}

}  // namespace l2t
