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

#include "l2t/provider.h"

#include <algorithm>
#include <json.hpp>
#include <stdexcept>
#include <thread>

#include "l2t/errors.h"
#include "l2t/file_util.h"

namespace l2t {

void ValidateChatRequest(const ChatRequest& request) {
  if (request.params.max_new_tokens < 1) {
    throw std::invalid_argument("max_new_tokens must be >= 1");
  }
}

void RealSleep(std::chrono::milliseconds duration) {
  std::this_thread::sleep_for(duration);
}

ChatReply ChatWithRetry(ChatProvider& provider, const ChatRequest& request,
                        const RetryPolicy& policy, const Sleeper& sleep) {
  ValidateChatRequest(request);
  const int attempts = std::max(1, policy.max_attempts);
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return provider.Chat(request);
    } catch (const TransportError&) {
      if (attempt >= attempts) throw;
    }
    sleep(backoff);
    auto next = std::chrono::milliseconds(static_cast<long long>(
        static_cast<double>(backoff.count()) * policy.multiplier));
    backoff = std::min(next, policy.max_backoff);
  }
}

std::vector<std::string> SplitOnWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

StubLogprobProvider StubLogprobProvider::Constant(double logprob) {
  return StubLogprobProvider(
      [logprob](const TokenContext&) { return logprob; });
}

TokenLogProbTrace StubLogprobProvider::EchoLogprobs(
    std::string_view system_prompt, std::string_view user_prompt) {
  ++calls_;
  std::vector<std::string> sys_tokens = SplitOnWhitespace(system_prompt);
  std::vector<std::string> user_tokens = SplitOnWhitespace(user_prompt);
  if (user_tokens.empty()) {
    throw EmptyWindow("user prompt has no tokens");
  }
  TokenLogProbTrace trace;
  trace.k = sys_tokens.size();
  trace.m = sys_tokens.size() + user_tokens.size() - 1;
  for (auto& t : sys_tokens) trace.tokens.push_back(std::move(t));
  for (auto& t : user_tokens) trace.tokens.push_back(std::move(t));
  for (std::size_t i = 0; i < trace.tokens.size(); ++i) {
    trace.logprobs.push_back(fn_({system_prompt, user_prompt, trace.tokens[i],
                                  i, i >= trace.k}));
  }
  ValidateTrace(trace);
  return trace;
}

std::string Translator::Translate(std::string_view text, Language source,
                                  Language target) {
  if (source == target) {
    throw std::invalid_argument("translation source and target are both " +
                                std::string(LanguageTag(source)));
  }
  return DoTranslate(text, source, target);
}

DictionaryTranslator DictionaryTranslator::LoadFromFile(
    const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(ReadFileOrThrow(path));
  Table table;
  for (auto& [direction, phrases] : j.items()) {
    auto arrow = direction.find("->");
    if (arrow == std::string::npos) {
      throw ConfigError("translation table key '" + direction +
                        "' is not of the form SRC->TGT");
    }
    auto key = std::make_pair(LanguageFromTag(direction.substr(0, arrow)),
                              LanguageFromTag(direction.substr(arrow + 2)));
    for (auto& [from, to] : phrases.items()) {
      table[key][from] = to.get<std::string>();
    }
  }
  return DictionaryTranslator(std::move(table));
}

std::string DictionaryTranslator::DoTranslate(std::string_view text,
                                              Language source,
                                              Language target) {
  auto dir = table_.find({source, target});
  if (dir != table_.end()) {
    auto it = dir->second.find(text);
    if (it != dir->second.end()) return it->second;
  }
  throw TranslationMiss("no " + std::string(LanguageTag(source)) + "->" +
                        std::string(LanguageTag(target)) +
                        " translation for '" + std::string(text) + "'");
}

std::string ChatTranslator::BuildInstruction(Language source,
                                             Language target) {
  static const std::map<Language, std::string> kNames = {
      {Language::kEN, "English"},
      {Language::kZH, "Simplified Chinese"},
      {Language::kKO, "Korean"},
      {Language::kAR, "Arabic"}};
  return "Translate the user's text from " + kNames.at(source) + " to " +
         kNames.at(target) +
         ". Reply with the translation only, without quotes or commentary.";
}

std::string ChatTranslator::DoTranslate(std::string_view text,
                                        Language source, Language target) {
  ChatRequest request;
  request.system_prompt = BuildInstruction(source, target);
  request.user_prompt = std::string(text);
  request.params.temperature = 0.0;
  ChatReply reply = ChatWithRetry(provider_, request, retry_);
  return std::string(StripTrailingNewlines(reply.text));
}

}  // namespace l2t
