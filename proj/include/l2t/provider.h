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

// Provider interfaces: chat completion, prompt log-probabilities and
// translation, plus the retry loop and the offline stubs used by tests and
// scripted runs.

#ifndef L2T_PROVIDER_H_
#define L2T_PROVIDER_H_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l2t/types.h"

namespace l2t {

struct ChatRequest {
  std::string system_prompt;
  std::string user_prompt;
  // Absent temperature / top_p / seed mean "provider default".
  RequestParams params;
};

// Throws std::invalid_argument when max_new_tokens < 1.
void ValidateChatRequest(const ChatRequest& request);

struct ChatReply {
  std::string text;
  // The provider reported that generation stopped at max_new_tokens.
  bool truncated = false;

  friend bool operator==(const ChatReply&, const ChatReply&) = default;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;

  virtual std::string provider_id() const = 0;
  virtual std::string model_id() const = 0;
  virtual bool supports_system_role() const { return true; }

  // Throws TransportError (retriable) or ProviderRejection (final).
  virtual ChatReply Chat(const ChatRequest& request) = 0;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
void RealSleep(std::chrono::milliseconds duration);

// Retries TransportError with exponential backoff; the last TransportError is
// rethrown once `max_attempts` calls have failed. ProviderRejection is never
// retried.
ChatReply ChatWithRetry(ChatProvider& provider, const ChatRequest& request,
                        const RetryPolicy& policy,
                        const Sleeper& sleep = RealSleep);

class LogprobProvider {
 public:
  virtual ~LogprobProvider() = default;

  virtual std::string provider_id() const = 0;

  // Log-probabilities for the concatenated system + user context. [k, m]
  // covers exactly the user-prompt tokens. Throws EmptyWindow for an empty
  // user prompt, CapabilityUnsupported when the backend has no prompt
  // log-probabilities and TraceUnavailable when this one prompt failed.
  virtual TokenLogProbTrace EchoLogprobs(std::string_view system_prompt,
                                         std::string_view user_prompt) = 0;
};

// Offline logprob source. Context is tokenised on ASCII whitespace; the
// value function receives the user prompt's own text and the token's index
// within the full context.
class StubLogprobProvider : public LogprobProvider {
 public:
  struct TokenContext {
    std::string_view system_prompt;
    std::string_view user_prompt;
    std::string_view token;
    std::size_t index;
    bool in_user_window;
  };
  using ValueFn = std::function<double(const TokenContext&)>;

  explicit StubLogprobProvider(ValueFn fn) : fn_(std::move(fn)) {}
  static StubLogprobProvider Constant(double logprob);

  std::string provider_id() const override { return "stub-logprob"; }
  TokenLogProbTrace EchoLogprobs(std::string_view system_prompt,
                                 std::string_view user_prompt) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  ValueFn fn_;
  std::atomic<std::size_t> calls_{0};
};

// Whitespace tokenisation used by the stub.
std::vector<std::string> SplitOnWhitespace(std::string_view text);

class Translator {
 public:
  virtual ~Translator() = default;

  // Throws std::invalid_argument when source == target.
  std::string Translate(std::string_view text, Language source,
                        Language target);

 protected:
  virtual std::string DoTranslate(std::string_view text, Language source,
                                  Language target) = 0;
};

// Exact phrase table. Unmapped text raises TranslationMiss.
class DictionaryTranslator : public Translator {
 public:
  using Table = std::map<std::pair<Language, Language>,
                         std::map<std::string, std::string, std::less<>>>;

  explicit DictionaryTranslator(Table table) : table_(std::move(table)) {}

  // {"KO->EN": {"안녕": "hello"}, ...}
  static DictionaryTranslator LoadFromFile(const std::filesystem::path& path);

 protected:
  std::string DoTranslate(std::string_view text, Language source,
                          Language target) override;

 private:
  Table table_;
};

// Translation through a chat model, one request per text.
class ChatTranslator : public Translator {
 public:
  ChatTranslator(ChatProvider& provider, RetryPolicy retry)
      : provider_(provider), retry_(retry) {}

  static std::string BuildInstruction(Language source, Language target);

 protected:
  std::string DoTranslate(std::string_view text, Language source,
                          Language target) override;

 private:
  ChatProvider& provider_;
  RetryPolicy retry_;
};

}  // namespace l2t

#endif  // L2T_PROVIDER_H_
