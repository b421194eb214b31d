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

// Adapter for OpenAI-compatible HTTP endpoints: /chat/completions for chat
// and /completions with echo for prompt log-probabilities.

#ifndef L2T_HTTP_PROVIDER_H_
#define L2T_HTTP_PROVIDER_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <semaphore>
#include <string>

#include "l2t/provider.h"

namespace l2t {

struct ProviderConfig {
  std::string provider_id = "openai-compatible";
  // scheme://host[:port], no trailing path.
  std::string base_url;
  std::string chat_path = "/v1/chat/completions";
  std::string completions_path = "/v1/completions";
  std::string model;
  // Name of the environment variable holding the bearer token. Empty means
  // no Authorization header.
  std::string auth_env;
  bool system_role = true;
  bool logprobs = false;
  int max_in_flight = 8;
  std::chrono::seconds timeout{120};
  // Used by EchoLogprobs only; chat retries live in CachingChatClient.
  RetryPolicy retry;

  // {"provider_id", "base_url", "chat_path", "completions_path", "model",
  //  "auth_env", "capabilities": {"system_role", "logprobs"},
  //  "max_in_flight", "timeout_s", "retry": {"max_attempts",
  //  "initial_backoff_ms", "multiplier", "max_backoff_ms"}}
  static ProviderConfig LoadFromFile(const std::filesystem::path& path);
};

class HttpProvider : public ChatProvider, public LogprobProvider {
 public:
  explicit HttpProvider(ProviderConfig config, Sleeper sleep = RealSleep);
  ~HttpProvider() override;

  std::string provider_id() const override { return config_.provider_id; }
  std::string model_id() const override { return config_.model; }
  bool supports_system_role() const override { return config_.system_role; }

  // Single attempt. HTTP 408/409/429/5xx and connection failures raise
  // TransportError; other non-2xx statuses raise ProviderRejection.
  ChatReply Chat(const ChatRequest& request) override;

  // The prompt is FoldSystemIntoUser-shaped (system, newline, user). The
  // window starts at the first token that overlaps the user prompt bytes.
  // A null leading logprob (no conditioning context) is stored as 0 and
  // excluded from the window.
  TokenLogProbTrace EchoLogprobs(std::string_view system_prompt,
                                 std::string_view user_prompt) override;

  const ProviderConfig& config() const { return config_; }

 private:
  std::string Post(const std::string& path, const std::string& body);

  ProviderConfig config_;
  Sleeper sleep_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace l2t

#endif  // L2T_HTTP_PROVIDER_H_
