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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "l2t/http_provider.h"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>

#include "l2t/errors.h"
#include "l2t/file_util.h"
#include "l2t/types_json.h"

namespace l2t {

namespace {

bool IsRetriableStatus(int status) {
  return status == 408 || status == 409 || status == 429 || status >= 500;
}

// RAII slot in the in-flight bound.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

ProviderConfig ProviderConfig::LoadFromFile(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(ReadFileOrThrow(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ProviderConfig c;
  c.provider_id = j.value("provider_id", c.provider_id);
  c.base_url = j.value("base_url", std::string());
  c.chat_path = j.value("chat_path", c.chat_path);
  c.completions_path = j.value("completions_path", c.completions_path);
  c.model = j.value("model", std::string());
  c.auth_env = j.value("auth_env", std::string());
  if (j.contains("capabilities")) {
    const Json& caps = j["capabilities"];
    c.system_role = caps.value("system_role", c.system_role);
    c.logprobs = caps.value("logprobs", c.logprobs);
  }
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.timeout = std::chrono::seconds(j.value("timeout_s", 120));
  if (j.contains("retry")) {
    const Json& r = j["retry"];
    c.retry.max_attempts = r.value("max_attempts", c.retry.max_attempts);
    c.retry.initial_backoff = std::chrono::milliseconds(
        r.value("initial_backoff_ms", c.retry.initial_backoff.count()));
    c.retry.multiplier = r.value("multiplier", c.retry.multiplier);
    c.retry.max_backoff = std::chrono::milliseconds(
        r.value("max_backoff_ms", c.retry.max_backoff.count()));
  }
  if (c.base_url.empty()) throw ConfigError("provider config: base_url missing");
  if (c.model.empty()) throw ConfigError("provider config: model missing");
  if (c.max_in_flight < 1) {
    throw ConfigError("provider config: max_in_flight must be >= 1");
  }
  return c;
}

HttpProvider::HttpProvider(ProviderConfig config, Sleeper sleep)
    : config_(std::move(config)),
      sleep_(std::move(sleep)),
      slots_(std::make_unique<std::counting_semaphore<>>(
          std::max(1, config_.max_in_flight))) {}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::Post(const std::string& path,
                               const std::string& body) {
  SlotGuard slot(*slots_);
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.auth_env.empty()) {
    const char* token = std::getenv(config_.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ProviderRejection("environment variable " + config_.auth_env +
                              " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw TransportError(config_.base_url + path + ": " +
                         httplib::to_string(res.error()));
  }
  if (res->status >= 200 && res->status < 300) return res->body;
  std::string msg = "HTTP " + std::to_string(res->status) + " from " +
                    config_.base_url + path + ": " + res->body.substr(0, 300);
  if (IsRetriableStatus(res->status)) throw TransportError(msg);
  throw ProviderRejection(msg);
}

ChatReply HttpProvider::Chat(const ChatRequest& request) {
  ValidateChatRequest(request);
  Json messages = Json::array();
  std::string user = request.user_prompt;
  if (!request.system_prompt.empty()) {
    if (config_.system_role) {
      messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    } else {
      user = request.system_prompt + "\n" + user;
    }
  }
  messages.push_back({{"role", "user"}, {"content", user}});
  Json body = {{"model", config_.model},
               {"messages", messages},
               {"max_tokens", request.params.max_new_tokens}};
  if (request.params.temperature) body["temperature"] = *request.params.temperature;
  if (request.params.top_p) body["top_p"] = *request.params.top_p;
  if (request.params.seed) body["seed"] = *request.params.seed;

  const std::string raw = Post(config_.chat_path, body.dump());
  Json j = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("choices") || j["choices"].empty()) {
    throw TransportError("malformed chat response: " + raw.substr(0, 300));
  }
  const Json& choice = j["choices"][0];
  ChatReply reply;
  const Json& content = choice.at("message").value("content", Json());
  if (content.is_string()) reply.text = content.get<std::string>();
  reply.truncated = choice.value("finish_reason", Json()) == "length";
  return reply;
}

TokenLogProbTrace HttpProvider::EchoLogprobs(std::string_view system_prompt,
                                             std::string_view user_prompt) {
  if (!config_.logprobs) {
    throw CapabilityUnsupported(config_.provider_id +
                                " does not return prompt log-probabilities");
  }
  if (user_prompt.empty()) throw EmptyWindow("user prompt is empty");
  std::string prompt;
  if (!system_prompt.empty()) {
    prompt.append(system_prompt).append("\n");
  }
  const std::size_t user_start = prompt.size();
  prompt.append(user_prompt);

  Json body = {{"model", config_.model}, {"prompt", prompt},
               {"max_tokens", 0},        {"echo", true},
               {"logprobs", 0}};

  std::string raw;
  const int attempts = std::max(1, config_.retry.max_attempts);
  auto backoff = config_.retry.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      raw = Post(config_.completions_path, body.dump());
      break;
    } catch (const TransportError& e) {
      if (attempt >= attempts) throw TraceUnavailable(e.what());
    } catch (const ProviderRejection& e) {
      throw TraceUnavailable(e.what());
    }
    sleep_(backoff);
    backoff = std::min(
        std::chrono::milliseconds(static_cast<long long>(
            static_cast<double>(backoff.count()) * config_.retry.multiplier)),
        config_.retry.max_backoff);
  }

  Json j = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("choices") || j["choices"].empty()) {
    throw TraceUnavailable("malformed completions response");
  }
  const Json& lp = j["choices"][0].value("logprobs", Json());
  if (!lp.is_object() || !lp.contains("tokens") ||
      !lp.contains("token_logprobs") || !lp.contains("text_offset")) {
    throw CapabilityUnsupported(config_.provider_id +
                                " returned no prompt log-probabilities");
  }
  const Json& tokens = lp["tokens"];
  const Json& values = lp["token_logprobs"];
  const Json& offsets = lp["text_offset"];
  if (tokens.size() != values.size() || tokens.size() != offsets.size()) {
    throw TraceUnavailable("logprob arrays differ in length");
  }

  TokenLogProbTrace trace;
  std::optional<std::size_t> k;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string tok = tokens[i].get<std::string>();
    const std::size_t start = offsets[i].get<std::size_t>();
    // Echo responses can also carry generated tokens past the prompt.
    if (start >= prompt.size()) break;
    const std::size_t end = start + tok.size();
    if (!k && end > user_start) k = i;
    if (values[i].is_null()) {
      if (i != 0) throw TraceUnavailable("null logprob at token " + std::to_string(i));
      trace.logprobs.push_back(0.0);
      if (k && *k == 0) k = 1;
    } else {
      trace.logprobs.push_back(values[i].get<double>());
    }
    trace.tokens.push_back(std::move(tok));
  }
  if (!k || *k >= trace.tokens.size()) {
    throw EmptyWindow("no scored tokens cover the user prompt");
  }
  trace.k = *k;
  trace.m = trace.tokens.size() - 1;
  ValidateTrace(trace);
  return trace;
}

}  // namespace l2t
