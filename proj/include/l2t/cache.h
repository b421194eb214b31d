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

#ifndef L2T_CACHE_H_
#define L2T_CACHE_H_

#include <atomic>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "l2t/provider.h"

namespace l2t {

// SHA-256 over provider id, model id, both prompts, every request parameter
// and the run index.
std::string ComputeCacheKey(std::string_view provider_id,
                            std::string_view model_id,
                            const ChatRequest& request, int run_index);

// Content-addressed store: <dir>/<key[0:2]>/<key>.json holding the request
// and the reply. Writes are atomic renames, so concurrent writers of the
// same key are harmless.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<ChatReply> Get(const std::string& key) const;
  void Put(const std::string& key, std::string_view provider_id,
           std::string_view model_id, const ChatRequest& request,
           int run_index, const ChatReply& reply) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path PathFor(const std::string& key) const;

  std::filesystem::path dir_;
};

// Provider front end used by the scheduler: cache lookup, in-flight
// de-duplication of identical requests, then ChatWithRetry.
class CachingChatClient {
 public:
  // `cache` may be null. With `collapse_runs` the run index is left out of
  // the key, so repeated runs of a deterministic model share one call.
  CachingChatClient(ChatProvider& provider, const ResponseCache* cache,
                    RetryPolicy retry, bool collapse_runs = false,
                    Sleeper sleep = RealSleep);

  ChatReply Chat(const ChatRequest& request, int run_index);

  std::size_t provider_calls() const { return provider_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }
  ChatProvider& provider() { return provider_; }

 private:
  ChatProvider& provider_;
  const ResponseCache* cache_;
  RetryPolicy retry_;
  bool collapse_runs_;
  Sleeper sleep_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<ChatReply>> in_flight_;
  std::atomic<std::size_t> provider_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

}  // namespace l2t

#endif  // L2T_CACHE_H_
