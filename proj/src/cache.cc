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

#include "l2t/cache.h"

#include "l2t/file_util.h"
#include "l2t/hashing.h"
#include "l2t/types_json.h"

namespace l2t {

namespace fs = std::filesystem;

std::string ComputeCacheKey(std::string_view provider_id,
                            std::string_view model_id,
                            const ChatRequest& request, int run_index) {
  FieldHasher h;
  h.Add(provider_id)
      .Add(model_id)
      .Add(request.system_prompt)
      .Add(request.user_prompt)
      .Add(static_cast<std::int64_t>(request.params.max_new_tokens))
      .Add(request.params.temperature)
      .Add(request.params.top_p)
      .Add(request.params.seed)
      .Add(static_cast<std::int64_t>(run_index));
  return h.HexDigest();
}

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

fs::path ResponseCache::PathFor(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<ChatReply> ResponseCache::Get(const std::string& key) const {
  auto content = TryReadFile(PathFor(key));
  if (!content) return std::nullopt;
  Json j = Json::parse(*content, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.contains("reply")) return std::nullopt;
  ChatReply reply;
  reply.text = j["reply"].at("text").get<std::string>();
  reply.truncated = j["reply"].value("truncated", false);
  return reply;
}

void ResponseCache::Put(const std::string& key, std::string_view provider_id,
                        std::string_view model_id, const ChatRequest& request,
                        int run_index, const ChatReply& reply) const {
  Json j;
  j["key"] = key;
  j["provider_id"] = provider_id;
  j["model_id"] = model_id;
  j["request"] = {{"system_prompt", request.system_prompt},
                  {"user_prompt", request.user_prompt},
                  {"params", request.params},
                  {"run_index", run_index}};
  j["reply"] = {{"text", reply.text}, {"truncated", reply.truncated}};
  WriteFileAtomic(PathFor(key), j.dump(2) + "\n");
}

CachingChatClient::CachingChatClient(ChatProvider& provider,
                                     const ResponseCache* cache,
                                     RetryPolicy retry, bool collapse_runs,
                                     Sleeper sleep)
    : provider_(provider),
      cache_(cache),
      retry_(retry),
      collapse_runs_(collapse_runs),
      sleep_(std::move(sleep)) {}

ChatReply CachingChatClient::Chat(const ChatRequest& request, int run_index) {
  const int key_run = collapse_runs_ ? 0 : run_index;
  const std::string key = ComputeCacheKey(
      provider_.provider_id(), provider_.model_id(), request, key_run);

  if (cache_) {
    if (auto hit = cache_->Get(key)) {
      ++cache_hits_;
      return *hit;
    }
  }

  std::promise<ChatReply> promise;
  std::shared_future<ChatReply> shared;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = in_flight_.find(key);
    if (it != in_flight_.end()) {
      shared = it->second;
    } else {
      shared = promise.get_future().share();
      in_flight_.emplace(key, shared);
      owner = true;
    }
  }
  if (!owner) {
    ++cache_hits_;
    return shared.get();
  }

  try {
    ++provider_calls_;
    ChatReply reply = ChatWithRetry(provider_, request, retry_, sleep_);
    if (cache_) {
      cache_->Put(key, provider_.provider_id(), provider_.model_id(), request,
                  key_run, reply);
    }
    promise.set_value(reply);
    std::lock_guard<std::mutex> lock(mu_);
    in_flight_.erase(key);
    return reply;
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard<std::mutex> lock(mu_);
    in_flight_.erase(key);
    throw;
  }
}

}  // namespace l2t
