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
#include <httplib.h>
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <thread>

#include "l2t/cache.h"
#include "l2t/errors.h"
#include "l2t/file_util.h"
#include "l2t/http_provider.h"
#include "l2t/provider.h"
#include "l2t/scripted_model.h"
#include "l2t/types_json.h"
#include "test_util.h"

namespace l2t {
namespace {

using testing::ScratchDir;
using testing::TemplateDir;
using namespace std::chrono_literals;

const PromptTemplateSet& Templates() {
  static const PromptTemplateSet set =
      PromptTemplateSet::LoadFromDirectory(TemplateDir());
  return set;
}

const MarkerTable& Markers() {
  static const MarkerTable m =
      MarkerTable::LoadFromFile(TemplateDir() / "markers.json");
  return m;
}

// Fails with TransportError `failures` times, then echoes the user prompt.
class FlakyProvider : public ChatProvider {
 public:
  explicit FlakyProvider(int failures, bool reject = false)
      : failures_(failures), reject_(reject) {}
  std::string provider_id() const override { return "flaky"; }
  std::string model_id() const override { return "m"; }
  ChatReply Chat(const ChatRequest& r) override {
    ++calls;
    if (reject_) throw ProviderRejection("401");
    if (calls <= failures_) throw TransportError("503");
    return {"echo:" + r.user_prompt, false};
  }
  std::atomic<int> calls{0};

 private:
  int failures_;
  bool reject_;
};

// Counts calls and holds each one until released.
class SlowProvider : public ChatProvider {
 public:
  std::string provider_id() const override { return "slow"; }
  std::string model_id() const override { return "m"; }
  ChatReply Chat(const ChatRequest& r) override {
    ++calls;
    std::this_thread::sleep_for(50ms);
    return {"slow:" + r.user_prompt + ":" + std::to_string(calls.load()),
            false};
  }
  std::atomic<int> calls{0};
};

ChatRequest Req(std::string user = "hello") {
  ChatRequest r;
  r.system_prompt = "sys";
  r.user_prompt = std::move(user);
  return r;
}

TEST(RetryTest, RetriesTransportErrorsWithBackoff) {
  FlakyProvider p(2);
  std::vector<std::chrono::milliseconds> slept;
  RetryPolicy policy{4, 100ms, 2.0, 150ms};
  ChatReply r = ChatWithRetry(p, Req(), policy,
                              [&](auto d) { slept.push_back(d); });
  EXPECT_EQ(r.text, "echo:hello");
  EXPECT_EQ(p.calls, 3);
  ASSERT_EQ(slept.size(), 2u);
  EXPECT_EQ(slept[0], 100ms);
  EXPECT_EQ(slept[1], 150ms);  // capped
}

TEST(RetryTest, GivesUpAfterMaxAttempts) {
  FlakyProvider p(10);
  int sleeps = 0;
  RetryPolicy policy{3, 1ms, 2.0, 10ms};
  EXPECT_THROW(ChatWithRetry(p, Req(), policy, [&](auto) { ++sleeps; }),
               TransportError);
  EXPECT_EQ(p.calls, 3);
  EXPECT_EQ(sleeps, 2);
}

TEST(RetryTest, RejectionIsNotRetried) {
  FlakyProvider p(0, /*reject=*/true);
  EXPECT_THROW(ChatWithRetry(p, Req(), RetryPolicy{}, [](auto) {}),
               ProviderRejection);
  EXPECT_EQ(p.calls, 1);
}

TEST(RetryTest, RejectsNonPositiveTokenBudget) {
  FlakyProvider p(0);
  ChatRequest r = Req();
  r.params.max_new_tokens = 0;
  EXPECT_THROW(ChatWithRetry(p, r, RetryPolicy{}, [](auto) {}),
               std::invalid_argument);
  EXPECT_EQ(p.calls, 0);
}

TEST(CacheKeyTest, EveryFieldChangesTheKey) {
  const ChatRequest base = Req();
  const std::string k0 = ComputeCacheKey("p", "m", base, 0);
  EXPECT_EQ(k0.size(), 64u);
  EXPECT_EQ(k0, ComputeCacheKey("p", "m", base, 0));

  std::vector<std::string> keys = {
      ComputeCacheKey("p2", "m", base, 0), ComputeCacheKey("p", "m2", base, 0),
      ComputeCacheKey("p", "m", base, 1)};
  auto vary = [&](auto mutate) {
    ChatRequest r = base;
    mutate(r);
    keys.push_back(ComputeCacheKey("p", "m", r, 0));
  };
  vary([](ChatRequest& r) { r.system_prompt += " "; });
  vary([](ChatRequest& r) { r.user_prompt += " "; });
  vary([](ChatRequest& r) { r.params.max_new_tokens = 7; });
  vary([](ChatRequest& r) { r.params.temperature = 0.0; });
  vary([](ChatRequest& r) { r.params.top_p = 1.0; });
  vary([](ChatRequest& r) { r.params.seed = 0; });
  // Field boundaries are unambiguous.
  vary([](ChatRequest& r) {
    r.system_prompt = "sy";
    r.user_prompt = "shello";
  });
  std::set<std::string> distinct(keys.begin(), keys.end());
  distinct.insert(k0);
  EXPECT_EQ(distinct.size(), keys.size() + 1);
}

TEST(CacheTest, SecondIdenticalRequestIsServedFromDisk) {
  ScratchDir dir("cache");
  ResponseCache cache(dir.path());
  FlakyProvider p(0);
  {
    CachingChatClient client(p, &cache, RetryPolicy{});
    ChatReply a = client.Chat(Req(), 0);
    EXPECT_EQ(client.provider_calls(), 1u);
    ChatReply b = client.Chat(Req(), 0);
    EXPECT_EQ(a, b);
    EXPECT_EQ(client.provider_calls(), 1u);
    EXPECT_EQ(client.cache_hits(), 1u);
  }
  // A fresh client over the same directory replays without calling.
  CachingChatClient again(p, &cache, RetryPolicy{});
  EXPECT_EQ(again.Chat(Req(), 0).text, "echo:hello");
  EXPECT_EQ(p.calls, 1);
  // Different run index is a different cell.
  again.Chat(Req(), 1);
  EXPECT_EQ(p.calls, 2);
}

TEST(CacheTest, CollapseRunsSharesOneCall) {
  ScratchDir dir("cache");
  ResponseCache cache(dir.path());
  FlakyProvider p(0);
  CachingChatClient client(p, &cache, RetryPolicy{}, /*collapse_runs=*/true);
  for (int run = 0; run < 3; ++run) client.Chat(Req(), run);
  EXPECT_EQ(p.calls, 1);
}

TEST(CacheTest, ReplayIsByteIdentical) {
  ScratchDir dir("cache");
  ResponseCache cache(dir.path());
  ChatReply reply{"줄 1\n\"quoted\" ٣ 答案\n", true};
  const std::string key = ComputeCacheKey("p", "m", Req(), 0);
  cache.Put(key, "p", "m", Req(), 0, reply);
  auto got = cache.Get(key);
  ASSERT_TRUE(got);
  EXPECT_EQ(*got, reply);
  EXPECT_FALSE(cache.Get(std::string(64, '0')));
}

TEST(CacheTest, ConcurrentIdenticalRequestsShareOneCall) {
  SlowProvider p;
  CachingChatClient client(p, nullptr, RetryPolicy{});
  std::vector<std::thread> threads;
  std::vector<std::string> texts(8);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] { texts[i] = client.Chat(Req(), 0).text; });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(p.calls, 1);
  for (const auto& t : texts) EXPECT_EQ(t, texts[0]);
}

TEST(CacheTest, FailuresAreNotCached) {
  ScratchDir dir("cache");
  ResponseCache cache(dir.path());
  FlakyProvider p(1);
  CachingChatClient client(p, &cache, RetryPolicy{1, 1ms, 2.0, 1ms},
                           false, [](auto) {});
  EXPECT_THROW(client.Chat(Req(), 0), TransportError);
  EXPECT_EQ(client.Chat(Req(), 0).text, "echo:hello");
  EXPECT_EQ(p.calls, 2);
}

MCQItem KoreanItem() {
  MCQItem item;
  item.id = "q1";
  item.dataset = "KMMLU";
  item.language = Language::kKO;
  item.question = "경복궁은 어느 도시에 있습니까?";
  item.options = {"부산", "서울", "대구", "광주"};
  item.gold = Letter::kB;
  return item;
}

TEST(ScriptedModelTest, KnowledgeFollowsThoughtLanguage) {
  ScriptedModelSpec spec;
  spec.knowledge.emplace("q1", Language::kKO);
  spec.distractor = Letter::kA;
  const MCQItem item = KoreanItem();

  MCQItem en = item;
  en.id = "q1";
  en.language = Language::kEN;
  auto answer = [&](const L2TSetting& s) {
    const MCQItem& it = s.input == Language::kEN ? en : item;
    std::string text = ScriptedRespond(spec, it, s, Markers());
    return std::make_pair(ExtractAnswer(text, Markers()),
                          DetectLanguage(text));
  };

  auto [transfer, transfer_lang] =
      answer(L2TSetting::Transfer(Language::kKO, Language::kEN));
  EXPECT_EQ(transfer.letter, Letter::kA);
  EXPECT_EQ(transfer_lang, Language::kEN);

  auto [consistent, consistent_lang] =
      answer(L2TSetting::Consistent(Language::kKO));
  EXPECT_EQ(consistent.letter, Letter::kB);
  EXPECT_EQ(consistent.method, ExtractionMethod::kMarker);
  EXPECT_EQ(consistent_lang, Language::kKO);

  auto [baseline, baseline_lang] = answer(L2TSetting::Baseline(Language::kKO));
  EXPECT_EQ(baseline.letter, Letter::kB);
  EXPECT_EQ(baseline_lang, Language::kKO);

  // Thinks in KO, answers in EN.
  auto [align, align_lang] =
      answer(L2TSetting::Align(Language::kEN, Language::kKO));
  EXPECT_EQ(ScriptedAnswer(spec, en,
                           L2TSetting::Align(Language::kEN, Language::kKO)),
            Letter::kB);
  EXPECT_EQ(align.letter, Letter::kB);
  EXPECT_EQ(align_lang, Language::kEN);
  EXPECT_EQ(ScriptedAnswer(spec, en, L2TSetting::Baseline(Language::kEN)),
            Letter::kA);
}

TEST(ScriptedModelTest, InputLanguagePolicyAndOverrides) {
  ScriptedModelSpec spec;
  spec.policy = AnswerLanguagePolicy::kInputLanguage;
  EXPECT_EQ(spec.ResponseLanguage(
                L2TSetting::Transfer(Language::kZH, Language::kEN)),
            Language::kZH);
  spec.overrides[{Language::kZH, Language::kEN}] = Language::kAR;
  EXPECT_EQ(spec.ResponseLanguage(
                L2TSetting::Transfer(Language::kZH, Language::kEN)),
            Language::kAR);
}

TEST(ScriptedModelTest, ChatProviderRecoversCellFromPrompt) {
  ScriptedModelSpec spec;
  spec.knowledge.emplace("q1", Language::kKO);
  std::vector<MCQItem> items = {KoreanItem()};
  ScriptedChatProvider provider(spec, items, Templates(), Markers());

  const L2TSetting s = L2TSetting::Consistent(Language::kKO);
  PromptPair pair = BuildPromptPair(items[0], s, Templates());
  ChatRequest r{pair.system_prompt, pair.user_prompt, {}};
  ChatReply reply = provider.Chat(r);
  EXPECT_EQ(reply.text, ScriptedRespond(spec, items[0], s, Markers()));

  PromptPair folded = FoldSystemIntoUser(pair);
  ChatRequest rf{folded.system_prompt, folded.user_prompt, {}};
  EXPECT_EQ(provider.Chat(rf).text, reply.text);

  ChatRequest unknown{"", "what?", {}};
  EXPECT_THROW(provider.Chat(unknown), ProviderRejection);
  EXPECT_EQ(provider.calls(), 3u);
}

TEST(StubLogprobTest, WindowCoversUserTokens) {
  auto stub = StubLogprobProvider(
      [](const StubLogprobProvider::TokenContext& c) {
        return c.in_user_window ? -1.0 : -5.0;
      });
  TokenLogProbTrace t = stub.EchoLogprobs("be brief", "one two three four");
  ASSERT_EQ(t.tokens.size(), 6u);
  EXPECT_EQ(t.k, 2u);
  EXPECT_EQ(t.m, 5u);
  EXPECT_EQ(t.m - t.k + 1, 4u);
  EXPECT_EQ(t.tokens[2], "one");
  EXPECT_DOUBLE_EQ(t.logprobs[1], -5.0);
  EXPECT_DOUBLE_EQ(t.logprobs[2], -1.0);
  EXPECT_THROW(stub.EchoLogprobs("sys", "   "), EmptyWindow);
  EXPECT_EQ(stub.calls(), 2u);
}

TEST(TranslatorTest, DictionaryLookup) {
  DictionaryTranslator::Table table;
  table[{Language::kKO, Language::kEN}]["안녕"] = "hello";
  DictionaryTranslator t(std::move(table));
  EXPECT_EQ(t.Translate("안녕", Language::kKO, Language::kEN), "hello");
  EXPECT_THROW(t.Translate("잘가", Language::kKO, Language::kEN),
               TranslationMiss);
  EXPECT_THROW(t.Translate("안녕", Language::kEN, Language::kKO),
               TranslationMiss);
  EXPECT_THROW(t.Translate("안녕", Language::kKO, Language::kKO),
               std::invalid_argument);
}

TEST(TranslatorTest, DictionaryFromFile) {
  ScratchDir dir("dict");
  WriteFileAtomic(dir / "t.json", R"({"ZH->EN": {"你好": "hi"}})");
  auto t = DictionaryTranslator::LoadFromFile(dir / "t.json");
  EXPECT_EQ(t.Translate("你好", Language::kZH, Language::kEN), "hi");
  WriteFileAtomic(dir / "bad.json", R"({"ZHEN": {}})");
  EXPECT_THROW(DictionaryTranslator::LoadFromFile(dir / "bad.json"),
               ConfigError);
}

TEST(TranslatorTest, ChatTranslatorStripsTrailingNewline) {
  class Fixed : public ChatProvider {
   public:
    std::string provider_id() const override { return "f"; }
    std::string model_id() const override { return "f"; }
    ChatReply Chat(const ChatRequest& r) override {
      last = r;
      return {"Gyeongbokgung is in Seoul.\n\n", false};
    }
    ChatRequest last;
  } fixed;
  ChatTranslator t(fixed, RetryPolicy{});
  EXPECT_EQ(t.Translate("경복궁은 서울에 있다.", Language::kKO, Language::kEN),
            "Gyeongbokgung is in Seoul.");
  EXPECT_EQ(fixed.last.params.temperature, 0.0);
  EXPECT_NE(fixed.last.system_prompt.find("Korean"), std::string::npos);
}

// Minimal OpenAI-compatible server on a random local port.
class FakeServer {
 public:
  FakeServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ProviderConfig ConfigFor(const FakeServer& s) {
  ProviderConfig c;
  c.base_url = s.url();
  c.model = "fake-model";
  c.timeout = 5s;
  c.retry = RetryPolicy{2, 1ms, 2.0, 1ms};
  return c;
}

TEST(HttpProviderTest, ChatRequestShapeAndReply) {
  FakeServer fake;
  Json seen;
  fake.server().Post("/v1/chat/completions",
                     [&](const httplib::Request& req, httplib::Response& res) {
                       seen = Json::parse(req.body);
                       seen["auth"] = req.get_header_value("Authorization");
                       res.set_content(
                           R"({"choices":[{"message":{"content":"ok B"},"finish_reason":"length"}]})",
                           "application/json");
                     });
  ::setenv("L2T_TEST_TOKEN", "tok123", 1);
  ProviderConfig c = ConfigFor(fake);
  c.auth_env = "L2T_TEST_TOKEN";
  HttpProvider p(c);
  ChatRequest r = Req("question");
  r.params.temperature = 0.5;
  r.params.max_new_tokens = 64;
  ChatReply reply = p.Chat(r);
  EXPECT_EQ(reply.text, "ok B");
  EXPECT_TRUE(reply.truncated);
  EXPECT_EQ(seen["model"], "fake-model");
  EXPECT_EQ(seen["max_tokens"], 64);
  EXPECT_EQ(seen["temperature"], 0.5);
  EXPECT_FALSE(seen.contains("top_p"));
  EXPECT_EQ(seen["auth"], "Bearer tok123");
  ASSERT_EQ(seen["messages"].size(), 2u);
  EXPECT_EQ(seen["messages"][0]["role"], "system");
  EXPECT_EQ(seen["messages"][1]["content"], "question");

  c.system_role = false;
  HttpProvider folded(c);
  folded.Chat(r);
  ASSERT_EQ(seen["messages"].size(), 1u);
  EXPECT_EQ(seen["messages"][0]["content"], "sys\nquestion");

  c.auth_env = "L2T_TEST_TOKEN_UNSET";
  ::unsetenv("L2T_TEST_TOKEN_UNSET");
  HttpProvider no_token(c);
  EXPECT_THROW(no_token.Chat(r), ProviderRejection);
}

TEST(HttpProviderTest, StatusMapping) {
  FakeServer fake;
  int status = 200;
  fake.server().Post("/v1/chat/completions",
                     [&](const httplib::Request&, httplib::Response& res) {
                       res.status = status;
                       res.set_content("{}", "application/json");
                     });
  HttpProvider p(ConfigFor(fake));
  for (int s : {408, 409, 429, 500, 503}) {
    status = s;
    EXPECT_THROW(p.Chat(Req()), TransportError) << s;
  }
  for (int s : {400, 401, 403, 404}) {
    status = s;
    EXPECT_THROW(p.Chat(Req()), ProviderRejection) << s;
  }
  status = 200;  // malformed body
  EXPECT_THROW(p.Chat(Req()), TransportError);

  ProviderConfig dead = ConfigFor(fake);
  dead.base_url = "http://127.0.0.1:1";
  HttpProvider unreachable(dead);
  EXPECT_THROW(unreachable.Chat(Req()), TransportError);
}

TEST(HttpProviderTest, EchoLogprobsWindow) {
  FakeServer fake;
  Json seen;
  fake.server().Post("/v1/completions", [&](const httplib::Request& req,
                                            httplib::Response& res) {
    seen = Json::parse(req.body);
    // prompt "sys\nab cd": tokens "sys", "\n", "ab", " cd", then one
    // generated token past the prompt.
    res.set_content(R"({"choices":[{"logprobs":{
        "tokens":["sys","\n","ab"," cd","x"],
        "token_logprobs":[null,-0.5,-1.0,-2.0,-9.0],
        "text_offset":[0,3,4,6,9]}}]})",
                    "application/json");
  });
  ProviderConfig c = ConfigFor(fake);
  c.logprobs = true;
  HttpProvider p(c);
  TokenLogProbTrace t = p.EchoLogprobs("sys", "ab cd");
  EXPECT_EQ(seen["prompt"], "sys\nab cd");
  EXPECT_EQ(seen["echo"], true);
  EXPECT_EQ(seen["max_tokens"], 0);
  ASSERT_EQ(t.tokens.size(), 4u);
  EXPECT_EQ(t.k, 2u);
  EXPECT_EQ(t.m, 3u);
  EXPECT_DOUBLE_EQ(t.logprobs[0], 0.0);
  EXPECT_DOUBLE_EQ(t.logprobs[3], -2.0);

  c.logprobs = false;
  HttpProvider no_caps(c);
  EXPECT_THROW(no_caps.EchoLogprobs("sys", "ab cd"), CapabilityUnsupported);
}

TEST(HttpProviderTest, EchoLogprobsFailures) {
  FakeServer fake;
  int status = 503;
  int hits = 0;
  fake.server().Post("/v1/completions",
                     [&](const httplib::Request&, httplib::Response& res) {
                       ++hits;
                       res.status = status;
                       res.set_content(R"({"choices":[{"text":""}]})",
                                       "application/json");
                     });
  ProviderConfig c = ConfigFor(fake);
  c.logprobs = true;
  HttpProvider p(c, [](auto) {});
  EXPECT_THROW(p.EchoLogprobs("s", "u"), TraceUnavailable);
  EXPECT_EQ(hits, 2);
  status = 400;
  EXPECT_THROW(p.EchoLogprobs("s", "u"), TraceUnavailable);
  EXPECT_EQ(hits, 3);
  status = 200;  // no logprobs block
  EXPECT_THROW(p.EchoLogprobs("s", "u"), CapabilityUnsupported);
  EXPECT_THROW(p.EchoLogprobs("s", ""), EmptyWindow);
}

TEST(ProviderConfigTest, LoadFromFile) {
  ScratchDir dir("pc");
  WriteFileAtomic(dir / "p.json", R"({
    "base_url": "https://api.example.com", "model": "m1",
    "auth_env": "MY_KEY", "capabilities": {"system_role": false, "logprobs": true},
    "timeout_s": 30, "retry": {"max_attempts": 6, "initial_backoff_ms": 250}})");
  ProviderConfig c = ProviderConfig::LoadFromFile(dir / "p.json");
  EXPECT_EQ(c.model, "m1");
  EXPECT_FALSE(c.system_role);
  EXPECT_TRUE(c.logprobs);
  EXPECT_EQ(c.timeout, 30s);
  EXPECT_EQ(c.retry.max_attempts, 6);
  EXPECT_EQ(c.retry.initial_backoff, 250ms);
  WriteFileAtomic(dir / "bad.json", R"({"model": "m1"})");
  EXPECT_THROW(ProviderConfig::LoadFromFile(dir / "bad.json"), ConfigError);
}

}  // namespace
}  // namespace l2t
