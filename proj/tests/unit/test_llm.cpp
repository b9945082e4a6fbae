#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <atomic>
#include <cstdlib>
#include <random>
#include <thread>

#include "catprompt/llm/live.hpp"
#include "catprompt/llm/mock.hpp"
#include "catprompt/llm/replay.hpp"
#include "catprompt/llm/tokenizer.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace catprompt;
using namespace catprompt::llm;
using testing::error_of;

namespace {

MockRuleSet echo_rules() {
  MockRuleSet r;
  r.add_rule({"identity", R"(^Return ([\s\S]*)$)", "$1", std::nullopt});
  return r;
}

// Counts calls so replay tests can tell hits from forwarded misses.
class CountingBackend final : public Backend {
 public:
  explicit CountingBackend(BackendConfig c = {}) : Backend(std::move(c)) {}
  std::string kind() const override { return "counting"; }
  std::atomic<int> calls{0};

 protected:
  std::string do_complete(const CompletionRequest& r) override {
    ++calls;
    return "seen:" + r.prompt;
  }
};

struct EnvGuard {
  std::string name;
  std::optional<std::string> old;
  EnvGuard(std::string n, const char* value) : name(std::move(n)) {
    if (const char* v = std::getenv(name.c_str())) old = v;
    if (value) {
      ::setenv(name.c_str(), value, 1);
    } else {
      ::unsetenv(name.c_str());
    }
  }
  ~EnvGuard() {
    if (old) {
      ::setenv(name.c_str(), old->c_str(), 1);
    } else {
      ::unsetenv(name.c_str());
    }
  }
};

}  // namespace

TEST_CASE("whitespace tokens carry their leading whitespace") {
  Tokenizer t;
  CHECK(t.tokenize("a b c") == std::vector<std::string>{"a", " b", " c"});
  CHECK(t.count("a b c") == 3);
  CHECK(t.count("") == 0);
  CHECK(t.tokenize("  ") == std::vector<std::string>{"  "});
  CHECK(t.tokenize(" x\n") == std::vector<std::string>{" x\n"});
  CHECK(t.count("one\ntwo\tthree  four") == 4);
}

TEST_CASE("byte scheme counts bytes") {
  Tokenizer t{TokenScheme::byte};
  CHECK(t.count("a b") == 3);
  CHECK(t.count("") == 0);
}

TEST_CASE("tokenization is lossless on random strings") {
  std::mt19937_64 rng(2024);
  for (auto scheme : {TokenScheme::whitespace, TokenScheme::byte}) {
    Tokenizer t{scheme};
    for (int i = 0; i < 1000; ++i) {
      auto s = testing::random_text(rng, 60, "ab \n\t.x");
      auto toks = t.tokenize(s);
      CHECK(t.detokenize(toks) == s);
      CHECK(t.count(s) == toks.size());
      for (const auto& tok : toks) CHECK_FALSE(tok.empty());
    }
  }
}

TEST_CASE("budget boundaries") {
  Tokenizer t;
  TokenBudget k8{8};
  auto fits = enforce_budget({"w1 w2 w3 w4 w5", 3, 0}, k8, t);
  CHECK(fits.accepted);
  CHECK(fits.prompt_tokens == 5);

  auto over = enforce_budget({"w1 w2 w3 w4 w5 w6", 3, 0}, k8, t);
  CHECK_FALSE(over.accepted);
  CHECK(over.prompt_tokens == 6);
  CHECK(over.max_output_tokens == 3);
  CHECK(over.k == 8);

  CHECK_FALSE(enforce_budget({"x", 0, 0}, TokenBudget{0}, t).accepted);
}

TEST_CASE("backend rejects empty and over-budget requests before the call") {
  BackendConfig c;
  c.budget.k = 8;
  auto inner = std::make_shared<CountingBackend>(c);
  CHECK(error_of([&] { inner->complete({"", 3, 0}); }) == Errc::empty_prompt);
  CHECK(error_of([&] { inner->complete({" \n ", 3, 0}); }) == Errc::empty_prompt);
  CHECK(error_of([&] { inner->complete({"w1 w2 w3 w4 w5 w6", 3, 0}); }) == Errc::budget_exceeded);
  CHECK(error_of([&] { inner->complete({"x", 0, 0}); }) == Errc::budget_exceeded);
  CHECK(inner->calls == 0);
  CHECK(inner->complete({"w1 w2 w3 w4 w5", 3, 0}) == "seen:w1 w2 w3 w4 w5");
}

TEST_CASE("mock identity rule, refusal and EOS") {
  MockBackend m(echo_rules());
  CHECK(m.complete({"Return hello", 16, 0}) == "hello");
  CHECK(m.complete({"Return two\nlines", 16, 0}) == "two\nlines");
  CHECK(m.complete({"Translate hello", 16, 0}) == kDefaultRefusal);
  CHECK(m.complete({"anything\n</s>", 16, 0}) == "");
  CHECK(error_of([&] { m.complete({"", 16, 0}); }) == Errc::empty_prompt);
}

TEST_CASE("first matching rule wins and $ references expand") {
  MockRuleSet r;
  r.add_rule({"swap", R"(^swap (\w+) (\w+)$)", "$2 $1 $$", std::nullopt});
  r.add_rule({"any", R"(^swap)", "generic", std::nullopt});
  MockBackend m(r);
  CHECK(m.complete({"swap left right", 16, 0}) == "right left $");
  CHECK(m.complete({"swap only", 16, 0}) == "generic");
}

TEST_CASE("a lookup miss falls through to later rules") {
  MockRuleSet r;
  r.add_table("capitals", {{"France", "Paris"}});
  r.add_rule({"capital", R"(^Capital of (\w+)$)", "$1", "capitals"});
  r.add_rule({"fallback", R"(^Capital of)", "unknown", std::nullopt});
  MockBackend m(r);
  CHECK(m.complete({"Capital of France", 16, 0}) == "Paris");
  CHECK(m.complete({"Capital of Spain", 16, 0}) == "unknown");
  CHECK(r.match("nothing") == std::nullopt);
}

TEST_CASE("refusal text is configurable") {
  auto r = echo_rules();
  r.set_refusal("no");
  CHECK(MockBackend(r).complete({"???", 16, 0}) == "no");
}

TEST_CASE("rewrite requests are answered from the paraphrase table") {
  auto r = echo_rules();
  r.add_paraphrases("Summarize {X}", {"Give me the gist of {X}", "Condense {X}"});
  MockBackend m(r);
  CHECK(m.complete({std::string(kRewriteRequest) + "Summarize {X}", 64, 0}) ==
        "Give me the gist of {X}\nCondense {X}");
  CHECK(r.paraphrases("unknown").empty());
}

TEST_CASE("rule sets survive a JSON round trip") {
  auto r = echo_rules();
  r.add_table("t", {{"a", "b"}});
  r.add_paraphrases("p", {"q"});
  r.set_refusal("nope");
  auto back = MockRuleSet::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
  CHECK(MockBackend(back).complete({"Return z", 8, 0}) == "z");
}

TEST_CASE("a bad regex is a schema error") {
  nlohmann::json j{{"rules", {{{"name", "bad"}, {"pattern", "("}, {"rewrite", "x"}}}}};
  CHECK(error_of([&] { MockRuleSet::from_json(j); }) == Errc::schema);
}

TEST_CASE("a misspelled rule key is a schema error, not an echo rule") {
  nlohmann::json j{{"rules", {{{"name", "typo"}, {"pattern", "^x$"}, {"response", "y"}}}}};
  CHECK(testing::message_of([&] { MockRuleSet::from_json(j); }).find("response") != std::string::npos);
}

TEST_CASE("request hash is SHA-256 of the canonical request") {
  // Hash of {"max_output_tokens":256,"model":"mock","prompt":"hi","seed":0}
  // computed outside this code base.
  CHECK(request_hash({"hi", 256, 0}, "mock") ==
        "95f71d147bb1a4a81453eead868a366862dbe30dc82e62f665c78673d48e0ce7");
  auto base = request_hash({"hi", 256, 0}, "mock");
  CHECK(request_hash({"hi", 256, 1}, "mock") != base);
  CHECK(request_hash({"hi", 255, 0}, "mock") != base);
  CHECK(request_hash({"hi ", 256, 0}, "mock") != base);
  CHECK(request_hash({"hi", 256, 0}, "other") != base);
}

TEST_CASE("record then strict replay") {
  auto dir = testing::scratch("replay_roundtrip");
  auto inner = std::make_shared<CountingBackend>();
  BackendConfig c;
  ReplayBackend rec(dir, ReplayMode::record, inner, c);
  CHECK(rec.kind() == "record");
  CHECK(rec.complete({"a", 8, 0}) == "seen:a");
  CHECK(rec.complete({"a", 8, 0}) == "seen:a");
  CHECK(inner->calls == 1);
  CHECK(rec.complete({"b", 8, 0}) == "seen:b");
  CHECK(inner->calls == 2);

  ReplayBackend strict(dir, ReplayMode::strict, nullptr, c);
  CHECK(strict.kind() == "replay");
  CHECK(strict.complete({"b", 8, 0}) == "seen:b");
  CHECK(strict.misses().empty());
  CHECK(std::filesystem::exists(dir / (request_hash({"a", 8, 0}, "mock") + ".json")));
}

TEST_CASE("strict replay miss throws and is listed") {
  auto dir = testing::scratch("replay_miss");
  ReplayBackend strict(dir, ReplayMode::strict, nullptr, BackendConfig{});
  CHECK(error_of([&] { strict.complete({"x", 8, 0}); }) == Errc::cache_miss);
  CHECK(error_of([&] { strict.complete({"y", 8, 0}); }) == Errc::cache_miss);
  CHECK(error_of([&] { strict.complete({"x", 8, 0}); }) == Errc::cache_miss);
  std::vector<std::string> want{request_hash({"x", 8, 0}, "mock"), request_hash({"y", 8, 0}, "mock")};
  std::sort(want.begin(), want.end());
  CHECK(strict.misses() == want);
}

TEST_CASE("model name is part of the cache key") {
  auto dir = testing::scratch("replay_model");
  BackendConfig a;
  a.model = "model-a";
  BackendConfig b;
  b.model = "model-b";
  ReplayBackend rec(dir, ReplayMode::record, std::make_shared<CountingBackend>(), a);
  rec.complete({"q", 8, 0});
  ReplayBackend other(dir, ReplayMode::strict, nullptr, b);
  CHECK(error_of([&] { other.complete({"q", 8, 0}); }) == Errc::cache_miss);
}

TEST_CASE("record mode without an inner backend is a config error") {
  auto dir = testing::scratch("replay_noinner");
  CHECK(error_of([&] { ReplayBackend(dir, ReplayMode::record, nullptr, BackendConfig{}); }) == Errc::config);
}

TEST_CASE("live configuration comes from the environment") {
  {
    EnvGuard e(kEndpointEnv, nullptr);
    EnvGuard k(kApiKeyEnv, "secret");
    auto msg = testing::message_of([] { live_config_from_env(); });
    CHECK(msg.find(kEndpointEnv) != std::string::npos);
  }
  {
    EnvGuard e(kEndpointEnv, "http://127.0.0.1:1/v1/chat/completions");
    EnvGuard k(kApiKeyEnv, nullptr);
    CHECK(error_of([] { live_config_from_env(); }) == Errc::config);
    auto msg = testing::message_of([] { live_config_from_env(); });
    CHECK(msg.find(kApiKeyEnv) != std::string::npos);
  }
  {
    EnvGuard e(kEndpointEnv, "http://example.invalid/v1");
    EnvGuard k(kApiKeyEnv, "secret");
    auto c = live_config_from_env();
    CHECK(c.endpoint == "http://example.invalid/v1");
    CHECK(c.api_key == "secret");
  }
}

TEST_CASE("live client talks to an OpenAI-style endpoint and retries 429") {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::string last_auth;
  nlohmann::json last_body;
  std::mutex m;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    int n = ++hits;
    {
      std::lock_guard lock(m);
      last_auth = req.get_header_value("Authorization");
      last_body = nlohmann::json::parse(req.body);
    }
    std::string prompt = last_body["messages"][0]["content"];
    if (prompt == "flaky" && n == 1) {
      res.status = 429;
      res.set_content("slow down", "text/plain");
      return;
    }
    if (prompt == "bad") {
      res.status = 400;
      res.set_content("no", "text/plain");
      return;
    }
    nlohmann::json out{{"choices", {{{"message", {{"role", "assistant"}, {"content", "echo " + prompt}}}}}}};
    res.set_content(out.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  LiveConfig live;
  live.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  live.api_key = "k123";
  live.initial_backoff = std::chrono::milliseconds(5);
  BackendConfig bc;
  bc.model = "test-model";
  LiveBackend backend(live, bc);

  SUBCASE("success") {
    CHECK(backend.complete({"hello", 16, 7}) == "echo hello");
    CHECK(hits == 1);
    CHECK(last_auth == "Bearer k123");
    CHECK(last_body["model"] == "test-model");
    CHECK(last_body["max_tokens"] == 16);
    CHECK(last_body["seed"] == 7);
    CHECK(last_body["temperature"] == 0.0);
  }
  SUBCASE("429 then success") {
    CHECK(backend.complete({"flaky", 16, 0}) == "echo flaky");
    CHECK(hits == 2);
  }
  SUBCASE("client errors are not retried") {
    CHECK(error_of([&] { backend.complete({"bad", 16, 0}); }) == Errc::transport);
    CHECK(hits == 1);
  }

  server.stop();
  th.join();
}

TEST_CASE("live client gives up after the attempt limit") {
  LiveConfig live;
  // Nothing listens on port 1.
  live.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  live.api_key = "k";
  live.max_attempts = 2;
  live.initial_backoff = std::chrono::milliseconds(1);
  LiveBackend backend(live, BackendConfig{});
  CHECK(error_of([&] { backend.complete({"x", 8, 0}); }) == Errc::transport);
  CHECK(error_of([] { LiveBackend(LiveConfig{"no-scheme", "k"}, BackendConfig{}); }) == Errc::config);
}
