// Copyright 2026 The ORMind Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <thread>

#include "ormind/file_util.hpp"
#include "ormind/llm_client.hpp"
#include "ormind/prompts.hpp"
#include "stub_server.hpp"
#include "test_support.hpp"

using namespace ormind;
using ormind::testing::StubServer;
using ormind::testing::completion_body;
namespace fs = std::filesystem;

namespace {

ChatRequest request(std::string stage = "SemanticEncoder", int attempt = 0,
                    std::string problem = "p1") {
  ChatRequest r;
  r.messages = {{Role::kUser, "hello"}};
  r.key = {std::move(stage), std::move(problem), attempt};
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> n{0};
    path = fs::temp_directory_path() /
           ("ormind_llm_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

LiveConfig fast_config(const std::string& base_url) {
  LiveConfig c;
  c.base_url = base_url;
  c.api_key = "test-key";
  c.backoff_base = std::chrono::milliseconds(5);
  c.timeout = std::chrono::seconds(5);
  return c;
}

}  // namespace

TEST_CASE("fixture keys and request validation") {
  ChatRequest r = request("Formalization", 2);
  CHECK(r.key.slot() == "Formalization/2");
  CHECK_NOTHROW(r.validate());

  const auto body = r.wire_body();
  CHECK(body["model"] == "gpt-3.5-turbo");
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] == "hello");

  r.temperature = 2.5;
  CHECK_THROWS_AS(r.validate(), Error);
  r.temperature = 0.7;
  r.messages.clear();
  try {
    r.validate();
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("scripted client replays in order then reports exhaustion") {
  ScriptedClient c({"a", "b"});
  CHECK(c.complete(request()).content == "a");
  CHECK(c.complete(request("X", 1)).content == "b");
  CHECK(c.remaining() == 0);
  try {
    c.complete(request());
    FAIL("expected ScriptExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kScriptExhausted);
  }
  REQUIRE(c.requests().size() == 3);
  CHECK(c.requests()[1].key.slot() == "X/1");
}

TEST_CASE("fixture store parse, dump and errors") {
  auto s = FixtureStore::parse(R"({"A/0": {"content": "x"}, "B/1": {"content": "y\nz"}})");
  CHECK(s.size() == 2);
  REQUIRE(s.find("B/1") != nullptr);
  CHECK(*s.find("B/1") == "y\nz");
  CHECK(s.find("C/0") == nullptr);

  const auto again = FixtureStore::parse(s.dump());
  CHECK(again.entries() == s.entries());

  CHECK_FALSE(s.put("C/0", "new"));
  CHECK(s.put("A/0", "replaced"));
  CHECK(*s.find("A/0") == "replaced");

  for (const char* bad : {"not json", "[1,2]", R"({"A/0": "x"})", R"({"A/0": {"content": 3}})"}) {
    try {
      FixtureStore::parse(bad);
      FAIL("expected FormatError for " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFormatError);
    }
  }
}

TEST_CASE("replay client serves fixtures and reports misses") {
  TempDir dir;
  FixtureStore s;
  s.put("SemanticEncoder/0", "{\"x\": 1}");
  s.save(fixture_path(dir.path, "p1"));

  ReplayClient c(dir.path);
  CHECK(c.complete(request()).content == "{\"x\": 1}");
  for (const auto& r : {request("SemanticEncoder", 1), request("SemanticEncoder", 0, "other")}) {
    try {
      c.complete(r);
      FAIL("expected FixtureMiss");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFixtureMiss);
    }
  }
}

TEST_CASE("recording client merges into fixture files and warns on overwrite") {
  TempDir dir;
  ScriptedClient inner({"first", "second", "third"});
  std::vector<std::string> warnings;
  RecordingClient rec(inner, dir.path, [&](const std::string& w) { warnings.push_back(w); });

  CHECK(rec.complete(request("A", 0)).content == "first");
  CHECK(rec.complete(request("B", 0)).content == "second");
  CHECK_FALSE(fs::exists(fixture_path(dir.path, "p1")));  // buffered until flush
  CHECK(rec.flush("p1") == 2);
  CHECK(warnings.empty());

  rec.complete(request("A", 0));
  CHECK(rec.flush("p1") == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("p1:A/0") != std::string::npos);

  const auto stored = FixtureStore::load(fixture_path(dir.path, "p1"));
  CHECK(stored.size() == 2);
  CHECK(*stored.find("A/0") == "third");
  CHECK(*stored.find("B/0") == "second");
  CHECK(rec.flush("unknown") == 0);

  // Nothing but the fixture file is left behind.
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir.path)) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
}

TEST_CASE("recording client discard drops buffered entries") {
  TempDir dir;
  ScriptedClient inner({"x"});
  RecordingClient rec(inner, dir.path);
  rec.complete(request());
  rec.discard("p1");
  CHECK(rec.flush("p1") == 0);
  CHECK_FALSE(fs::exists(fixture_path(dir.path, "p1")));
}

TEST_CASE("atomic_write replaces content") {
  TempDir dir;
  const auto file = dir.path / "out.json";
  atomic_write(file, "one");
  atomic_write(file, "two");
  CHECK(read_file(file) == "two");
  atomic_write(dir.path / "nested" / "x.json", "y");  // parents are created
  CHECK(read_file(dir.path / "nested" / "x.json") == "y");
  // A directory in the way cannot be replaced.
  fs::create_directories(dir.path / "blocked");
  try {
    atomic_write(dir.path / "blocked", "z");
    FAIL("expected StorageWrite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStorageWrite);
  }
  for (const auto& e : fs::directory_iterator(dir.path)) {
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  }
  CHECK_THROWS_AS(read_file(dir.path / "nope"), Error);
}

TEST_CASE("live client retries 429 then succeeds") {
  std::atomic<int> calls{0};
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    if (calls++ < 2) {
      res.status = 429;
      res.set_content(R"({"error":"slow down"})", "application/json");
      return;
    }
    res.set_content(completion_body("answer", 11, 7), "application/json");
  });
  LiveClient client(fast_config(stub.base_url()));
  ChatRequest r = request("Formalization", 3, "pharmacy");
  r.temperature = 0.3;
  const ChatResponse resp = client.complete(r);
  CHECK(resp.content == "answer");
  CHECK(resp.retries == 2);
  REQUIRE(resp.usage.has_value());
  CHECK(resp.usage->prompt_units == 11);
  CHECK(resp.usage->completion_units == 7);
  CHECK(stub.hits() == 3);

  const auto paths = stub.paths();
  CHECK(paths.back() == "/v1/chat/completions");
  const auto headers = stub.headers().back();
  CHECK(headers.find("Authorization")->second == "Bearer test-key");
  CHECK(headers.find("X-Ormind-Request")->second == "pharmacy/Formalization/3");
  const auto body = nlohmann::json::parse(stub.bodies().back());
  CHECK(body["temperature"] == doctest::Approx(0.3));
  CHECK(body["messages"].size() == 1);
}

TEST_CASE("live client gives up after max retries on 5xx") {
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  LiveConfig cfg = fast_config(stub.base_url());
  cfg.max_retries = 3;
  LiveClient client(cfg);
  try {
    client.complete(request());
    FAIL("expected Transport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTransport);
    CHECK(std::string(e.what()).find("after 3 retries") != std::string::npos);
    CHECK(e.subject() == "503");
  }
  CHECK(stub.hits() == 4);
}

TEST_CASE("live client does not retry client errors") {
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
    res.set_content("denied", "text/plain");
  });
  LiveClient client(fast_config(stub.base_url()));
  CHECK_THROWS_AS(client.complete(request()), Error);
  CHECK(stub.hits() == 1);
}

TEST_CASE("live client treats an unreadable body as a transport error") {
  StubServer stub([](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"choices\": []}", "application/json");
  });
  LiveClient client(fast_config(stub.base_url("")));
  try {
    client.complete(request());
    FAIL("expected Transport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTransport);
  }
  CHECK(stub.paths().back() == "/chat/completions");
}

TEST_CASE("live client retries connection failures") {
  int port = 0;
  {
    // Grab a free port, then close it again.
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  LiveConfig cfg = fast_config("http://127.0.0.1:" + std::to_string(port));
  cfg.max_retries = 1;
  cfg.timeout = std::chrono::seconds(1);
  LiveClient client(cfg);
  try {
    client.complete(request());
    FAIL("expected Transport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTransport);
    CHECK(std::string(e.what()).find("after 1 retries") != std::string::npos);
  }
}

TEST_CASE("live client rejects malformed base URLs") {
  LiveConfig cfg;
  cfg.base_url = "ftp://example";
  CHECK_THROWS_AS(LiveClient{cfg}, Error);
}

TEST_CASE("transcript units prefer usage and fall back to whitespace tokens") {
  CHECK(whitespace_units("") == 0);
  CHECK(whitespace_units("  a bb\tc\n d ") == 4);
  std::vector<TranscriptEntry> t = {
      {"SemanticEncoder", "one two three", "four", std::nullopt},
      {"Formalization", "ignored words here", "x", Usage{10, 5}},
      {"SemanticEncoder", "a", "b c", std::nullopt},
  };
  const auto u = count_transcript_units(t);
  CHECK(u.per_stage.at("SemanticEncoder") == 7);
  CHECK(u.per_stage.at("Formalization") == 15);
  CHECK(u.total == 22);
}

TEST_CASE("prompt interpolation") {
  CHECK(interpolate("a {x} b", {{"x", "1"}}) == "a 1 b");
  CHECK(interpolate("{{\"k\": {x}}}", {{"x", "2"}}) == "{\"k\": 2}");
  CHECK(interpolate("{x}{x}", {{"x", "ab"}}) == "abab");
  // Values are not re-scanned.
  CHECK(interpolate("{x}", {{"x", "{y}"}}) == "{y}");
  CHECK_THROWS_AS(interpolate("{missing}", {}), Error);
  CHECK_THROWS_AS(interpolate("a } b", {}), Error);
  CHECK_THROWS_AS(interpolate("a { b", {}), Error);
}

TEST_CASE("embedded templates carry their placeholders") {
  const std::map<std::string, std::vector<std::string>> expected = {
      {std::string(assets::semantic_encoder), {"problem_example", "comment_text"}},
      {std::string(assets::formalization), {"problem_description", "comments_text"}},
  };
  for (const auto& [tmpl, names] : expected) {
    std::map<std::string, std::string> values;
    for (const auto& n : names) values[n] = "<<" + n + ">>";
    const std::string out = interpolate(tmpl, values);
    for (const auto& n : names) CHECK(out.find("<<" + n + ">>") != std::string::npos);
  }
  std::map<std::string, std::string> all = {
      {"problem_description", "D"}, {"comments_text", "C"}, {"exchange_example", "E"},
      {"comment_text", "c"},        {"code_example", "E"},  {"attention", "A"},
      {"feedback", "F"},            {"previous_code", "P"}, {"input_content", "I"}};
  for (auto t : {assets::executive_compiler, assets::supervisor_forward,
                 assets::supervisor_backward, assets::reasoner}) {
    CHECK_NOTHROW(interpolate(t, all));
  }
  CHECK(nlohmann::json::parse(std::string(assets::exchange_example)).contains("constraints"));
}
