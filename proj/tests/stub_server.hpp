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

#pragma once

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/llm_client.hpp"

namespace ormind::testing {

// Local OpenAI-compatible endpoint on an ephemeral port.
class StubServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  explicit StubServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mu_);
        paths_.push_back(req.path);
        headers_.push_back(req.headers);
        bodies_.push_back(req.body);
      }
      ++hits_;
      handler_(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
    while (!server_.is_running() && std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string base_url(const std::string& prefix = "/v1") const {
    return "http://127.0.0.1:" + std::to_string(port_) + prefix;
  }
  int hits() const { return hits_; }
  std::vector<std::string> paths() const {
    std::lock_guard lock(mu_);
    return paths_;
  }
  std::vector<httplib::Headers> headers() const {
    std::lock_guard lock(mu_);
    return headers_;
  }
  std::vector<std::string> bodies() const {
    std::lock_guard lock(mu_);
    return bodies_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> hits_{0};
  mutable std::mutex mu_;
  std::vector<std::string> paths_;
  std::vector<httplib::Headers> headers_;
  std::vector<std::string> bodies_;
};

inline std::string completion_body(const std::string& content, int prompt_tokens = 0,
                                   int completion_tokens = 0) {
  nlohmann::json j = {{"id", "stub"},
                      {"object", "chat.completion"},
                      {"choices", {{{"index", 0},
                                    {"message", {{"role", "assistant"}, {"content", content}}},
                                    {"finish_reason", "stop"}}}}};
  if (prompt_tokens + completion_tokens > 0) {
    j["usage"] = {{"prompt_tokens", prompt_tokens}, {"completion_tokens", completion_tokens}};
  }
  return j.dump();
}

// Serves `<fixtures>/<problem>.json` keyed by the X-Ormind-Request header,
// as a live endpoint would answer the same prompts. Requires the bearer key.
inline StubServer::Handler fixture_backed_handler(std::filesystem::path fixtures,
                                                  std::string api_key) {
  return [fixtures = std::move(fixtures), api_key = std::move(api_key)](
             const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value("Authorization") != "Bearer " + api_key) {
      res.status = 401;
      res.set_content(R"({"error":"bad key"})", "application/json");
      return;
    }
    const std::string tag = req.get_header_value("X-Ormind-Request");
    const auto slash = tag.find('/');
    if (slash == std::string::npos) {
      res.status = 400;
      return;
    }
    const std::string problem = tag.substr(0, slash);
    const std::string slot = tag.substr(slash + 1);
    const auto file = fixture_path(fixtures, problem);
    const std::string* content = nullptr;
    FixtureStore store;
    if (std::filesystem::exists(file)) {
      store = FixtureStore::load(file);
      content = store.find(slot);
    }
    if (content == nullptr) {
      // Mirrors a model that answers with prose.
      res.set_content(completion_body("I cannot help with that."), "application/json");
      return;
    }
    res.set_content(completion_body(*content, 100, 50), "application/json");
  };
}

}  // namespace ormind::testing
