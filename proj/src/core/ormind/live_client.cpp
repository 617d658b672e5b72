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

#include <httplib.h>

#include <regex>
#include <thread>

#include "ormind/llm_client.hpp"

namespace ormind {

namespace {

bool retryable_status(int status) { return status == 429 || status >= 500; }

std::string excerpt(const std::string& body) {
  return body.size() <= 400 ? body : body.substr(0, 400) + "...";
}

}  // namespace

LiveClient::LiveClient(LiveConfig config) : config_(std::move(config)) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.base_url, m, url_re)) {
    throw Error(ErrorCode::kInvalidArgument, "base URL must look like http(s)://host[/path]: " +
                                                 config_.base_url);
  }
  origin_ = m[1].str();
  prefix_ = m[2].str();
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  if (config_.max_retries < 0) config_.max_retries = 0;
}

ChatResponse LiveClient::complete(const ChatRequest& request) {
  request.validate();
  const std::string body = request.wire_body().dump();
  httplib::Headers headers = {
      {"Authorization", "Bearer " + config_.api_key},
      {"X-Ormind-Request", request.key.problem_id + "/" + request.key.slot()},
  };

  const auto started = std::chrono::steady_clock::now();
  int retries = 0;
  while (true) {
    httplib::Client cli(origin_);
    cli.set_connection_timeout(config_.timeout);
    cli.set_read_timeout(config_.timeout);
    cli.set_write_timeout(config_.timeout);
    auto res = cli.Post(prefix_ + "/chat/completions", headers, body, "application/json");

    std::string failure;
    bool retry = false;
    if (!res) {
      failure = "transport error: " + httplib::to_string(res.error());
      retry = true;
    } else if (res->status != 200) {
      failure = "HTTP " + std::to_string(res->status) + ": " + excerpt(res->body);
      retry = retryable_status(res->status);
    } else {
      try {
        const auto doc = nlohmann::json::parse(res->body);
        ChatResponse out;
        out.content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        if (doc.contains("usage") && doc["usage"].is_object()) {
          const auto& u = doc["usage"];
          out.usage = Usage{u.value("prompt_tokens", std::size_t{0}),
                            u.value("completion_tokens", std::size_t{0})};
        }
        out.retries = retries;
        out.latency = std::chrono::duration_cast<std::chrono::microseconds>(
            std::chrono::steady_clock::now() - started);
        return out;
      } catch (const nlohmann::json::exception& e) {
        failure = std::string("unreadable completion body: ") + e.what();
      }
    }

    if (!retry || retries >= config_.max_retries) {
      throw Error(ErrorCode::kTransport,
                  failure + " (after " + std::to_string(retries) + " retries)", "llm",
                  res ? std::to_string(res->status) : std::string("0"));
    }
    std::this_thread::sleep_for(config_.backoff_base * (1 << retries));
    ++retries;
  }
}

}  // namespace ormind
