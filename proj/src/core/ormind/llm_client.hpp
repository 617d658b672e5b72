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

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/errors.hpp"

namespace ormind {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
};

// Identifies one stage call within one problem run.
struct FixtureKey {
  std::string stage;
  std::string problem_id;
  int attempt = 0;

  // "<stage>/<attempt>", the key inside a problem's fixture file.
  std::string slot() const;
};

struct ChatRequest {
  std::string model_id = "gpt-3.5-turbo";
  double temperature = 0.0;
  std::vector<ChatMessage> messages;
  FixtureKey key;

  // Throws InvalidArgument on an empty message list or bad temperature.
  void validate() const;
  nlohmann::json wire_body() const;
};

struct Usage {
  std::size_t prompt_units = 0;
  std::size_t completion_units = 0;
};

struct ChatResponse {
  std::string content;
  std::optional<Usage> usage;
  std::chrono::microseconds latency{0};
  int retries = 0;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Hands out queued responses in order; for tests.
class ScriptedClient : public ChatClient {
 public:
  explicit ScriptedClient(std::vector<std::string> responses = {});
  void push(std::string response);
  std::size_t remaining() const;
  // Requests seen so far, in call order.
  std::vector<ChatRequest> requests() const;

  ChatResponse complete(const ChatRequest& request) override;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> queue_;
  std::vector<ChatRequest> seen_;
};

// One problem's recorded responses: {"<stage>/<attempt>": {"content": str}}.
class FixtureStore {
 public:
  static FixtureStore parse(const std::string& text);
  static FixtureStore load(const std::filesystem::path& file);

  const std::string* find(const std::string& slot) const;
  // Returns true when an existing entry was replaced.
  bool put(const std::string& slot, std::string content);
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string dump() const;
  void save(const std::filesystem::path& file) const;

 private:
  std::map<std::string, std::string> entries_;
};

std::filesystem::path fixture_path(const std::filesystem::path& dir,
                                   const std::string& problem_id);

// Serves responses from `<dir>/<problem-id>.json`.
class ReplayClient : public ChatClient {
 public:
  explicit ReplayClient(std::filesystem::path dir);
  ChatResponse complete(const ChatRequest& request) override;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  const FixtureStore& store_for(const std::string& problem_id);

  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<FixtureStore>> cache_;
};

struct LiveConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{500};
  std::chrono::seconds timeout{120};
};

// Reads ORMIND_API_KEY; empty when unset.
std::string api_key_from_env();

// OpenAI-compatible chat-completions endpoint over HTTP(S).
class LiveClient : public ChatClient {
 public:
  explicit LiveClient(LiveConfig config);
  ChatResponse complete(const ChatRequest& request) override;
  const LiveConfig& config() const { return config_; }

 private:
  LiveConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string prefix_;  // path part of base_url, no trailing slash
};

// Passes calls through and keeps every response for replay. Entries are
// buffered per problem and written by flush(), one file per problem.
class RecordingClient : public ChatClient {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  RecordingClient(ChatClient& inner, std::filesystem::path dir,
                  WarningSink warn = {});
  ChatResponse complete(const ChatRequest& request) override;

  // Merges the buffered entries into the problem's fixture file (atomic
  // replace). Returns the number of entries written for this problem.
  std::size_t flush(const std::string& problem_id);
  void discard(const std::string& problem_id);

 private:
  ChatClient& inner_;
  std::filesystem::path dir_;
  WarningSink warn_;
  std::mutex mu_;
  std::map<std::string, FixtureStore> pending_;
};

// One prompt/completion exchange as recorded in a run trace.
struct TranscriptEntry {
  std::string stage;
  std::string prompt;
  std::string completion;
  std::optional<Usage> usage;
};

struct TranscriptUnits {
  std::map<std::string, std::size_t> per_stage;
  std::size_t total = 0;
};

std::size_t whitespace_units(std::string_view text);
TranscriptUnits count_transcript_units(const std::vector<TranscriptEntry>& entries);

}  // namespace ormind
