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

#include "ormind/llm_client.hpp"

#include <cmath>
#include <cstdlib>

#include "ormind/file_util.hpp"

namespace ormind {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

std::string FixtureKey::slot() const { return stage + "/" + std::to_string(attempt); }

void ChatRequest::validate() const {
  if (messages.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "chat request has no messages");
  }
  if (!std::isfinite(temperature) || temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must lie in [0, 2]");
  }
}

nlohmann::json ChatRequest::wire_body() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  return {{"model", model_id}, {"temperature", temperature}, {"messages", std::move(msgs)}};
}

// ---------------------------------------------------------------------------

ScriptedClient::ScriptedClient(std::vector<std::string> responses)
    : queue_(responses.begin(), responses.end()) {}

void ScriptedClient::push(std::string response) {
  std::lock_guard lock(mu_);
  queue_.push_back(std::move(response));
}

std::size_t ScriptedClient::remaining() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

std::vector<ChatRequest> ScriptedClient::requests() const {
  std::lock_guard lock(mu_);
  return seen_;
}

ChatResponse ScriptedClient::complete(const ChatRequest& request) {
  request.validate();
  std::lock_guard lock(mu_);
  seen_.push_back(request);
  if (queue_.empty()) {
    throw Error(ErrorCode::kScriptExhausted, "scripted client has no response left for " +
                                                 request.key.slot(),
                "llm", request.key.slot());
  }
  ChatResponse r;
  r.content = std::move(queue_.front());
  queue_.pop_front();
  return r;
}

// ---------------------------------------------------------------------------

ReplayClient::ReplayClient(std::filesystem::path dir) : dir_(std::move(dir)) {}

const FixtureStore& ReplayClient::store_for(const std::string& problem_id) {
  auto it = cache_.find(problem_id);
  if (it != cache_.end()) return *it->second;
  const auto file = fixture_path(dir_, problem_id);
  auto store = std::make_unique<FixtureStore>();
  if (std::filesystem::exists(file)) *store = FixtureStore::load(file);
  return *cache_.emplace(problem_id, std::move(store)).first->second;
}

ChatResponse ReplayClient::complete(const ChatRequest& request) {
  request.validate();
  const std::string slot = request.key.slot();
  std::lock_guard lock(mu_);
  const std::string* content = store_for(request.key.problem_id).find(slot);
  if (content == nullptr) {
    throw Error(ErrorCode::kFixtureMiss,
                "no fixture " + slot + " for problem '" + request.key.problem_id + "' in " +
                    dir_.string(),
                "llm", request.key.problem_id + ":" + slot);
  }
  ChatResponse r;
  r.content = *content;
  return r;
}

// ---------------------------------------------------------------------------

std::string api_key_from_env() {
  const char* v = std::getenv("ORMIND_API_KEY");
  return v == nullptr ? std::string() : std::string(v);
}

// ---------------------------------------------------------------------------

RecordingClient::RecordingClient(ChatClient& inner, std::filesystem::path dir,
                                 WarningSink warn)
    : inner_(inner), dir_(std::move(dir)), warn_(std::move(warn)) {}

ChatResponse RecordingClient::complete(const ChatRequest& request) {
  ChatResponse r = inner_.complete(request);
  std::lock_guard lock(mu_);
  pending_[request.key.problem_id].put(request.key.slot(), r.content);
  return r;
}

std::size_t RecordingClient::flush(const std::string& problem_id) {
  FixtureStore fresh;
  {
    std::lock_guard lock(mu_);
    auto it = pending_.find(problem_id);
    if (it == pending_.end()) return 0;
    fresh = std::move(it->second);
    pending_.erase(it);
  }
  const auto file = fixture_path(dir_, problem_id);
  FixtureStore merged;
  if (std::filesystem::exists(file)) {
    try {
      merged = FixtureStore::load(file);
    } catch (const Error&) {
      if (warn_) warn_("replacing unreadable fixture file " + file.string());
    }
  }
  for (const auto& [slot, content] : fresh.entries()) {
    if (merged.put(slot, content) && warn_) {
      warn_("overwriting fixture " + problem_id + ":" + slot);
    }
  }
  merged.save(file);
  return fresh.size();
}

void RecordingClient::discard(const std::string& problem_id) {
  std::lock_guard lock(mu_);
  pending_.erase(problem_id);
}

// ---------------------------------------------------------------------------

std::size_t whitespace_units(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

TranscriptUnits count_transcript_units(const std::vector<TranscriptEntry>& entries) {
  TranscriptUnits out;
  for (const auto& e : entries) {
    const std::size_t units =
        e.usage ? e.usage->prompt_units + e.usage->completion_units
                : whitespace_units(e.prompt) + whitespace_units(e.completion);
    out.per_stage[e.stage] += units;
    out.total += units;
  }
  return out;
}

}  // namespace ormind
