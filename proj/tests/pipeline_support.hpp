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

#include <functional>
#include <string>
#include <vector>

#include "ormind/bench.hpp"
#include "ormind/pipeline.hpp"
#include "test_support.hpp"

namespace ormind::testing {

// Answers each request through a callback; records every key it saw.
class FnClient : public ChatClient {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FnClient(Fn fn) : fn_(std::move(fn)) {}
  ChatResponse complete(const ChatRequest& request) override {
    request.validate();
    slots.push_back(request.key.slot());
    ChatResponse r;
    r.content = fn_(request);
    return r;
  }
  std::vector<std::string> slots;

 private:
  Fn fn_;
};

inline ProblemInput corpus_problem(const std::string& id) {
  const auto file = corpus_dir() / (id + ".json");
  return problem_from_json(nlohmann::json::parse(read_text(file)), id);
}

inline std::string fenced(const std::string& doc) { return "```json\n" + doc + "\n```"; }

// Every stage sequence allowed with the given repair caps.
inline std::vector<std::vector<std::string>> stage_language(int max_syntax, int max_cf) {
  std::vector<std::vector<std::string>> words;
  for (int k = 0; k <= max_syntax; ++k) {
    for (int m = 0; m <= max_cf; ++m) {
      std::vector<std::string> w = {"SemanticEncoder", "Formalization", "ExecutiveCompiler",
                                    "SupervisorForward", "Execute"};
      for (int i = 0; i < k; ++i) {
        w.insert(w.end(), {"ReasonerError", "SupervisorBackward", "Execute"});
      }
      w.push_back("ReasonerCounterfactual");
      for (int i = 0; i < m; ++i) {
        w.insert(w.end(), {"SupervisorBackward", "Execute", "ReasonerCounterfactual"});
      }
      words.push_back(std::move(w));
    }
  }
  return words;
}

inline bool in_language(const std::vector<std::string>& seq, int max_syntax, int max_cf,
                        bool allow_prefix) {
  for (const auto& w : stage_language(max_syntax, max_cf)) {
    if (seq == w) return true;
    if (allow_prefix && seq.size() < w.size() &&
        std::equal(seq.begin(), seq.end(), w.begin())) {
      return true;
    }
  }
  return false;
}

}  // namespace ormind::testing
