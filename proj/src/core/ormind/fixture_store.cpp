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

#include "ormind/file_util.hpp"
#include "ormind/llm_client.hpp"

namespace ormind {

FixtureStore FixtureStore::parse(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("fixture file is not JSON: ") + e.what(),
                "fixtures");
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kFormatError, "fixture file must hold an object", "fixtures");
  }
  FixtureStore store;
  for (const auto& [slot, entry] : doc.items()) {
    if (!entry.is_object() || !entry.contains("content") || !entry["content"].is_string()) {
      throw Error(ErrorCode::kFormatError,
                  "fixture entry '" + slot + "' needs a string \"content\"", "fixtures", slot);
    }
    store.entries_[slot] = entry["content"].get<std::string>();
  }
  return store;
}

FixtureStore FixtureStore::load(const std::filesystem::path& file) {
  return parse(read_file(file));
}

const std::string* FixtureStore::find(const std::string& slot) const {
  auto it = entries_.find(slot);
  return it == entries_.end() ? nullptr : &it->second;
}

bool FixtureStore::put(const std::string& slot, std::string content) {
  auto [it, inserted] = entries_.insert_or_assign(slot, std::move(content));
  (void)it;
  return !inserted;
}

std::string FixtureStore::dump() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [slot, content] : entries_) doc[slot] = {{"content", content}};
  return doc.dump(2) + "\n";
}

void FixtureStore::save(const std::filesystem::path& file) const {
  atomic_write(file, dump());
}

std::filesystem::path fixture_path(const std::filesystem::path& dir,
                                   const std::string& problem_id) {
  return dir / (problem_id + ".json");
}

}  // namespace ormind
