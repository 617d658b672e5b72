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

#include <string>

#include <nlohmann/json.hpp>

namespace ormind {

// Parses a trace document and checks its shape. Throws FormatError.
nlohmann::ordered_json parse_trace(const std::string& text);

// Stage-by-stage narrative of a run trace.
std::string render_narrative(const nlohmann::ordered_json& trace);

}  // namespace ormind
