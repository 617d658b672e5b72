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

#include "ormind/prompts.hpp"

#include "ormind/errors.hpp"

namespace ormind {

std::string interpolate(std::string_view tmpl,
                        const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const char c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      out += '{';
      i += 2;
    } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out += '}';
      i += 2;
    } else if (c == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kInvalidArgument, "unterminated placeholder in template");
      }
      const std::string name(tmpl.substr(i + 1, close - i - 1));
      auto it = values.find(name);
      if (it == values.end()) {
        throw Error(ErrorCode::kInvalidArgument, "no value for placeholder {" + name + "}",
                    "prompt", name);
      }
      out += it->second;
      i = close + 1;
    } else if (c == '}') {
      throw Error(ErrorCode::kInvalidArgument, "stray '}' in template");
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

}  // namespace ormind
