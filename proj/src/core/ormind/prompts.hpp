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

#include <map>
#include <string>
#include <string_view>

namespace ormind {

namespace assets {
extern const std::string_view semantic_encoder;
extern const std::string_view formalization;
extern const std::string_view executive_compiler;
extern const std::string_view supervisor_forward;
extern const std::string_view supervisor_backward;
extern const std::string_view reasoner;
extern const std::string_view exchange_example;
}  // namespace assets

// "{{" and "}}" produce literal braces; "{name}" is replaced by values[name].
// Throws InvalidArgument on a placeholder without a value or an unbalanced
// brace.
std::string interpolate(std::string_view tmpl,
                        const std::map<std::string, std::string>& values);

}  // namespace ormind
