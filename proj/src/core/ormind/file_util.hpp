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

#include <filesystem>
#include <string>
#include <string_view>

namespace ormind {

// Throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes a sibling temporary file and renames it over `path`, so readers see
// either the old or the new content. Throws StorageWrite.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace ormind
