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

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/pipeline.hpp"

namespace ormind {

struct LoadIssue {
  std::string path;
  std::string message;
};

struct LoadResult {
  std::vector<ProblemInput> problems;  // sorted by id
  std::vector<LoadIssue> errors;
};

// Builds a problem from one dataset object. `fallback_id` is used when the
// object has no "id". Throws FormatError.
ProblemInput problem_from_json(const nlohmann::json& doc, const std::string& fallback_id);

// Loads `<dir>/*.json` (non-recursive) or one combined file holding an array
// of problems. Bad files are collected in `errors`. Throws EmptyDataset when
// nothing loads, IoError when the path does not exist.
LoadResult load_problems(const std::filesystem::path& path);

struct BenchRow {
  std::string id;
  Classification classification = Classification::kFormulationFailure;
  std::optional<double> objective;
  std::string status;  // final solver status, empty when no model
  nlohmann::json expected = nlohmann::json::array();  // instance 0
  int syntax_repairs = 0;
  int cf_repairs = 0;
  std::size_t transcript_units = 0;
  double wall_ms = 0.0;
};

struct Aggregates {
  std::size_t total = 0;
  std::size_t success = 0;
  std::size_t wrong_answer = 0;
  std::size_t formulation_failure = 0;
  std::size_t execution_failure = 0;

  double sr() const;
  double mffr() const;
  double iefr() const;
  double wrong_answer_rate() const;

  static Aggregates from_rows(const std::vector<BenchRow>& rows);
  friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;  // sorted by id
  Aggregates aggregates;
  bool cancelled = false;

  // include_timing=false leaves out wall times so reports can be compared.
  nlohmann::ordered_json to_json(bool include_timing = true) const;
  static BenchReport from_json(const nlohmann::json& doc);
  std::string to_table() const;
};

struct BenchOptions {
  std::size_t workers = 4;
  // Checked before each problem starts; runs already started finish.
  const std::atomic<bool>* cancel = nullptr;
  // Called from worker threads, serialized, once per finished problem.
  std::function<void(const ProblemInput&, const RunOutcome&)> on_complete;
};

BenchReport run_benchmark(const std::vector<ProblemInput>& problems, const RunConfig& config,
                          ChatClient& client, const BenchOptions& opts = {});

struct SweepResult {
  std::vector<std::pair<double, BenchReport>> reports;  // increasing temperature

  nlohmann::ordered_json to_json(bool include_timing = true) const;
  std::string to_table() const;
};

// Throws InvalidArgument unless temps is nonempty, strictly increasing and
// within [0, 2].
void validate_temperatures(const std::vector<double>& temps);

// `client_for` returns the client used at a given temperature.
SweepResult sweep_temperature(const std::vector<ProblemInput>& problems,
                              const std::vector<double>& temps, const RunConfig& config,
                              const std::function<ChatClient&(double)>& client_for,
                              const BenchOptions& opts = {});

// `<fixtures>/temp-<t>` when that directory exists, else `fixtures`.
std::filesystem::path sweep_fixture_dir(const std::filesystem::path& fixtures, double temp);

}  // namespace ormind
