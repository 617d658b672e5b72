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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/ormind.h"

namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = fs::path(ORMIND_SOURCE_DIR) / "data" / "corpus";

std::string take(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  ormind_string_free(s);
  return out;
}

struct Handles {
  ormind_dataset* ds = nullptr;
  ormind_client* client = nullptr;
  Handles() {
    REQUIRE(ormind_dataset_load(kCorpus.c_str(), &ds) == ORMIND_OK);
    REQUIRE(ormind_client_replay((kCorpus / "fixtures").c_str(), &client) == ORMIND_OK);
  }
  ~Handles() {
    ormind_client_free(client);
    ormind_dataset_free(ds);
  }
  size_t index_of(const std::string& id) const {
    for (size_t i = 0; i < ormind_dataset_size(ds); ++i) {
      if (id == ormind_dataset_problem_id(ds, i)) return i;
    }
    FAIL("unknown id " << id);
    return 0;
  }
};

}  // namespace

TEST_CASE("names and version") {
  CHECK(std::string(ormind_status_name(ORMIND_OK)) == "ok");
  CHECK(std::string(ormind_status_name(ORMIND_E_EMPTY_DATASET)) == "empty dataset");
  CHECK(std::string(ormind_classification_name(ORMIND_SUCCESS)) == "Success");
  CHECK(std::string(ormind_classification_name(ORMIND_EXECUTION_FAILURE)) == "ExecutionFailure");
  CHECK(std::string(ormind_version()).size() > 0);
}

TEST_CASE("null arguments are rejected with a message") {
  ormind_dataset* ds = nullptr;
  CHECK(ormind_dataset_load(nullptr, &ds) == ORMIND_E_INVALID_ARGUMENT);
  CHECK(std::string(ormind_last_error()).size() > 0);
  CHECK(ormind_dataset_load(kCorpus.c_str(), nullptr) == ORMIND_E_INVALID_ARGUMENT);
  ormind_outcome* o = nullptr;
  CHECK(ormind_solve(nullptr, 0, nullptr, nullptr, &o) == ORMIND_E_INVALID_ARGUMENT);
  CHECK(o == nullptr);
  char* s = nullptr;
  CHECK(ormind_inspect(nullptr, &s) == ORMIND_E_INVALID_ARGUMENT);
  CHECK(ormind_dataset_size(nullptr) == 0);
  CHECK(ormind_dataset_problem_id(nullptr, 0) == nullptr);
  // Freeing NULL is a no-op.
  ormind_client_free(nullptr);
  ormind_dataset_free(nullptr);
  ormind_outcome_free(nullptr);
  ormind_report_free(nullptr);
  ormind_string_free(nullptr);
}

TEST_CASE("dataset errors map to status codes") {
  ormind_dataset* ds = nullptr;
  CHECK(ormind_dataset_load("/nonexistent/ormind", &ds) == ORMIND_E_EMPTY_DATASET);
  CHECK(std::string(ormind_last_error()).find("/nonexistent/ormind") != std::string::npos);

  REQUIRE(ormind_dataset_load(kCorpus.c_str(), &ds) == ORMIND_OK);
  CHECK(ormind_dataset_size(ds) == 12);
  CHECK(ormind_dataset_problem_id(ds, 99) == nullptr);
  char* errors = nullptr;
  REQUIRE(ormind_dataset_errors_json(ds, &errors) == ORMIND_OK);
  CHECK(nlohmann::json::parse(take(errors)) == nlohmann::json::array());
  ormind_dataset_free(ds);
}

TEST_CASE("solve through the C API") {
  Handles h;
  ormind_outcome* o = nullptr;
  REQUIRE(ormind_solve(h.ds, h.index_of("pharmacy"), h.client, nullptr, &o) == ORMIND_OK);
  CHECK(ormind_outcome_classification(o) == ORMIND_SUCCESS);
  char* s = nullptr;
  REQUIRE(ormind_outcome_summary_json(o, &s) == ORMIND_OK);
  const auto summary = nlohmann::json::parse(take(s));
  CHECK(summary["problem_id"] == "pharmacy");
  CHECK(summary["status"] == "Optimal");
  CHECK(summary["objective"].get<double>() == doctest::Approx(735.0));
  CHECK(summary["assignment"]["sleeping_pills"].get<double>() == doctest::Approx(117.0));
  REQUIRE(ormind_outcome_trace_json(o, &s) == ORMIND_OK);
  const std::string trace = take(s);
  CHECK(nlohmann::json::parse(trace)["classification"] == "Success");

  char* narrative = nullptr;
  REQUIRE(ormind_inspect(trace.c_str(), &narrative) == ORMIND_OK);
  CHECK(take(narrative).find("System 2 Reasoner") != std::string::npos);
  ormind_outcome_free(o);

  CHECK(ormind_solve(h.ds, 99, h.client, nullptr, &o) == ORMIND_E_INVALID_ARGUMENT);
  CHECK(ormind_solve(h.ds, 0, h.client, "{\"temperature\": 9}", &o) == ORMIND_E_INVALID_ARGUMENT);
  CHECK(ormind_solve(h.ds, 0, h.client, "{not json", &o) == ORMIND_E_INVALID_ARGUMENT);
}

TEST_CASE("replay misses surface in the classification, not as a status") {
  ormind_dataset* ds = nullptr;
  ormind_client* client = nullptr;
  REQUIRE(ormind_dataset_load((kCorpus / "pharmacy.json").c_str(), &ds) == ORMIND_OK);
  const fs::path empty = fs::temp_directory_path() / ("ormind_capi_empty_" + std::to_string(::getpid()));
  fs::create_directories(empty);
  REQUIRE(ormind_client_replay(empty.c_str(), &client) == ORMIND_OK);
  ormind_outcome* o = nullptr;
  REQUIRE(ormind_solve(ds, 0, client, nullptr, &o) == ORMIND_OK);
  CHECK(ormind_outcome_classification(o) == ORMIND_FORMULATION_FAILURE);
  char* s = nullptr;
  REQUIRE(ormind_outcome_trace_json(o, &s) == ORMIND_OK);
  CHECK(take(s).find("no fixture") != std::string::npos);
  ormind_outcome_free(o);
  ormind_client_free(client);
  ormind_dataset_free(ds);
  fs::remove_all(empty);
}

namespace {
struct Progress {
  std::vector<std::string> ids;
  int success = 0;
};
void on_progress(const char* id, ormind_classification c, const char* trace, void* user) {
  auto* p = static_cast<Progress*>(user);
  p->ids.emplace_back(id);
  if (c == ORMIND_SUCCESS) ++p->success;
  CHECK(trace != nullptr);
}
}  // namespace

TEST_CASE("bench through the C API") {
  Handles h;
  Progress progress;
  ormind_report* r = nullptr;
  REQUIRE(ormind_bench(h.ds, h.client, "{\"workers\": 3}", on_progress, &progress, &r) ==
          ORMIND_OK);
  CHECK(progress.ids.size() == 12);
  CHECK(progress.success == 8);
  CHECK(ormind_report_rate(r, ORMIND_SUCCESS) == doctest::Approx(8.0 / 12.0));
  CHECK(ormind_report_rate(r, ORMIND_FORMULATION_FAILURE) == doctest::Approx(2.0 / 12.0));
  CHECK(ormind_report_rate(r, ORMIND_EXECUTION_FAILURE) == doctest::Approx(1.0 / 12.0));
  CHECK(ormind_report_cancelled(r) == 0);
  char* s = nullptr;
  REQUIRE(ormind_report_json(r, 0, &s) == ORMIND_OK);
  const auto j = nlohmann::json::parse(take(s));
  CHECK(j["rows"].size() == 12);
  CHECK_FALSE(j["rows"][0].contains("wall_ms"));
  REQUIRE(ormind_report_table(r, &s) == ORMIND_OK);
  CHECK(take(s).find("66.7%") != std::string::npos);
  ormind_report_free(r);

  ormind_request_cancel();
  REQUIRE(ormind_bench(h.ds, h.client, nullptr, nullptr, nullptr, &r) == ORMIND_OK);
  CHECK(ormind_report_cancelled(r) == 1);
  ormind_report_free(r);
  ormind_reset_cancel();
}

TEST_CASE("sweep through the C API") {
  Handles h;
  const double temps[] = {0.0, 0.5};
  char* json = nullptr;
  char* table = nullptr;
  REQUIRE(ormind_sweep(h.ds, temps, 2, nullptr, (kCorpus / "fixtures").c_str(), nullptr, &json,
                       &table) == ORMIND_OK);
  const auto j = nlohmann::json::parse(take(json));
  CHECK(j["sweep"].size() == 2);
  CHECK(take(table).find("0.5") != std::string::npos);

  const double bad[] = {0.5, 0.1};
  CHECK(ormind_sweep(h.ds, bad, 2, h.client, nullptr, nullptr, &json, &table) ==
        ORMIND_E_INVALID_ARGUMENT);
}

TEST_CASE("live client configuration") {
  ormind_client* c = nullptr;
  CHECK(ormind_client_live("{\"base_url\": \"http://127.0.0.1:9/v1\", \"api_key\": \"k\"}", &c) ==
        ORMIND_OK);
  ormind_client_free(c);
  c = nullptr;
  ::unsetenv("ORMIND_API_KEY");
  CHECK(ormind_client_live("{\"base_url\": \"http://127.0.0.1:9/v1\"}", &c) ==
        ORMIND_E_INVALID_ARGUMENT);
  CHECK(std::string(ormind_last_error()).find("ORMIND_API_KEY") != std::string::npos);
  CHECK(ormind_client_live("{\"base_url\": \"ftp://x\", \"api_key\": \"k\"}", &c) ==
        ORMIND_E_INVALID_ARGUMENT);
}

TEST_CASE("inspect and atomic writes") {
  char* s = nullptr;
  CHECK(ormind_inspect("", &s) == ORMIND_E_FORMAT);
  CHECK(ormind_inspect("{\"events\": 3}", &s) == ORMIND_E_FORMAT);

  const fs::path dir = fs::temp_directory_path() / ("ormind_capi_" + std::to_string(::getpid()));
  const fs::path file = dir / "sub" / "out.txt";
  REQUIRE(ormind_write_file_atomic(file.c_str(), "abc", 3) == ORMIND_OK);
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "abc");
  fs::create_directories(dir / "blocked");
  CHECK(ormind_write_file_atomic((dir / "blocked").c_str(), "x", 1) == ORMIND_E_STORAGE);
  fs::remove_all(dir);
}
