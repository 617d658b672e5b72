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

#include "ormind/ormind.h"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "ormind/bench.hpp"
#include "ormind/file_util.hpp"
#include "ormind/pipeline.hpp"
#include "ormind/trace.hpp"

using namespace ormind;

struct ormind_client {
  std::unique_ptr<ChatClient> owned;
  RecordingClient* recording = nullptr;  // points into `owned` when recording
  ChatClient& get() { return *owned; }
};

struct ormind_dataset {
  LoadResult data;
};

struct ormind_outcome {
  std::string problem_id;
  RunOutcome outcome;
};

struct ormind_report {
  BenchReport report;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_cancel{false};
static_assert(std::atomic<bool>::is_always_lock_free);

ormind_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return ORMIND_E_INVALID_ARGUMENT;
    case ErrorCode::kIoError: return ORMIND_E_IO;
    case ErrorCode::kFormatError: return ORMIND_E_FORMAT;
    case ErrorCode::kEmptyDataset: return ORMIND_E_EMPTY_DATASET;
    case ErrorCode::kTransport: return ORMIND_E_TRANSPORT;
    case ErrorCode::kFixtureMiss:
    case ErrorCode::kScriptExhausted: return ORMIND_E_FIXTURE_MISS;
    case ErrorCode::kStorageWrite: return ORMIND_E_STORAGE;
    default: return ORMIND_E_MODEL;
  }
}

ormind_status fail(ormind_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `fn` and converts exceptions into status codes.
template <typename Fn>
ormind_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ORMIND_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ORMIND_E_FORMAT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ORMIND_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ORMIND_E_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

nlohmann::json parse_config_json(const char* text) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  return j;
}

RunConfig run_config(const nlohmann::json& j) {
  RunConfig c;
  c.model_id = j.value("model_id", c.model_id);
  c.temperature = j.value("temperature", c.temperature);
  c.max_syntax_repairs = j.value("max_syntax_repairs", c.max_syntax_repairs);
  c.max_cf_repairs = j.value("max_cf_repairs", c.max_cf_repairs);
  c.llm_reasoner_enabled = j.value("llm_reasoner", c.llm_reasoner_enabled);
  if (c.max_syntax_repairs < 0 || c.max_cf_repairs < 0) {
    throw Error(ErrorCode::kInvalidArgument, "repair caps must be >= 0");
  }
  if (!(c.temperature >= 0.0 && c.temperature <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must lie in [0, 2]");
  }
  return c;
}

BenchOptions bench_options(const nlohmann::json& j) {
  BenchOptions o;
  const int workers = j.value("workers", 4);
  if (workers < 1) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  o.workers = static_cast<std::size_t>(workers);
  o.cancel = &g_cancel;
  return o;
}

ormind_classification to_c(Classification c) {
  switch (c) {
    case Classification::kSuccess: return ORMIND_SUCCESS;
    case Classification::kWrongAnswer: return ORMIND_WRONG_ANSWER;
    case Classification::kFormulationFailure: return ORMIND_FORMULATION_FAILURE;
    case Classification::kExecutionFailure: return ORMIND_EXECUTION_FAILURE;
  }
  return ORMIND_FORMULATION_FAILURE;
}

#define ORMIND_REQUIRE(cond, what)                                        \
  do {                                                                    \
    if (!(cond)) return fail(ORMIND_E_INVALID_ARGUMENT, what);            \
  } while (0)

}  // namespace

extern "C" {

void ormind_string_free(char* s) { std::free(s); }

const char* ormind_last_error(void) { return g_last_error.c_str(); }

const char* ormind_status_name(ormind_status status) {
  switch (status) {
    case ORMIND_OK: return "ok";
    case ORMIND_E_INVALID_ARGUMENT: return "invalid argument";
    case ORMIND_E_IO: return "i/o error";
    case ORMIND_E_FORMAT: return "format error";
    case ORMIND_E_EMPTY_DATASET: return "empty dataset";
    case ORMIND_E_TRANSPORT: return "transport error";
    case ORMIND_E_FIXTURE_MISS: return "fixture miss";
    case ORMIND_E_STORAGE: return "storage write error";
    case ORMIND_E_MODEL: return "model error";
    case ORMIND_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ormind_classification_name(ormind_classification c) {
  switch (c) {
    case ORMIND_SUCCESS: return "Success";
    case ORMIND_WRONG_ANSWER: return "WrongAnswer";
    case ORMIND_FORMULATION_FAILURE: return "FormulationFailure";
    case ORMIND_EXECUTION_FAILURE: return "ExecutionFailure";
  }
  return "Unknown";
}

const char* ormind_version(void) { return "0.1.0"; }

// --- clients ---------------------------------------------------------------

ormind_status ormind_client_replay(const char* fixtures_dir, ormind_client** out) {
  ORMIND_REQUIRE(fixtures_dir != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    if (!std::filesystem::is_directory(fixtures_dir)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("fixtures directory not found: ") + fixtures_dir);
    }
    auto c = std::make_unique<ormind_client>();
    c->owned = std::make_unique<ReplayClient>(fixtures_dir);
    *out = c.release();
  });
}

ormind_status ormind_client_live(const char* config_json, ormind_client** out) {
  ORMIND_REQUIRE(out != nullptr, "null argument");
  return guarded([&] {
    const nlohmann::json j = parse_config_json(config_json);
    LiveConfig cfg;
    cfg.base_url = j.value("base_url", cfg.base_url);
    cfg.api_key = j.value("api_key", api_key_from_env());
    cfg.max_retries = j.value("max_retries", cfg.max_retries);
    cfg.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", 500));
    cfg.timeout = std::chrono::seconds(j.value("timeout_s", 120));
    if (cfg.api_key.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "no API key: set ORMIND_API_KEY");
    }
    auto c = std::make_unique<ormind_client>();
    c->owned = std::make_unique<LiveClient>(cfg);
    *out = c.release();
  });
}

ormind_status ormind_client_recording(ormind_client* inner, const char* fixtures_dir,
                                      ormind_client** out) {
  ORMIND_REQUIRE(inner != nullptr && fixtures_dir != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    std::filesystem::create_directories(fixtures_dir);
    auto c = std::make_unique<ormind_client>();
    auto rec = std::make_unique<RecordingClient>(
        inner->get(), fixtures_dir,
        [](const std::string& msg) { std::fprintf(stderr, "warning: %s\n", msg.c_str()); });
    c->recording = rec.get();
    c->owned = std::move(rec);
    *out = c.release();
  });
}

ormind_status ormind_client_flush(ormind_client* client, const char* problem_id,
                                  size_t* written) {
  ORMIND_REQUIRE(client != nullptr && problem_id != nullptr, "null argument");
  ORMIND_REQUIRE(client->recording != nullptr, "client is not recording");
  return guarded([&] {
    const std::size_t n = client->recording->flush(problem_id);
    if (written != nullptr) *written = n;
  });
}

void ormind_client_free(ormind_client* client) { delete client; }

// --- datasets --------------------------------------------------------------

ormind_status ormind_dataset_load(const char* path, ormind_dataset** out) {
  ORMIND_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    auto ds = std::make_unique<ormind_dataset>();
    ds->data = load_problems(path);
    *out = ds.release();
  });
}

size_t ormind_dataset_size(const ormind_dataset* ds) {
  return ds == nullptr ? 0 : ds->data.problems.size();
}

const char* ormind_dataset_problem_id(const ormind_dataset* ds, size_t index) {
  if (ds == nullptr || index >= ds->data.problems.size()) return nullptr;
  return ds->data.problems[index].id.c_str();
}

ormind_status ormind_dataset_errors_json(const ormind_dataset* ds, char** out) {
  ORMIND_REQUIRE(ds != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : ds->data.errors) j.push_back({{"path", e.path}, {"message", e.message}});
    *out = dup_string(j.dump());
  });
}

void ormind_dataset_free(ormind_dataset* ds) { delete ds; }

// --- runs ------------------------------------------------------------------

ormind_status ormind_solve(const ormind_dataset* ds, size_t index, ormind_client* client,
                           const char* config_json, ormind_outcome** out) {
  ORMIND_REQUIRE(ds != nullptr && client != nullptr && out != nullptr, "null argument");
  ORMIND_REQUIRE(index < ds->data.problems.size(), "problem index out of range");
  return guarded([&] {
    const RunConfig cfg = run_config(parse_config_json(config_json));
    auto o = std::make_unique<ormind_outcome>();
    o->problem_id = ds->data.problems[index].id;
    o->outcome = solve_problem(ds->data.problems[index], cfg, client->get());
    *out = o.release();
  });
}

ormind_classification ormind_outcome_classification(const ormind_outcome* o) {
  return o == nullptr ? ORMIND_FORMULATION_FAILURE : to_c(o->outcome.classification);
}

ormind_status ormind_outcome_summary_json(const ormind_outcome* o, char** out) {
  ORMIND_REQUIRE(o != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    nlohmann::ordered_json j;
    j["problem_id"] = o->problem_id;
    j["classification"] = std::string(to_string(o->outcome.classification));
    const auto& f = o->outcome.final;
    j["status"] = f ? nlohmann::json(std::string(to_string(f->status))) : nlohmann::json(nullptr);
    j["objective"] = f && f->objective ? nlohmann::json(*f->objective) : nlohmann::json(nullptr);
    j["assignment"] = f && f->assignment ? nlohmann::json(*f->assignment) : nlohmann::json(nullptr);
    j["repairs"] = {{"syntax", o->outcome.syntax_repairs},
                    {"counterfactual", o->outcome.cf_repairs}};
    *out = dup_string(j.dump());
  });
}

ormind_status ormind_outcome_trace_json(const ormind_outcome* o, char** out) {
  ORMIND_REQUIRE(o != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = dup_string(o->outcome.trace_text()); });
}

void ormind_outcome_free(ormind_outcome* o) { delete o; }

ormind_status ormind_bench(const ormind_dataset* ds, ormind_client* client,
                           const char* config_json, ormind_progress_fn progress, void* user,
                           ormind_report** out) {
  ORMIND_REQUIRE(ds != nullptr && client != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const nlohmann::json j = parse_config_json(config_json);
    const RunConfig cfg = run_config(j);
    BenchOptions opts = bench_options(j);
    if (progress != nullptr) {
      opts.on_complete = [progress, user](const ProblemInput& p, const RunOutcome& o) {
        const std::string trace = o.trace_text();
        progress(p.id.c_str(), to_c(o.classification), trace.c_str(), user);
      };
    }
    auto r = std::make_unique<ormind_report>();
    r->report = run_benchmark(ds->data.problems, cfg, client->get(), opts);
    *out = r.release();
  });
}

ormind_status ormind_report_json(const ormind_report* r, int include_timing, char** out) {
  ORMIND_REQUIRE(r != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = dup_string(r->report.to_json(include_timing != 0).dump(2) + "\n"); });
}

ormind_status ormind_report_table(const ormind_report* r, char** out) {
  ORMIND_REQUIRE(r != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = dup_string(r->report.to_table()); });
}

double ormind_report_rate(const ormind_report* r, ormind_classification c) {
  if (r == nullptr) return 0.0;
  const Aggregates& a = r->report.aggregates;
  switch (c) {
    case ORMIND_SUCCESS: return a.sr();
    case ORMIND_WRONG_ANSWER: return a.wrong_answer_rate();
    case ORMIND_FORMULATION_FAILURE: return a.mffr();
    case ORMIND_EXECUTION_FAILURE: return a.iefr();
  }
  return 0.0;
}

int ormind_report_cancelled(const ormind_report* r) {
  return r != nullptr && r->report.cancelled ? 1 : 0;
}

void ormind_report_free(ormind_report* r) { delete r; }

ormind_status ormind_sweep(const ormind_dataset* ds, const double* temps, size_t count,
                           ormind_client* client, const char* fixtures_dir,
                           const char* config_json, char** json_out, char** table_out) {
  ORMIND_REQUIRE(ds != nullptr && (temps != nullptr || count == 0), "null argument");
  ORMIND_REQUIRE(client != nullptr || fixtures_dir != nullptr,
                 "sweep needs a client or a fixtures directory");
  return guarded([&] {
    const nlohmann::json j = parse_config_json(config_json);
    const RunConfig cfg = run_config(j);
    const BenchOptions opts = bench_options(j);
    const std::vector<double> ts(temps, temps + count);
    std::map<double, std::unique_ptr<ReplayClient>> replay;
    auto client_for = [&](double t) -> ChatClient& {
      if (client != nullptr) return client->get();
      auto& slot = replay[t];
      slot = std::make_unique<ReplayClient>(sweep_fixture_dir(fixtures_dir, t));
      return *slot;
    };
    const SweepResult sweep = sweep_temperature(ds->data.problems, ts, cfg, client_for, opts);
    std::string json = sweep.to_json().dump(2) + "\n";
    std::string table = sweep.to_table();
    if (json_out != nullptr) *json_out = dup_string(json);
    if (table_out != nullptr) {
      try {
        *table_out = dup_string(table);
      } catch (...) {
        if (json_out != nullptr) std::free(*json_out);
        throw;
      }
    }
  });
}

ormind_status ormind_inspect(const char* trace_json, char** out) {
  ORMIND_REQUIRE(trace_json != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = dup_string(render_narrative(parse_trace(trace_json))); });
}

ormind_status ormind_write_file_atomic(const char* path, const char* data, size_t size) {
  ORMIND_REQUIRE(path != nullptr && (data != nullptr || size == 0), "null argument");
  return guarded([&] { atomic_write(path, std::string_view(data == nullptr ? "" : data, size)); });
}

void ormind_request_cancel(void) { g_cancel.store(true); }

void ormind_reset_cancel(void) { g_cancel.store(false); }

}  // extern "C"
