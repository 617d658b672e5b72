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

#ifndef ORMIND_ORMIND_H_
#define ORMIND_ORMIND_H_

#include <stddef.h>

#if defined(ORMIND_BUILDING_LIBRARY)
#define ORMIND_API __attribute__((visibility("default")))
#else
#define ORMIND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ormind_status {
  ORMIND_OK = 0,
  ORMIND_E_INVALID_ARGUMENT = 1,
  ORMIND_E_IO = 2,
  ORMIND_E_FORMAT = 3,
  ORMIND_E_EMPTY_DATASET = 4,
  ORMIND_E_TRANSPORT = 5,
  ORMIND_E_FIXTURE_MISS = 6,
  ORMIND_E_STORAGE = 7,
  ORMIND_E_MODEL = 8,
  ORMIND_E_INTERNAL = 99
} ormind_status;

typedef enum ormind_classification {
  ORMIND_SUCCESS = 0,
  ORMIND_WRONG_ANSWER = 1,
  ORMIND_FORMULATION_FAILURE = 2,
  ORMIND_EXECUTION_FAILURE = 3
} ormind_classification;

typedef struct ormind_client ormind_client;
typedef struct ormind_dataset ormind_dataset;
typedef struct ormind_outcome ormind_outcome;
typedef struct ormind_report ormind_report;

/* Strings returned through char** out-parameters are owned by the caller
   and released with ormind_string_free. */
ORMIND_API void ormind_string_free(char* s);

/* Message of the last failed call on this thread; never NULL. */
ORMIND_API const char* ormind_last_error(void);
ORMIND_API const char* ormind_status_name(ormind_status status);
ORMIND_API const char* ormind_classification_name(ormind_classification c);
ORMIND_API const char* ormind_version(void);

/* Clients. Config objects are JSON text; NULL means defaults. */
ORMIND_API ormind_status ormind_client_replay(const char* fixtures_dir, ormind_client** out);
/* {"base_url", "api_key", "max_retries", "backoff_ms", "timeout_s"}.
   api_key falls back to ORMIND_API_KEY; a missing key is INVALID_ARGUMENT. */
ORMIND_API ormind_status ormind_client_live(const char* config_json, ormind_client** out);
/* Buffers responses of `inner` per problem; `inner` must outlive it. */
ORMIND_API ormind_status ormind_client_recording(ormind_client* inner, const char* fixtures_dir,
                                                 ormind_client** out);
/* Writes the buffered responses of one problem (atomic merge). */
ORMIND_API ormind_status ormind_client_flush(ormind_client* client, const char* problem_id,
                                             size_t* written);
ORMIND_API void ormind_client_free(ormind_client* client);

/* Datasets: a directory of problem files or one problem/combined file. */
ORMIND_API ormind_status ormind_dataset_load(const char* path, ormind_dataset** out);
ORMIND_API size_t ormind_dataset_size(const ormind_dataset* ds);
ORMIND_API const char* ormind_dataset_problem_id(const ormind_dataset* ds, size_t index);
/* JSON array of {"path", "message"} for files that failed to load. */
ORMIND_API ormind_status ormind_dataset_errors_json(const ormind_dataset* ds, char** out);
ORMIND_API void ormind_dataset_free(ormind_dataset* ds);

/* Run configuration JSON: {"model_id", "temperature", "max_syntax_repairs",
   "max_cf_repairs", "llm_reasoner", "workers"}. */
ORMIND_API ormind_status ormind_solve(const ormind_dataset* ds, size_t index,
                                      ormind_client* client, const char* config_json,
                                      ormind_outcome** out);
ORMIND_API ormind_classification ormind_outcome_classification(const ormind_outcome* o);
/* {"problem_id", "classification", "status", "objective", "assignment", "repairs"} */
ORMIND_API ormind_status ormind_outcome_summary_json(const ormind_outcome* o, char** out);
ORMIND_API ormind_status ormind_outcome_trace_json(const ormind_outcome* o, char** out);
ORMIND_API void ormind_outcome_free(ormind_outcome* o);

/* Called once per finished problem, serialized across workers. */
typedef void (*ormind_progress_fn)(const char* problem_id, ormind_classification c,
                                   const char* trace_json, void* user);

ORMIND_API ormind_status ormind_bench(const ormind_dataset* ds, ormind_client* client,
                                      const char* config_json, ormind_progress_fn progress,
                                      void* user, ormind_report** out);
ORMIND_API ormind_status ormind_report_json(const ormind_report* r, int include_timing,
                                            char** out);
ORMIND_API ormind_status ormind_report_table(const ormind_report* r, char** out);
/* Fraction in [0, 1] per classification. */
ORMIND_API double ormind_report_rate(const ormind_report* r, ormind_classification c);
ORMIND_API int ormind_report_cancelled(const ormind_report* r);
ORMIND_API void ormind_report_free(ormind_report* r);

/* Temperature sweep. With `client` NULL each temperature replays from
   `<fixtures_dir>/temp-<t>` when present, else from `fixtures_dir`. */
ORMIND_API ormind_status ormind_sweep(const ormind_dataset* ds, const double* temps,
                                      size_t count, ormind_client* client,
                                      const char* fixtures_dir, const char* config_json,
                                      char** json_out, char** table_out);

/* Narrative of a trace document; FORMAT on a malformed trace. */
ORMIND_API ormind_status ormind_inspect(const char* trace_json, char** out);

/* Write-temp-then-rename. */
ORMIND_API ormind_status ormind_write_file_atomic(const char* path, const char* data,
                                                  size_t size);

/* Async-signal-safe. Problems not yet started are skipped. */
ORMIND_API void ormind_request_cancel(void);
ORMIND_API void ormind_reset_cancel(void);

#ifdef __cplusplus
}
#endif

#endif /* ORMIND_ORMIND_H_ */
