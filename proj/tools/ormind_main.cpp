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

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ormind/ormind.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitInterrupted = 130;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Owns a string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { ormind_string_free(p); }
  std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() {
    if (p != nullptr) Free(p);
  }
};
using Client = Handle<ormind_client, ormind_client_free>;
using Dataset = Handle<ormind_dataset, ormind_dataset_free>;
using Outcome = Handle<ormind_outcome, ormind_outcome_free>;
using Report = Handle<ormind_report, ormind_report_free>;

std::string last_error() { return ormind_last_error(); }

void write_file(const std::string& path, const std::string& content) {
  if (ormind_write_file_atomic(path.c_str(), content.data(), content.size()) != ORMIND_OK) {
    throw std::runtime_error("cannot write " + path + ": " + last_error());
  }
}

struct ClientFlags {
  std::string fixtures;
  bool live = false;
  bool replay = false;
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  std::string base_url = "https://api.openai.com/v1";
  int max_retries = 3;
  int backoff_ms = 500;
  int workers = 4;
  int max_syntax_repairs = 1;
  int max_cf_repairs = 1;
  bool llm_reasoner = false;
};

void add_client_flags(CLI::App* cmd, ClientFlags& f, bool with_workers) {
  cmd->add_option("--fixtures", f.fixtures, "Fixture directory (replay source)");
  auto* live = cmd->add_flag("--live", f.live, "Call the live endpoint");
  auto* replay = cmd->add_flag("--replay", f.replay, "Replay recorded fixtures");
  live->excludes(replay);
  cmd->add_option("--model", f.model, "Model id sent to the endpoint");
  cmd->add_option("--temperature", f.temperature, "Sampling temperature")
      ->check(CLI::Range(0.0, 2.0));
  cmd->add_option("--base-url", f.base_url, "OpenAI-compatible base URL");
  cmd->add_option("--max-retries", f.max_retries, "Retries on 429/5xx/transport errors")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--backoff-ms", f.backoff_ms, "Base retry backoff")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-syntax-repairs", f.max_syntax_repairs)->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-cf-repairs", f.max_cf_repairs)->check(CLI::NonNegativeNumber);
  cmd->add_flag("--llm-reasoner", f.llm_reasoner, "Add the LLM pass to counterfactual analysis");
  if (with_workers) {
    cmd->add_option("--workers", f.workers, "Concurrent problems")->check(CLI::PositiveNumber);
  }
}

std::string run_config(const ClientFlags& f) {
  nlohmann::json j = {{"model_id", f.model},
                      {"temperature", f.temperature},
                      {"max_syntax_repairs", f.max_syntax_repairs},
                      {"max_cf_repairs", f.max_cf_repairs},
                      {"llm_reasoner", f.llm_reasoner},
                      {"workers", f.workers}};
  return j.dump();
}

void make_live(const ClientFlags& f, Client& out) {
  const char* key = std::getenv("ORMIND_API_KEY");
  if (key == nullptr || *key == '\0') throw UsageError("live mode needs ORMIND_API_KEY");
  nlohmann::json j = {{"base_url", f.base_url},
                      {"api_key", key},
                      {"max_retries", f.max_retries},
                      {"backoff_ms", f.backoff_ms}};
  if (ormind_client_live(j.dump().c_str(), &out.p) != ORMIND_OK) throw UsageError(last_error());
}

// Replay when a fixtures directory is at hand, live otherwise; --live and
// --replay override.
void make_client(ClientFlags& f, const fs::path& default_fixtures, Client& out) {
  if (f.fixtures.empty() && !f.live && fs::is_directory(default_fixtures)) {
    f.fixtures = default_fixtures.string();
  }
  const bool replay = f.replay || (!f.live && !f.fixtures.empty());
  if (!replay) {
    make_live(f, out);
    return;
  }
  if (f.fixtures.empty()) throw UsageError("replay mode needs --fixtures");
  if (!fs::is_directory(f.fixtures)) {
    throw UsageError("fixtures directory not found: " + f.fixtures);
  }
  if (ormind_client_replay(f.fixtures.c_str(), &out.p) != ORMIND_OK) {
    throw UsageError(last_error());
  }
}

fs::path fixtures_next_to(const std::string& dataset) {
  const fs::path p(dataset);
  return (fs::is_directory(p) ? p : p.parent_path()) / "fixtures";
}

void load_dataset(const std::string& path, Dataset& out) {
  const ormind_status s = ormind_dataset_load(path.c_str(), &out.p);
  if (s != ORMIND_OK) throw DataError(last_error());
  CString errors;
  if (ormind_dataset_errors_json(out.p, &errors.p) == ORMIND_OK) {
    for (const auto& e : nlohmann::json::parse(errors.str())) {
      std::cerr << "skipped " << e.value("path", "") << ": " << e.value("message", "") << "\n";
    }
  }
}

std::string number_text(const nlohmann::json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  std::ostringstream ss;
  ss.precision(12);
  ss << v.get<double>();
  return ss.str();
}

void on_signal(int) { ormind_request_cancel(); }

// --- commands --------------------------------------------------------------

struct SolveArgs {
  std::string problem;
  std::string id;
  std::string trace;
};

int cmd_solve(SolveArgs& a, ClientFlags& f) {
  Dataset ds;
  load_dataset(a.problem, ds);
  size_t index = 0;
  if (!a.id.empty()) {
    const size_t n = ormind_dataset_size(ds.p);
    while (index < n && a.id != ormind_dataset_problem_id(ds.p, index)) ++index;
    if (index == n) throw UsageError("no problem with id '" + a.id + "' in " + a.problem);
  }
  Client client;
  make_client(f, fixtures_next_to(a.problem), client);

  Outcome o;
  if (ormind_solve(ds.p, index, client.p, run_config(f).c_str(), &o.p) != ORMIND_OK) {
    throw std::runtime_error(last_error());
  }
  CString summary_text, trace;
  ormind_outcome_summary_json(o.p, &summary_text.p);
  ormind_outcome_trace_json(o.p, &trace.p);
  const auto s = nlohmann::json::parse(summary_text.str());

  std::cout << "problem: " << s["problem_id"].get<std::string>() << "\n";
  std::cout << "classification: " << s["classification"].get<std::string>() << "\n";
  std::cout << "status: " << (s["status"].is_null() ? "no model" : s["status"].get<std::string>())
            << "\n";
  if (!s["objective"].is_null()) std::cout << "objective: " << number_text(s["objective"]) << "\n";
  if (s["assignment"].is_object()) {
    std::cout << "assignment:";
    for (const auto& [name, v] : s["assignment"].items()) {
      std::cout << " " << name << "=" << number_text(v);
    }
    std::cout << "\n";
  }
  std::cout << "repairs: " << s["repairs"]["syntax"] << " syntax, "
            << s["repairs"]["counterfactual"] << " counterfactual\n";

  const std::string trace_path =
      a.trace.empty() ? s["problem_id"].get<std::string>() + ".trace.json" : a.trace;
  write_file(trace_path, trace.str());
  std::cout << "trace: " << trace_path << "\n";
  return static_cast<int>(ormind_outcome_classification(o.p));
}

struct BenchArgs {
  std::string dataset;
  std::string out;
  bool table = false;
  std::string trace_dir;
};

struct Progress {
  ormind_client* recording = nullptr;
  std::string trace_dir;
};

void progress_cb(const char* id, ormind_classification c, const char* trace, void* user) {
  auto* p = static_cast<Progress*>(user);
  std::cerr << id << ": " << ormind_classification_name(c) << "\n";
  if (!p->trace_dir.empty()) {
    try {
      write_file((fs::path(p->trace_dir) / (std::string(id) + ".trace.json")).string(), trace);
    } catch (const std::exception& e) {
      std::cerr << "warning: " << e.what() << "\n";
    }
  }
  if (p->recording != nullptr) {
    size_t n = 0;
    if (ormind_client_flush(p->recording, id, &n) == ORMIND_OK) {
      std::cerr << "  recorded " << n << " responses for " << id << "\n";
    } else {
      std::cerr << "  failed to record " << id << ": " << last_error() << "\n";
    }
  }
}

int finish_report(Report& r, const BenchArgs& a) {
  CString json, table;
  ormind_report_json(r.p, 1, &json.p);
  ormind_report_table(r.p, &table.p);
  if (!a.out.empty()) write_file(a.out, json.str());
  if (a.table) {
    std::cout << table.str();
  } else {
    std::printf("SR %.1f%% | MFFR %.1f%% | IEFR %.1f%% | WrongAnswer %.1f%%\n",
                100 * ormind_report_rate(r.p, ORMIND_SUCCESS),
                100 * ormind_report_rate(r.p, ORMIND_FORMULATION_FAILURE),
                100 * ormind_report_rate(r.p, ORMIND_EXECUTION_FAILURE),
                100 * ormind_report_rate(r.p, ORMIND_WRONG_ANSWER));
  }
  if (ormind_report_cancelled(r.p)) {
    std::cerr << "interrupted; report holds the completed problems only\n";
    return kExitInterrupted;
  }
  return 0;
}

int run_bench(BenchArgs& a, ClientFlags& f, ormind_client* client, Progress& progress) {
  Dataset ds;
  load_dataset(a.dataset, ds);
  if (!progress.trace_dir.empty()) fs::create_directories(progress.trace_dir);
  Report r;
  if (ormind_bench(ds.p, client, run_config(f).c_str(), progress_cb, &progress, &r.p) !=
      ORMIND_OK) {
    throw std::runtime_error(last_error());
  }
  return finish_report(r, a);
}

int cmd_bench(BenchArgs& a, ClientFlags& f) {
  if (!fs::exists(a.dataset)) throw DataError("dataset not found: " + a.dataset);
  Client client;
  make_client(f, fixtures_next_to(a.dataset), client);
  Progress progress{nullptr, a.trace_dir};
  return run_bench(a, f, client.p, progress);
}

int cmd_record(BenchArgs& a, ClientFlags& f) {
  if (f.fixtures.empty()) throw UsageError("record needs --fixtures");
  Client live;
  make_live(f, live);  // fails before any network call without a key
  if (!fs::exists(a.dataset)) throw DataError("dataset not found: " + a.dataset);
  Client rec;
  if (ormind_client_recording(live.p, f.fixtures.c_str(), &rec.p) != ORMIND_OK) {
    throw std::runtime_error(last_error());
  }
  Progress progress{rec.p, a.trace_dir};
  return run_bench(a, f, rec.p, progress);
}

struct SweepArgs {
  std::string dataset;
  std::string temps;
  std::string out;
};

std::vector<double> parse_temps(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad temperature '" + item + "'");
    }
  }
  return out;
}

int cmd_sweep(SweepArgs& a, ClientFlags& f) {
  const std::vector<double> temps = parse_temps(a.temps);
  Dataset ds;
  if (!fs::exists(a.dataset)) throw DataError("dataset not found: " + a.dataset);
  load_dataset(a.dataset, ds);
  if (f.fixtures.empty() && !f.live && fs::is_directory(fixtures_next_to(a.dataset))) {
    f.fixtures = fixtures_next_to(a.dataset).string();
  }
  Client client;
  const bool replay = f.replay || (!f.live && !f.fixtures.empty());
  if (!replay) {
    make_live(f, client);
  } else if (f.fixtures.empty() || !fs::is_directory(f.fixtures)) {
    throw UsageError("replay mode needs an existing --fixtures directory");
  }
  CString json, table;
  const ormind_status s =
      ormind_sweep(ds.p, temps.data(), temps.size(), client.p,
                   replay ? f.fixtures.c_str() : nullptr, run_config(f).c_str(), &json.p, &table.p);
  if (s == ORMIND_E_INVALID_ARGUMENT) throw UsageError(last_error());
  if (s != ORMIND_OK) throw std::runtime_error(last_error());
  if (!a.out.empty()) write_file(a.out, json.str());
  std::cout << table.str();
  return 0;
}

int cmd_inspect(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read trace " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  CString text;
  if (ormind_inspect(ss.str().c_str(), &text.p) != ORMIND_OK) throw DataError(last_error());
  std::cout << text.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turns optimization word problems into solved models through staged LLM calls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ormind_version());

  ClientFlags flags;
  SolveArgs solve_args;
  BenchArgs bench_args;
  SweepArgs sweep_args;
  std::string inspect_path;

  auto* solve = app.add_subcommand("solve", "Solve one problem");
  solve->add_option("problem", solve_args.problem, "Problem JSON file")->required();
  solve->add_option("--id", solve_args.id, "Problem id when the file holds several");
  solve->add_option("--trace", solve_args.trace, "Trace output path");
  add_client_flags(solve, flags, false);

  auto* bench = app.add_subcommand("bench", "Run a dataset and report SR/MFFR/IEFR");
  bench->add_option("dataset", bench_args.dataset, "Dataset directory or file")->required();
  bench->add_option("--out", bench_args.out, "JSON report path");
  bench->add_flag("--table", bench_args.table, "Print the aligned text table");
  bench->add_option("--trace-dir", bench_args.trace_dir, "Write one trace per problem");
  add_client_flags(bench, flags, true);

  auto* sweep = app.add_subcommand("sweep", "Benchmark across temperatures");
  sweep->add_option("dataset", sweep_args.dataset, "Dataset directory or file")->required();
  sweep->add_option("--temps", sweep_args.temps, "Comma-separated, increasing")->required();
  sweep->add_option("--out", sweep_args.out, "JSON output path");
  add_client_flags(sweep, flags, true);

  auto* record = app.add_subcommand("record", "Run live and store responses as fixtures");
  record->add_option("dataset", bench_args.dataset, "Dataset directory or file")->required();
  record->add_option("--out", bench_args.out, "JSON report path");
  record->add_flag("--table", bench_args.table, "Print the aligned text table");
  record->add_option("--trace-dir", bench_args.trace_dir, "Write one trace per problem");
  add_client_flags(record, flags, true);

  auto* inspect = app.add_subcommand("inspect", "Print the stage narrative of a trace");
  inspect->add_option("trace", inspect_path, "Trace JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    if (*solve) return cmd_solve(solve_args, flags);
    if (*bench) return cmd_bench(bench_args, flags);
    if (*sweep) return cmd_sweep(sweep_args, flags);
    if (*record) return cmd_record(bench_args, flags);
    if (*inspect) return cmd_inspect(inspect_path);
  } catch (const UsageError& e) {
    std::cerr << "ormind: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "ormind: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "ormind: " << e.what() << "\n";
    return 70;
  }
  return kExitUsage;
}
