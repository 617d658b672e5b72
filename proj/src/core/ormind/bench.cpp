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

#include "ormind/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "ormind/file_util.hpp"

namespace ormind {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void format_error(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::kFormatError, why, where);
}

std::vector<nlohmann::json> parse_expected(const nlohmann::json& v, const std::string& where) {
  std::vector<nlohmann::json> out;
  const nlohmann::json list = v.is_array() ? v : nlohmann::json::array({v});
  for (const auto& e : list) {
    if (e.is_number()) {
      out.push_back(e);
    } else if (e.is_string()) {
      std::string s = e.get<std::string>();
      std::transform(s.begin(), s.end(), s.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (s != "infeasible") format_error(where, "expected values are numbers or \"Infeasible\"");
      out.push_back("Infeasible");
    } else {
      format_error(where, "expected values are numbers or \"Infeasible\"");
    }
  }
  return out;
}

ProblemInstance parse_instance(const nlohmann::json& item, const std::string& where) {
  if (!item.is_object()) format_error(where, "instance must be an object");
  ProblemInstance inst;
  const nlohmann::json* input = nullptr;
  if (item.contains("input")) {
    input = &item["input"];
    if (!input->is_object()) format_error(where, "\"input\" must be an object");
    for (const auto& [k, v] : input->items()) inst.input[k] = v;
  } else {
    // Input names sit next to "output".
    for (const auto& [k, v] : item.items()) {
      if (k != "output") inst.input[k] = v;
    }
  }
  if (item.contains("output")) inst.expected = parse_expected(item["output"], where);
  return inst;
}

std::string percent(double f) { return fmt::format("{:.1f}%", 100.0 * f); }

std::string aligned(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += " " + cells[c] + std::string(width[c] - cells[c].size(), ' ') + " |";
    }
    return out + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (auto w : width) out += std::string(w + 2, '-') + "|";
  out += "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string temp_label(double t) { return fmt::format("{}", t); }

}  // namespace

ProblemInput problem_from_json(const nlohmann::json& doc, const std::string& fallback_id) {
  const std::string where = fallback_id;
  if (!doc.is_object()) format_error(where, "problem must be a JSON object");
  ProblemInput p;
  p.id = doc.contains("id") && doc["id"].is_string() ? doc["id"].get<std::string>() : fallback_id;
  if (p.id.empty()) format_error(where, "problem id is empty");
  if (!doc.contains("description") || !doc["description"].is_string() ||
      doc["description"].get<std::string>().empty()) {
    format_error(where, "missing nonempty \"description\"");
  }
  p.description = doc["description"].get<std::string>();

  if (doc.contains("parameters")) {
    if (!doc["parameters"].is_array()) format_error(where, "\"parameters\" must be a list");
    for (const auto& item : doc["parameters"]) {
      if (!item.is_object() || !item.contains("symbol") || !item["symbol"].is_string()) {
        format_error(where, "parameter entries need a \"symbol\"");
      }
      ParameterInfo info;
      info.symbol = item["symbol"].get<std::string>();
      info.definition = item.value("definition", std::string());
      if (item.contains("shape")) info.shape = item["shape"];
      p.parameters.push_back(std::move(info));
    }
  }

  const char* list_key = doc.contains("instances") ? "instances"
                         : doc.contains("data")    ? "data"
                                                   : nullptr;
  if (list_key != nullptr) {
    if (!doc[list_key].is_array()) format_error(where, std::string("\"") + list_key + "\" must be a list");
    for (const auto& item : doc[list_key]) p.instances.push_back(parse_instance(item, where));
  } else if (doc.contains("input") || doc.contains("output")) {
    ProblemInstance inst;
    if (doc.contains("input")) {
      if (!doc["input"].is_object()) format_error(where, "\"input\" must be an object");
      for (const auto& [k, v] : doc["input"].items()) inst.input[k] = v;
    }
    if (doc.contains("output")) inst.expected = parse_expected(doc["output"], where);
    p.instances.push_back(std::move(inst));
  }
  if (p.instances.empty()) format_error(where, "problem has no instances");
  return p;
}

LoadResult load_problems(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(ErrorCode::kEmptyDataset, "dataset path does not exist: " + path.string(),
                "dataset");
  }
  std::vector<fs::path> files;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }

  LoadResult out;
  std::set<std::string> seen;
  auto accept = [&](ProblemInput p, const fs::path& file) {
    if (!seen.insert(p.id).second) {
      out.errors.push_back({file.string(), "duplicate problem id '" + p.id + "'"});
      return;
    }
    out.problems.push_back(std::move(p));
  };
  for (const auto& file : files) {
    try {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(read_file(file));
      } catch (const nlohmann::json::exception& e) {
        format_error(file.string(), std::string("not valid JSON: ") + e.what());
      }
      const std::string stem = file.stem().string();
      if (doc.is_array()) {
        std::size_t k = 0;
        for (const auto& item : doc) {
          accept(problem_from_json(item, stem + "-" + std::to_string(k++)), file);
        }
      } else if (doc.is_object() && doc.contains("problems") && doc["problems"].is_array()) {
        std::size_t k = 0;
        for (const auto& item : doc["problems"]) {
          accept(problem_from_json(item, stem + "-" + std::to_string(k++)), file);
        }
      } else {
        accept(problem_from_json(doc, stem), file);
      }
    } catch (const Error& e) {
      out.errors.push_back({file.string(), e.what()});
    }
  }
  if (out.problems.empty()) {
    throw Error(ErrorCode::kEmptyDataset,
                fmt::format("no problems loaded from {} ({} file errors)", path.string(),
                            out.errors.size()),
                "dataset");
  }
  std::sort(out.problems.begin(), out.problems.end(),
            [](const ProblemInput& a, const ProblemInput& b) { return a.id < b.id; });
  return out;
}

// ---------------------------------------------------------------------------

namespace {
double frac(std::size_t n, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(total);
}
}  // namespace

double Aggregates::sr() const { return frac(success, total); }
double Aggregates::mffr() const { return frac(formulation_failure, total); }
double Aggregates::iefr() const { return frac(execution_failure, total); }
double Aggregates::wrong_answer_rate() const { return frac(wrong_answer, total); }

Aggregates Aggregates::from_rows(const std::vector<BenchRow>& rows) {
  Aggregates a;
  a.total = rows.size();
  for (const auto& r : rows) {
    switch (r.classification) {
      case Classification::kSuccess: ++a.success; break;
      case Classification::kWrongAnswer: ++a.wrong_answer; break;
      case Classification::kFormulationFailure: ++a.formulation_failure; break;
      case Classification::kExecutionFailure: ++a.execution_failure; break;
    }
  }
  return a;
}

nlohmann::ordered_json BenchReport::to_json(bool include_timing) const {
  ojson j;
  j["rows"] = ojson::array();
  for (const auto& r : rows) {
    ojson row;
    row["id"] = r.id;
    row["classification"] = std::string(to_string(r.classification));
    row["objective"] = r.objective ? ojson(*r.objective) : ojson(nullptr);
    row["status"] = r.status;
    row["expected"] = r.expected;
    row["repairs"] = {{"syntax", r.syntax_repairs}, {"counterfactual", r.cf_repairs}};
    row["transcript_units"] = r.transcript_units;
    if (include_timing) row["wall_ms"] = r.wall_ms;
    j["rows"].push_back(std::move(row));
  }
  const Aggregates& a = aggregates;
  j["aggregates"] = {{"total", a.total},
                     {"success", a.success},
                     {"wrong_answer", a.wrong_answer},
                     {"formulation_failure", a.formulation_failure},
                     {"execution_failure", a.execution_failure},
                     {"SR", a.sr()},
                     {"MFFR", a.mffr()},
                     {"IEFR", a.iefr()},
                     {"WrongAnswerRate", a.wrong_answer_rate()}};
  j["cancelled"] = cancelled;
  return j;
}

BenchReport BenchReport::from_json(const nlohmann::json& doc) {
  BenchReport r;
  try {
    for (const auto& row : doc.at("rows")) {
      BenchRow b;
      b.id = row.at("id").get<std::string>();
      const auto c = classification_from_string(row.at("classification").get<std::string>());
      if (!c) format_error("report", "unknown classification in row " + b.id);
      b.classification = *c;
      if (!row.at("objective").is_null()) b.objective = row["objective"].get<double>();
      b.status = row.value("status", std::string());
      b.expected = row.value("expected", nlohmann::json::array());
      b.syntax_repairs = row.at("repairs").at("syntax").get<int>();
      b.cf_repairs = row.at("repairs").at("counterfactual").get<int>();
      b.transcript_units = row.value("transcript_units", std::size_t{0});
      b.wall_ms = row.value("wall_ms", 0.0);
      r.rows.push_back(std::move(b));
    }
    r.cancelled = doc.value("cancelled", false);
  } catch (const nlohmann::json::exception& e) {
    format_error("report", e.what());
  }
  r.aggregates = Aggregates::from_rows(r.rows);
  if (doc.contains("aggregates")) {
    const auto& a = doc["aggregates"];
    if (a.value("total", std::size_t{0}) != r.aggregates.total ||
        a.value("success", std::size_t{0}) != r.aggregates.success) {
      format_error("report", "aggregates disagree with rows");
    }
  }
  return r;
}

std::string BenchReport::to_table() const {
  const auto expected_text = [](const nlohmann::json& e) {
    std::string out;
    for (const auto& v : e) {
      if (!out.empty()) out += ", ";
      out += v.is_number() ? format_number(v.get<double>()) : v.get<std::string>();
    }
    return out.empty() ? std::string("-") : out;
  };
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    body.push_back({r.id, std::string(to_string(r.classification)),
                    r.objective ? format_number(*r.objective) : (r.status.empty() ? "-" : r.status),
                    expected_text(r.expected), std::to_string(r.syntax_repairs),
                    std::to_string(r.cf_repairs), std::to_string(r.transcript_units)});
  }
  std::string out = aligned({"problem", "classification", "result", "expected", "syntax repairs",
                             "cf repairs", "units"},
                            body);
  out += "\n";
  const Aggregates& a = aggregates;
  out += aligned({"N", "SR", "MFFR", "IEFR", "WrongAnswer"},
                 {{std::to_string(a.total), percent(a.sr()), percent(a.mffr()), percent(a.iefr()),
                   percent(a.wrong_answer_rate())}});
  if (cancelled) out += "(cancelled before all problems ran)\n";
  return out;
}

// ---------------------------------------------------------------------------

BenchReport run_benchmark(const std::vector<ProblemInput>& problems, const RunConfig& config,
                          ChatClient& client, const BenchOptions& opts) {
  std::vector<std::optional<BenchRow>> slots(problems.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> skipped{false};
  std::mutex callback_mu;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= problems.size()) return;
      if (opts.cancel != nullptr && opts.cancel->load()) {
        skipped = true;
        continue;
      }
      const auto started = std::chrono::steady_clock::now();
      RunOutcome outcome = solve_problem(problems[i], config, client);
      const auto elapsed = std::chrono::steady_clock::now() - started;

      BenchRow row;
      row.id = problems[i].id;
      row.classification = outcome.classification;
      if (outcome.final) {
        row.objective = outcome.final->objective;
        row.status = std::string(to_string(outcome.final->status));
      }
      if (!problems[i].instances.empty()) row.expected = problems[i].instances.front().expected;
      row.syntax_repairs = outcome.syntax_repairs;
      row.cf_repairs = outcome.cf_repairs;
      row.transcript_units = count_transcript_units(outcome.transcript).total;
      row.wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
      slots[i] = std::move(row);
      if (opts.on_complete) {
        std::lock_guard lock(callback_mu);
        opts.on_complete(problems[i], outcome);
      }
    }
  };

  const std::size_t n = std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(problems.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  BenchReport report;
  for (auto& s : slots)
    if (s) report.rows.push_back(std::move(*s));
  std::sort(report.rows.begin(), report.rows.end(),
            [](const BenchRow& a, const BenchRow& b) { return a.id < b.id; });
  report.aggregates = Aggregates::from_rows(report.rows);
  report.cancelled = skipped.load();
  return report;
}

void validate_temperatures(const std::vector<double>& temps) {
  if (temps.empty()) throw Error(ErrorCode::kInvalidArgument, "no temperatures given");
  for (std::size_t i = 0; i < temps.size(); ++i) {
    if (!std::isfinite(temps[i]) || temps[i] < 0.0 || temps[i] > 2.0) {
      throw Error(ErrorCode::kInvalidArgument, "temperatures must lie in [0, 2]");
    }
    if (i > 0 && temps[i] <= temps[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "temperatures must be strictly increasing");
    }
  }
}

SweepResult sweep_temperature(const std::vector<ProblemInput>& problems,
                              const std::vector<double>& temps, const RunConfig& config,
                              const std::function<ChatClient&(double)>& client_for,
                              const BenchOptions& opts) {
  validate_temperatures(temps);
  SweepResult out;
  for (double t : temps) {
    RunConfig c = config;
    c.temperature = t;
    out.reports.emplace_back(t, run_benchmark(problems, c, client_for(t), opts));
  }
  return out;
}

nlohmann::ordered_json SweepResult::to_json(bool include_timing) const {
  ojson j = ojson::array();
  for (const auto& [t, r] : reports) {
    j.push_back({{"temperature", t}, {"report", r.to_json(include_timing)}});
  }
  return {{"sweep", j}};
}

std::string SweepResult::to_table() const {
  std::vector<std::vector<std::string>> body;
  for (const auto& [t, r] : reports) {
    const Aggregates& a = r.aggregates;
    body.push_back({temp_label(t), std::to_string(a.total), percent(a.sr()), percent(a.mffr()),
                    percent(a.iefr()), percent(a.wrong_answer_rate())});
  }
  return aligned({"temperature", "N", "SR", "MFFR", "IEFR", "WrongAnswer"}, body);
}

std::filesystem::path sweep_fixture_dir(const std::filesystem::path& fixtures, double temp) {
  const auto dir = fixtures / ("temp-" + temp_label(temp));
  std::error_code ec;
  return std::filesystem::is_directory(dir, ec) ? dir : fixtures;
}

}  // namespace ormind
