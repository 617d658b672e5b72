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

#include <filesystem>
#include <fstream>
#include <random>

#include "ormind/bench.hpp"
#include "ormind/file_util.hpp"
#include "pipeline_support.hpp"
#include "test_support.hpp"

using namespace ormind;
using namespace ormind::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int n = 0;
    path = fs::temp_directory_path() /
           ("ormind_bench_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Serves another problem's fixtures under a copied id ("pharmacy_3" -> "pharmacy").
class AliasClient : public ChatClient {
 public:
  explicit AliasClient(ChatClient& inner) : inner_(inner) {}
  ChatResponse complete(const ChatRequest& request) override {
    ChatRequest r = request;
    const auto cut = r.key.problem_id.rfind('_');
    if (cut != std::string::npos && std::isdigit(static_cast<unsigned char>(r.key.problem_id.back())))
      r.key.problem_id = r.key.problem_id.substr(0, cut);
    return inner_.complete(r);
  }

 private:
  ChatClient& inner_;
};

ProblemInput renamed(ProblemInput p, const std::string& id) {
  p.id = id;
  return p;
}

std::vector<ProblemInput> corpus() { return load_problems(corpus_dir()).problems; }

}  // namespace

TEST_CASE("loading the corpus directory") {
  const LoadResult r = load_problems(corpus_dir());
  CHECK(r.errors.empty());
  REQUIRE(r.problems.size() == 12);
  CHECK(std::is_sorted(r.problems.begin(), r.problems.end(),
                       [](const auto& a, const auto& b) { return a.id < b.id; }));

  const auto fishery = std::find_if(r.problems.begin(), r.problems.end(),
                                    [](const auto& p) { return p.id == "fishery"; });
  REQUIRE(fishery != r.problems.end());
  REQUIRE(fishery->instances.size() == 1);
  CHECK(fishery->instances[0].expected == std::vector<nlohmann::json>{3000.0});
  CHECK(fishery->instances[0].input.at("MaxBudget") == 1000);

  const auto aircraft = std::find_if(r.problems.begin(), r.problems.end(),
                                     [](const auto& p) { return p.id == "aircraft"; });
  REQUIRE(aircraft->parameters.size() == 6);
  CHECK(aircraft->parameters[0].symbol == "TotalAircraft");
  CHECK(aircraft->parameters[4].shape == nlohmann::json::array({"TotalAircraft", "TotalRoutes"}));
  CHECK(aircraft->instances[0].expected == std::vector<nlohmann::json>{"Infeasible"});
}

TEST_CASE("malformed files are reported, not fatal") {
  TempDir dir;
  atomic_write(dir.path / "good.json", R"({"description": "d", "instances": [{"input": {}, "output": [1]}]})");
  atomic_write(dir.path / "truncated.json", R"({"description": "d", "instan)");
  atomic_write(dir.path / "notes.txt", "ignored");
  const LoadResult r = load_problems(dir.path);
  REQUIRE(r.problems.size() == 1);
  CHECK(r.problems[0].id == "good");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].path.find("truncated.json") != std::string::npos);
}

TEST_CASE("dataset shapes") {
  // Instance keys next to "output", and a scalar output.
  auto p = problem_from_json(nlohmann::json::parse(
                                 R"({"description": "d", "data": [{"A": 1, "B": [1, 2], "output": 5}]})"),
                             "x");
  CHECK(p.id == "x");
  CHECK(p.instances[0].input.size() == 2);
  CHECK(p.instances[0].expected == std::vector<nlohmann::json>{5});

  p = problem_from_json(nlohmann::json::parse(
                            R"({"id": "y", "description": "d", "input": {"A": 2}, "output": ["infeasible"]})"),
                        "x");
  CHECK(p.id == "y");
  CHECK(p.instances[0].expected == std::vector<nlohmann::json>{"Infeasible"});

  for (const char* bad :
       {R"({"instances": [{"input": {}}]})", R"({"description": "", "instances": [{}]})",
        R"({"description": "d"})", R"({"description": "d", "instances": [{"output": ["maybe"]}]})",
        R"({"description": "d", "instances": [3]})", R"([1])"}) {
    CAPTURE(bad);
    try {
      problem_from_json(nlohmann::json::parse(bad), "x");
      FAIL("expected FormatError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kFormatError);
    }
  }
}

TEST_CASE("combined files and empty datasets") {
  TempDir dir;
  const auto file = dir.path / "all.json";
  atomic_write(file, R"([{"id": "b", "description": "d", "instances": [{"input": {}, "output": [1]}]},
                         {"description": "d", "instances": [{"input": {}, "output": [2]}]},
                         {"id": "b", "description": "dup", "instances": [{"input": {}}]}])");
  const LoadResult r = load_problems(file);
  REQUIRE(r.problems.size() == 2);
  CHECK(r.problems[0].id == "all-1");
  CHECK(r.problems[1].id == "b");
  CHECK(r.errors.size() == 1);

  TempDir empty;
  for (const auto& path : {empty.path, empty.path / "missing"}) {
    try {
      load_problems(path);
      FAIL("expected EmptyDataset");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyDataset);
    }
  }
}

TEST_CASE("corpus benchmark reproduces the authored classification mix") {
  ReplayClient client(corpus_dir() / "fixtures");
  const BenchReport r = run_benchmark(corpus(), RunConfig{}, client);
  const Aggregates& a = r.aggregates;
  CHECK(a.total == 12);
  CHECK(a.success == 8);
  CHECK(a.formulation_failure == 2);
  CHECK(a.execution_failure == 1);
  CHECK(a.wrong_answer == 1);
  CHECK(a.sr() == 8.0 / 12.0);
  CHECK(a.mffr() == 2.0 / 12.0);
  CHECK(a.iefr() == 1.0 / 12.0);
  CHECK(a.success + a.formulation_failure + a.execution_failure + a.wrong_answer == a.total);
  CHECK(a.sr() + a.mffr() + a.iefr() + a.wrong_answer_rate() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(r.cancelled);
  CHECK(Aggregates::from_rows(r.rows) == a);
}

TEST_CASE("benchmark output is independent of worker count") {
  ReplayClient client(corpus_dir() / "fixtures");
  BenchOptions one;
  one.workers = 1;
  BenchOptions many;
  many.workers = 8;
  const auto a = run_benchmark(corpus(), RunConfig{}, client, one).to_json(false);
  const auto b = run_benchmark(corpus(), RunConfig{}, client, many).to_json(false);
  CHECK(a == b);
}

TEST_CASE("homogeneous and mixed sets") {
  ReplayClient replay(corpus_dir() / "fixtures");
  AliasClient client(replay);
  const ProblemInput pharmacy = corpus_problem("pharmacy");

  std::vector<ProblemInput> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(renamed(pharmacy, "pharmacy_" + std::to_string(i)));
  const BenchReport all = run_benchmark(ten, RunConfig{}, client);
  CHECK(all.aggregates.sr() == 1.0);
  CHECK(all.aggregates.mffr() == 0.0);
  CHECK(all.aggregates.iefr() == 0.0);

  std::vector<ProblemInput> mixed(ten.begin(), ten.begin() + 8);
  mixed.push_back(corpus_problem("fault_encoder"));
  mixed.push_back(corpus_problem("fault_unbounded"));
  const BenchReport r = run_benchmark(mixed, RunConfig{}, client);
  CHECK(r.aggregates.sr() == doctest::Approx(0.8));
  CHECK(r.aggregates.mffr() == doctest::Approx(0.1));
  CHECK(r.aggregates.iefr() == doctest::Approx(0.1));
  const std::string table = r.to_table();
  CHECK(table.find("80.0% | 10.0% | 10.0%") != std::string::npos);

  // Rows sorted by id in both formats.
  const auto j = r.to_json();
  std::vector<std::string> ids;
  for (const auto& row : j["rows"]) ids.push_back(row["id"]);
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(table.find("fault_encoder") < table.find("fault_unbounded"));
  CHECK(table.find("fault_unbounded") < table.find("pharmacy_0"));

  // JSON round trip.
  const BenchReport back = BenchReport::from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.aggregates == r.aggregates);
  CHECK(back.to_json() == j);
}

TEST_CASE("report JSON with inconsistent aggregates is rejected") {
  BenchReport r;
  r.rows.resize(2);
  r.rows[0].id = "a";
  r.rows[0].classification = Classification::kSuccess;
  r.rows[1].id = "b";
  r.rows[1].classification = Classification::kWrongAnswer;
  r.aggregates = Aggregates::from_rows(r.rows);
  auto j = nlohmann::json::parse(r.to_json().dump());
  j["aggregates"]["success"] = 2;
  CHECK_THROWS_AS(BenchReport::from_json(j), Error);
  CHECK_THROWS_AS(BenchReport::from_json(nlohmann::json::parse("{}")), Error);
}

TEST_CASE("aggregates are recomputable from rows") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<BenchRow> rows(1 + rng() % 40);
    std::size_t counts[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto k = rng() % 4;
      rows[i].id = "p" + std::to_string(i);
      rows[i].classification = static_cast<Classification>(k);
      ++counts[k];
    }
    const Aggregates a = Aggregates::from_rows(rows);
    CHECK(a.success == counts[0]);
    CHECK(a.wrong_answer == counts[1]);
    CHECK(a.formulation_failure == counts[2]);
    CHECK(a.execution_failure == counts[3]);
    CHECK(a.success + a.wrong_answer + a.formulation_failure + a.execution_failure == rows.size());
    CHECK(a.sr() + a.mffr() + a.iefr() + a.wrong_answer_rate() == doctest::Approx(1.0));
  }
}

TEST_CASE("cancellation skips problems that have not started") {
  ReplayClient client(corpus_dir() / "fixtures");
  std::atomic<bool> cancel{true};
  BenchOptions opts;
  opts.cancel = &cancel;
  BenchReport r = run_benchmark(corpus(), RunConfig{}, client, opts);
  CHECK(r.rows.empty());
  CHECK(r.cancelled);

  cancel = false;
  opts.workers = 1;
  std::vector<std::string> done;
  opts.on_complete = [&](const ProblemInput& p, const RunOutcome&) {
    done.push_back(p.id);
    if (done.size() == 3) cancel = true;
  };
  r = run_benchmark(corpus(), RunConfig{}, client, opts);
  CHECK(r.rows.size() == 3);
  CHECK(done.size() == 3);
  CHECK(r.cancelled);
  CHECK(r.to_table().find("cancelled") != std::string::npos);
}

TEST_CASE("temperature sweeps") {
  CHECK_THROWS_AS(validate_temperatures({0.7, 0.0}), Error);
  CHECK_THROWS_AS(validate_temperatures({0.3, 0.3}), Error);
  CHECK_THROWS_AS(validate_temperatures({}), Error);
  CHECK_THROWS_AS(validate_temperatures({-0.1}), Error);
  CHECK_NOTHROW(validate_temperatures({0.0, 0.3, 0.7}));

  const auto problems = corpus();
  ReplayClient client(corpus_dir() / "fixtures");
  const SweepResult single = sweep_temperature(
      problems, {0.0}, RunConfig{}, [&](double) -> ChatClient& { return client; });
  REQUIRE(single.reports.size() == 1);
  CHECK(single.reports[0].second.to_json(false) ==
        run_benchmark(problems, RunConfig{}, client).to_json(false));

  // A temp-0.7 directory with different responses routes only that temperature.
  TempDir fixtures;
  fs::copy(corpus_dir() / "fixtures", fixtures.path);
  fs::create_directories(fixtures.path / "temp-0.7");
  fs::copy(corpus_dir() / "fixtures", fixtures.path / "temp-0.7");
  FixtureStore broken;
  broken.put("SemanticEncoder/0", "prose");
  broken.put("SemanticEncoder/1", "prose");
  broken.save(fixture_path(fixtures.path / "temp-0.7", "pharmacy"));
  CHECK(sweep_fixture_dir(fixtures.path, 0.7) == fixtures.path / "temp-0.7");
  CHECK(sweep_fixture_dir(fixtures.path, 0.0) == fixtures.path);

  std::map<double, std::unique_ptr<ReplayClient>> clients;
  std::vector<double> temps_seen;
  const SweepResult two = sweep_temperature(
      problems, {0.0, 0.7}, RunConfig{}, [&](double t) -> ChatClient& {
        temps_seen.push_back(t);
        clients[t] = std::make_unique<ReplayClient>(sweep_fixture_dir(fixtures.path, t));
        return *clients[t];
      });
  REQUIRE(two.reports.size() == 2);
  CHECK(two.reports[0].first == 0.0);
  CHECK(two.reports[1].first == 0.7);
  CHECK(two.reports[0].second.aggregates.success == 8);
  CHECK(two.reports[1].second.aggregates.success == 7);
  CHECK(two.reports[1].second.aggregates.formulation_failure == 3);
  CHECK(temps_seen == std::vector<double>{0.0, 0.7});
  const std::string table = two.to_table();
  CHECK(table.find("| 0.7 ") != std::string::npos);
  CHECK(two.to_json()["sweep"][1]["temperature"] == 0.7);
}

TEST_CASE("sweep passes the temperature to every request") {
  std::vector<double> temps;
  std::mutex mu;
  ReplayClient replay(corpus_dir() / "fixtures");
  FnClient client([&](const ChatRequest& r) {
    {
      std::lock_guard lock(mu);
      temps.push_back(r.temperature);
    }
    return replay.complete(r).content;
  });
  BenchOptions opts;
  opts.workers = 1;
  sweep_temperature({corpus_problem("fishery")}, {0.2, 0.9}, RunConfig{},
                    [&](double) -> ChatClient& { return client; }, opts);
  REQUIRE(temps.size() == 8);
  CHECK(temps.front() == 0.2);
  CHECK(temps.back() == 0.9);
}
