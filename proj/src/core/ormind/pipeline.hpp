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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/counterfactual.hpp"
#include "ormind/llm_client.hpp"
#include "ormind/model_ir.hpp"
#include "ormind/solver.hpp"

namespace ormind {

// Stage labels as they appear in fixture keys, the memory pool and traces.
namespace stage {
inline constexpr const char* kSemanticEncoder = "SemanticEncoder";
inline constexpr const char* kFormalization = "Formalization";
inline constexpr const char* kExecutiveCompiler = "ExecutiveCompiler";
inline constexpr const char* kSupervisorForward = "SupervisorForward";
inline constexpr const char* kSupervisorBackward = "SupervisorBackward";
inline constexpr const char* kExecute = "Execute";
inline constexpr const char* kReasonerError = "ReasonerError";
inline constexpr const char* kReasonerCounterfactual = "ReasonerCounterfactual";
// LLM pass of the counterfactual reasoner (fixture key only).
inline constexpr const char* kReasonerLlm = "Reasoner";
}  // namespace stage

struct ParameterInfo {
  std::string symbol;
  std::string definition;
  nlohmann::json shape = nlohmann::json::array();
};

struct ProblemInstance {
  ParameterMap input;
  // Numbers or the string "Infeasible".
  std::vector<nlohmann::json> expected;
};

struct ProblemInput {
  std::string id;
  std::string description;
  std::vector<ParameterInfo> parameters;
  std::vector<ProblemInstance> instances;
};

struct ParameterEntry {
  std::string type;
  std::string definition;
};
using ParameterSet = std::map<std::string, ParameterEntry>;

struct MathModelDraft {
  std::string variables_text;
  std::string constraints_text;
  std::string objective_text;
};

struct PoolEntry {
  std::size_t timestamp = 0;  // logical, 1-based insertion order
  std::string agent;
  std::string content;
};

// Append-only record of stage outputs for one run.
class MemoryPool {
 public:
  const PoolEntry& append(std::string agent, std::string content);
  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const PoolEntry* latest(std::string_view agent) const;
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<PoolEntry> entries_;
};

enum class Classification { kSuccess, kWrongAnswer, kFormulationFailure, kExecutionFailure };

std::string_view to_string(Classification c);
std::optional<Classification> classification_from_string(std::string_view s);

struct RunConfig {
  int max_syntax_repairs = 1;
  int max_cf_repairs = 1;
  double temperature = 0.0;
  std::string model_id = "gpt-3.5-turbo";
  SolverOptions solver;
  bool llm_reasoner_enabled = false;

  nlohmann::ordered_json to_json() const;
};

struct RunOutcome {
  Classification classification = Classification::kFormulationFailure;
  std::optional<SolveResult> final;
  std::optional<ModelIR> model;
  std::optional<CounterfactualReport> final_report;
  // Final model executed on every instance, in instance order.
  std::vector<SolveResult> instance_results;
  int syntax_repairs = 0;
  int cf_repairs = 0;
  std::vector<TranscriptEntry> transcript;
  nlohmann::ordered_json trace;

  std::string trace_text() const { return trace.dump(2) + "\n"; }
  // Stage labels of the trace events, in order.
  std::vector<std::string> stage_sequence() const;
};

// |actual - expected| <= max(1e-2, 1e-4 * |expected|).
double answer_tolerance(double expected);

// Compares one instance's result with its expected list. A single element is
// the objective (or "Infeasible"); longer lists continue with the variables
// in declared order.
bool matches_expected(const SolveResult& result, const std::vector<nlohmann::json>& expected,
                      const ModelIR* model);

struct ClassifyEvidence {
  bool model_produced = false;
  std::optional<SolveResult> final;
  bool report_valid = true;
};

Classification classify(const ClassifyEvidence& evidence,
                        const std::vector<nlohmann::json>& expected, const ModelIR* model);

// Runs the full workflow on one problem. Never throws for run-level
// failures; they end up in the classification and the trace.
RunOutcome solve_problem(const ProblemInput& problem, const RunConfig& config,
                         ChatClient& client);

// Parses stage outputs (exposed for tests).
ParameterSet parse_parameter_set(const std::string& text);
MathModelDraft parse_math_model_draft(const std::string& text);
// Splits the draft constraint text at top-level commas, semicolons and
// newlines.
std::vector<std::string> split_draft_constraints(const std::string& text);

// Executes a model document against one instance (parameter binding and
// solve).
struct ExecuteResult {
  std::optional<ModelIR> model;
  std::optional<Error> parse_error;
  std::optional<SolveResult> result;
};
ExecuteResult execute_document(const std::string& document, const ParameterMap& input,
                               const SolverOptions& opts);

// State of one run: pool, trace events and per-stage call counters. Every
// stage method appends exactly one pool entry and one trace event.
class PipelineRun {
 public:
  PipelineRun(const ProblemInput& problem, const RunConfig& config, ChatClient& client);

  // Throw StageParseError after the reprompt, or the client's error.
  ParameterSet semantic_encoder();
  MathModelDraft formalization(const ParameterSet& params);
  std::string executive_compiler(const MathModelDraft& draft);
  std::string supervisor_forward(const ParameterSet& params, const MathModelDraft& draft,
                                 const std::string& candidate);
  std::string supervisor_backward(const FeedbackDoc& feedback, const std::string& previous);

  ExecuteResult execute(const std::string& document, const std::string& source);
  // True when the result needs the syntax-repair branch.
  bool execute_failed(const ExecuteResult& r) const;
  FeedbackDoc reasoner_error(const ExecuteResult& r);
  // Nullopt when no modification is needed. `report` receives the
  // deterministic report when the result is Optimal.
  std::optional<FeedbackDoc> reasoner_counterfactual(const ExecuteResult& r,
                                                     const MathModelDraft& draft,
                                                     std::optional<CounterfactualReport>& report,
                                                     bool revision_rejected = false);

  const MemoryPool& pool() const { return pool_; }
  const nlohmann::ordered_json& events() const { return events_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  // Records a failure that ended the run early.
  void record_abort(const std::string& stage_label, const Error& e);
  const nlohmann::ordered_json& abort_info() const { return abort_; }

 private:
  std::string call(const std::string& stage_label, std::vector<ChatMessage> messages,
                   nlohmann::ordered_json& event);
  template <typename T, typename Parse>
  T call_json(const std::string& stage_label, const std::string& prompt, Parse parse,
              nlohmann::ordered_json& event);
  nlohmann::ordered_json& push_event(const std::string& stage_label);
  std::string attention() const;
  std::string problem_text() const;

  const ProblemInput& problem_;
  const RunConfig& config_;
  ChatClient& client_;
  MemoryPool pool_;
  nlohmann::ordered_json events_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json abort_;
  std::vector<TranscriptEntry> transcript_;
  std::map<std::string, int> attempts_;
};

}  // namespace ormind
