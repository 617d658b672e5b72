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

#include "ormind/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>

#include <fmt/format.h>

#include "ormind/prompts.hpp"

namespace ormind {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kFormatReminder =
    "Your previous answer could not be read as the requested JSON object. "
    "Reply again with the JSON object only, no prose and no code fences.";

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void stage_parse_error(const std::string& stage_label, const std::string& why) {
  throw Error(ErrorCode::kStageParseError, stage_label + " output is malformed: " + why,
              stage_label);
}

nlohmann::json parse_object(const std::string& stage_label, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(extract_document(text));
  } catch (const nlohmann::json::exception& e) {
    stage_parse_error(stage_label, e.what());
  }
  if (!doc.is_object()) stage_parse_error(stage_label, "expected a JSON object");
  return doc;
}

std::string as_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += '\n';
      out += as_text(item);
    }
    return out;
  }
  return v.dump();
}

ojson error_json(const Error& e) {
  ojson j;
  j["code"] = std::string(to_string(e.code()));
  j["section"] = e.section();
  j["subject"] = e.subject();
  j["message"] = e.what();
  return j;
}

std::optional<double> expected_number(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = trim(v.get<std::string>());
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

bool expects_infeasible(const nlohmann::json& v) {
  return v.is_string() && lower(trim(v.get<std::string>())) == "infeasible";
}

bool numeric_expected(const std::vector<nlohmann::json>& expected) {
  return !expected.empty() && expected_number(expected.front()).has_value();
}

}  // namespace

// ---------------------------------------------------------------------------
// Memory pool

const PoolEntry& MemoryPool::append(std::string agent, std::string content) {
  entries_.push_back({entries_.size() + 1, std::move(agent), std::move(content)});
  return entries_.back();
}

const PoolEntry* MemoryPool::latest(std::string_view agent) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->agent == agent) return &*it;
  }
  return nullptr;
}

nlohmann::ordered_json MemoryPool::to_json() const {
  ojson out = ojson::array();
  for (const auto& e : entries_) {
    out.push_back({{"timestamp", e.timestamp}, {"agent", e.agent}, {"content", e.content}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kSuccess: return "Success";
    case Classification::kWrongAnswer: return "WrongAnswer";
    case Classification::kFormulationFailure: return "FormulationFailure";
    case Classification::kExecutionFailure: return "ExecutionFailure";
  }
  return "FormulationFailure";
}

std::optional<Classification> classification_from_string(std::string_view s) {
  for (auto c : {Classification::kSuccess, Classification::kWrongAnswer,
                 Classification::kFormulationFailure, Classification::kExecutionFailure}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

nlohmann::ordered_json RunConfig::to_json() const {
  ojson j;
  j["model_id"] = model_id;
  j["temperature"] = temperature;
  j["max_syntax_repairs"] = max_syntax_repairs;
  j["max_cf_repairs"] = max_cf_repairs;
  j["llm_reasoner_enabled"] = llm_reasoner_enabled;
  j["solver"] = {{"pivot_limit", solver.pivot_limit},
                 {"node_limit", solver.node_limit},
                 {"feasibility_eps", solver.feasibility_eps},
                 {"integrality_tol", solver.integrality_tol},
                 {"time_limit_seconds", solver.time_limit_seconds}};
  return j;
}

std::vector<std::string> RunOutcome::stage_sequence() const {
  std::vector<std::string> out;
  if (trace.contains("events")) {
    for (const auto& e : trace["events"]) out.push_back(e.at("stage").get<std::string>());
  }
  return out;
}

double answer_tolerance(double expected) { return std::max(1e-2, 1e-4 * std::abs(expected)); }

bool matches_expected(const SolveResult& result, const std::vector<nlohmann::json>& expected,
                      const ModelIR* model) {
  if (expected.empty()) return result.optimal();
  if (expects_infeasible(expected.front())) return result.status == SolveStatus::kInfeasible;
  const auto want = expected_number(expected.front());
  if (!want || !result.optimal()) return false;
  if (std::abs(*result.objective - *want) > answer_tolerance(*want)) return false;
  if (expected.size() == 1) return true;
  if (model == nullptr || expected.size() - 1 > model->variables.size()) return false;
  for (std::size_t k = 1; k < expected.size(); ++k) {
    const auto v = expected_number(expected[k]);
    if (!v) return false;
    const double got = result.assignment->at(model->variables[k - 1].name);
    if (std::abs(got - *v) > answer_tolerance(*v)) return false;
  }
  return true;
}

Classification classify(const ClassifyEvidence& evidence,
                        const std::vector<nlohmann::json>& expected, const ModelIR* model) {
  if (!evidence.model_produced || !evidence.final) return Classification::kFormulationFailure;
  const SolveStatus st = evidence.final->status;
  if (st == SolveStatus::kError || st == SolveStatus::kUnbounded) {
    return Classification::kExecutionFailure;
  }
  if (matches_expected(*evidence.final, expected, model) && evidence.report_valid) {
    return Classification::kSuccess;
  }
  return Classification::kWrongAnswer;
}

// ---------------------------------------------------------------------------
// Stage output parsing

ParameterSet parse_parameter_set(const std::string& text) {
  const nlohmann::json doc = parse_object(stage::kSemanticEncoder, text);
  ParameterSet out;
  for (const auto& [name, v] : doc.items()) {
    ParameterEntry e;
    if (v.is_object()) {
      for (const auto& [k, field] : v.items()) {
        const std::string key = lower(k);
        if (key == "type") e.type = as_text(field);
        if (key == "definition") e.definition = as_text(field);
      }
    } else {
      e.definition = as_text(v);
    }
    out[name] = std::move(e);
  }
  if (out.empty()) stage_parse_error(stage::kSemanticEncoder, "no parameters extracted");
  return out;
}

MathModelDraft parse_math_model_draft(const std::string& text) {
  const nlohmann::json doc = parse_object(stage::kFormalization, text);
  std::optional<std::string> vars, cons, obj;
  for (const auto& [k, v] : doc.items()) {
    const std::string key = lower(k);
    if (key == "variables") vars = as_text(v);
    if (key == "constraints") cons = as_text(v);
    if (key == "objective") obj = as_text(v);
  }
  if (!vars || !cons || !obj) {
    stage_parse_error(stage::kFormalization, "VARIABLES, CONSTRAINTS and OBJECTIVE are required");
  }
  return {*vars, *cons, *obj};
}

std::vector<std::string> split_draft_constraints(const std::string& text) {
  static const std::regex enumerator(R"(^(\d+[.)]|[-*•])\s*)");
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  auto flush = [&] {
    std::string item = trim(current);
    current.clear();
    item = std::regex_replace(item, enumerator, "");
    if (!item.empty()) out.push_back(item);
  };
  for (char c : text) {
    if (c == '(' || c == '[') ++depth;
    if ((c == ')' || c == ']') && depth > 0) --depth;
    if (depth == 0 && (c == ',' || c == ';' || c == '\n')) {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

ExecuteResult execute_document(const std::string& document, const ParameterMap& input,
                               const SolverOptions& opts) {
  ExecuteResult out;
  try {
    out.model = parse_model_document(document, &input);
  } catch (const Error& e) {
    out.parse_error = e;
    return out;
  }
  out.result = solve_milp(*out.model, opts);
  return out;
}

// ---------------------------------------------------------------------------
// PipelineRun

PipelineRun::PipelineRun(const ProblemInput& problem, const RunConfig& config,
                         ChatClient& client)
    : problem_(problem), config_(config), client_(client) {}

nlohmann::ordered_json& PipelineRun::push_event(const std::string& stage_label) {
  ojson e;
  e["seq"] = pool_.size() + 1;
  e["stage"] = stage_label;
  events_.push_back(std::move(e));
  return events_.back();
}

std::string PipelineRun::problem_text() const {
  std::string out = problem_.description;
  if (!problem_.parameters.empty()) {
    out += "\nParameters:";
    for (const auto& p : problem_.parameters) {
      out += "\n- " + p.symbol;
      if (p.shape.is_array() && !p.shape.empty()) out += " (shape " + p.shape.dump() + ")";
      out += ": " + p.definition;
    }
  }
  return out;
}

std::string PipelineRun::attention() const {
  if (problem_.instances.empty() || problem_.instances.front().input.empty()) {
    return "All numbers come from the description; write them into the expressions directly.";
  }
  std::string names;
  for (const auto& [name, value] : problem_.instances.front().input) {
    if (!names.empty()) names += ", ";
    names += name;
  }
  return "Input data available by name: " + names +
         ". Reference these names in expressions instead of copying their values.";
}

std::string PipelineRun::call(const std::string& stage_label, std::vector<ChatMessage> messages,
                              nlohmann::ordered_json& event) {
  ChatRequest req;
  req.model_id = config_.model_id;
  req.temperature = config_.temperature;
  req.messages = std::move(messages);
  req.key = {stage_label, problem_.id, attempts_[stage_label]++};

  std::string prompt;
  for (const auto& m : req.messages) {
    if (!prompt.empty()) prompt += "\n\n";
    prompt += m.content;
  }
  ojson c;
  c["key"] = req.key.slot();
  c["prompt"] = req.messages.back().content;
  try {
    ChatResponse r = client_.complete(req);
    c["response"] = r.content;
    c["retries"] = r.retries;
    if (r.usage) {
      c["usage"] = {{"prompt_units", r.usage->prompt_units},
                    {"completion_units", r.usage->completion_units}};
    }
    event["calls"].push_back(std::move(c));
    transcript_.push_back({stage_label, prompt, r.content, r.usage});
    return r.content;
  } catch (const Error& e) {
    c["error"] = error_json(e);
    event["calls"].push_back(std::move(c));
    throw;
  }
}

template <typename T, typename Parse>
T PipelineRun::call_json(const std::string& stage_label, const std::string& prompt, Parse parse,
                         nlohmann::ordered_json& event) {
  std::vector<ChatMessage> messages = {{Role::kUser, prompt}};
  const std::string first = call(stage_label, messages, event);
  try {
    return parse(first);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kStageParseError) throw;
    event["reprompt_reason"] = e.what();
  }
  messages.push_back({Role::kAssistant, first});
  messages.push_back({Role::kUser, kFormatReminder});
  const std::string second = call(stage_label, messages, event);
  return parse(second);
}

namespace {

// Keeps the one-entry-per-stage rule when a stage throws.
struct StageGuard {
  MemoryPool& pool;
  ojson& event;
  std::string stage_label;
  bool done = false;

  void finish(std::string content) {
    pool.append(stage_label, std::move(content));
    done = true;
  }
  ~StageGuard() {
    if (!done) {
      std::string why = event.contains("error") ? event["error"].value("message", "") : "";
      pool.append(stage_label, "ERROR: " + why);
    }
  }
};

}  // namespace

ParameterSet PipelineRun::semantic_encoder() {
  ojson& event = push_event(stage::kSemanticEncoder);
  event["calls"] = ojson::array();
  StageGuard guard{pool_, event, stage::kSemanticEncoder};
  const std::string prompt = interpolate(
      assets::semantic_encoder, {{"problem_example", problem_text()}, {"comment_text", "None"}});
  try {
    ParameterSet params = call_json<ParameterSet>(stage::kSemanticEncoder, prompt,
                                                  parse_parameter_set, event);
    ojson out = ojson::object();
    for (const auto& [name, e] : params) {
      out[name] = {{"Type", e.type}, {"Definition", e.definition}};
    }
    event["output"] = out;
    guard.finish(out.dump());
    return params;
  } catch (const Error& e) {
    event["error"] = error_json(e);
    throw;
  }
}

MathModelDraft PipelineRun::formalization(const ParameterSet& params) {
  ojson& event = push_event(stage::kFormalization);
  event["calls"] = ojson::array();
  StageGuard guard{pool_, event, stage::kFormalization};
  ojson theta = ojson::object();
  for (const auto& [name, e] : params) {
    theta[name] = {{"Type", e.type}, {"Definition", e.definition}};
  }
  const std::string prompt =
      interpolate(assets::formalization,
                  {{"problem_description", problem_text()}, {"comments_text", theta.dump(4)}});
  try {
    MathModelDraft draft = call_json<MathModelDraft>(stage::kFormalization, prompt,
                                                     parse_math_model_draft, event);
    ojson out;
    out["VARIABLES"] = draft.variables_text;
    out["CONSTRAINTS"] = draft.constraints_text;
    out["OBJECTIVE"] = draft.objective_text;
    event["output"] = out;
    guard.finish(out.dump());
    return draft;
  } catch (const Error& e) {
    event["error"] = error_json(e);
    throw;
  }
}

namespace {

std::string draft_json(const MathModelDraft& draft) {
  ojson out;
  out["VARIABLES"] = draft.variables_text;
  out["CONSTRAINTS"] = draft.constraints_text;
  out["OBJECTIVE"] = draft.objective_text;
  return out.dump(4);
}

}  // namespace

std::string PipelineRun::executive_compiler(const MathModelDraft& draft) {
  ojson& event = push_event(stage::kExecutiveCompiler);
  event["calls"] = ojson::array();
  StageGuard guard{pool_, event, stage::kExecutiveCompiler};
  const std::string prompt = interpolate(assets::executive_compiler,
                                         {{"problem_description", problem_text()},
                                          {"comments_text", draft_json(draft)},
                                          {"exchange_example", std::string(assets::exchange_example)}});
  try {
    std::string text = call(stage::kExecutiveCompiler, {{Role::kUser, prompt}}, event);
    event["output"] = text;
    guard.finish(text);
    return text;
  } catch (const Error& e) {
    event["error"] = error_json(e);
    throw;
  }
}

std::string PipelineRun::supervisor_forward(const ParameterSet& /*params*/,
                                            const MathModelDraft& /*draft*/,
                                            const std::string& candidate) {
  ojson& event = push_event(stage::kSupervisorForward);
  event["calls"] = ojson::array();
  StageGuard guard{pool_, event, stage::kSupervisorForward};
  const std::string prompt =
      interpolate(assets::supervisor_forward,
                  {{"comment_text", candidate},
                   {"code_example", std::string(assets::exchange_example)},
                   {"attention", attention()}});
  try {
    std::string text = call(stage::kSupervisorForward, {{Role::kUser, prompt}}, event);
    const std::string doc = extract_document(text);
    event["output"] = doc;
    guard.finish(doc);
    return doc;
  } catch (const Error& e) {
    event["error"] = error_json(e);
    throw;
  }
}

std::string PipelineRun::supervisor_backward(const FeedbackDoc& feedback,
                                             const std::string& previous) {
  ojson& event = push_event(stage::kSupervisorBackward);
  event["calls"] = ojson::array();
  event["feedback"] = feedback.to_json();
  StageGuard guard{pool_, event, stage::kSupervisorBackward};
  const std::string prompt =
      interpolate(assets::supervisor_backward,
                  {{"feedback", feedback.text()},
                   {"attention", attention()},
                   {"problem_description", problem_text()},
                   {"previous_code", previous},
                   {"code_example", std::string(assets::exchange_example)}});
  try {
    std::string text = call(stage::kSupervisorBackward, {{Role::kUser, prompt}}, event);
    const std::string doc = extract_document(text);
    event["output"] = doc;
    guard.finish(doc);
    return doc;
  } catch (const Error& e) {
    event["error"] = error_json(e);
    throw;
  }
}

ExecuteResult PipelineRun::execute(const std::string& document, const std::string& source) {
  ojson& event = push_event(stage::kExecute);
  event["source"] = source;
  event["instance"] = 0;
  static const ParameterMap kNoInput;
  const ParameterMap& input =
      problem_.instances.empty() ? kNoInput : problem_.instances.front().input;
  ExecuteResult r = execute_document(document, input, config_.solver);
  if (r.parse_error) {
    event["error"] = error_json(*r.parse_error);
    pool_.append(stage::kExecute, std::string("ERROR: ") + r.parse_error->what());
  } else {
    event["model"] = render_model_document(*r.model);
    const nlohmann::json res = r.result->to_json(false);
    event["result"] = res;
    pool_.append(stage::kExecute, res.dump());
  }
  event["failed"] = execute_failed(r);
  return r;
}

bool PipelineRun::execute_failed(const ExecuteResult& r) const {
  if (r.parse_error || !r.result) return true;
  switch (r.result->status) {
    case SolveStatus::kOptimal: return false;
    case SolveStatus::kError:
    case SolveStatus::kUnbounded: return true;
    case SolveStatus::kInfeasible:
      return !problem_.instances.empty() && numeric_expected(problem_.instances.front().expected);
  }
  return true;
}

FeedbackDoc PipelineRun::reasoner_error(const ExecuteResult& r) {
  ojson& event = push_event(stage::kReasonerError);
  FailureEvidence ev;
  if (r.parse_error) {
    ev.parse_code = r.parse_error->code();
    ev.parse_section = r.parse_error->section();
    ev.parse_message = r.parse_error->what();
  } else {
    ev.result = r.result;
  }
  FeedbackDoc fb = diagnose_failure(ev);
  event["feedback"] = fb.to_json();
  pool_.append(stage::kReasonerError, fb.text());
  return fb;
}

std::optional<FeedbackDoc> PipelineRun::reasoner_counterfactual(
    const ExecuteResult& r, const MathModelDraft& draft,
    std::optional<CounterfactualReport>& report, bool revision_rejected) {
  ojson& event = push_event(stage::kReasonerCounterfactual);
  if (revision_rejected) event["revision_rejected"] = true;
  if (!r.model || !r.result || !r.result->optimal()) {
    const std::string status =
        r.result ? std::string(to_string(r.result->status)) : std::string("no model");
    event["skipped"] = "no optimal solution (" + status + ")";
    pool_.append(stage::kReasonerCounterfactual, "no analysis: " + status);
    report.reset();
    return std::nullopt;
  }

  // Reference model: the executed model plus draft constraints it lacks.
  ModelIR reference = *r.model;
  const std::set<std::string> vars = reference.variable_names();
  static const ParameterMap kNoInput;
  const ParameterMap& input =
      problem_.instances.empty() ? kNoInput : problem_.instances.front().input;
  ojson added = ojson::array();
  ojson skipped = ojson::array();
  int k = 0;
  for (const std::string& item : split_draft_constraints(draft.constraints_text)) {
    ++k;
    Constraint c;
    try {
      c = parse_constraint(item, vars, &input, "draft" + std::to_string(k));
    } catch (const Error& e) {
      skipped.push_back({{"item", item}, {"reason", e.what()}});
      continue;
    }
    const bool duplicate = std::any_of(
        reference.constraints.begin(), reference.constraints.end(), [&](const Constraint& o) {
          return o.lhs == c.lhs && o.sense == c.sense && o.rhs == c.rhs;
        });
    if (duplicate) continue;
    added.push_back({{"name", c.name}, {"expr", render_constraint(c)}});
    reference.constraints.push_back(std::move(c));
  }
  event["draft_constraints_added"] = added;
  event["draft_items_skipped"] = skipped;

  const double eps = config_.solver.feasibility_eps;
  report = analyze(derive_checks(reference, eps), *r.result, eps);
  event["report"] = report->to_json();

  std::optional<FeedbackDoc> fb;
  if (!report->solution_valid_without_changes) fb = report_to_feedback(*report);

  if (config_.llm_reasoner_enabled) {
    event["calls"] = ojson::array();
    const std::string prompt =
        interpolate(assets::reasoner, {{"problem_description", problem_text()},
                                       {"code_example", render_model_document(reference)},
                                       {"input_content", r.result->to_json(false).dump()}});
    try {
      const std::string reply = trim(call(stage::kReasonerLlm, {{Role::kUser, prompt}}, event));
      if (reply != "NO_DISCREPANCIES" && !reply.empty()) {
        if (!fb) {
          fb = FeedbackDoc{"counterfactual", "reasoner discrepancies", {}};
        }
        for (const std::string& line : split_draft_constraints(reply)) {
          fb->lines.push_back("Reasoner: " + line);
        }
      }
    } catch (const Error& e) {
      event["reasoner_error"] = error_json(e);
    }
  }

  if (fb) {
    event["feedback"] = fb->to_json();
    pool_.append(stage::kReasonerCounterfactual, fb->text());
  } else {
    event["feedback"] = nullptr;
    pool_.append(stage::kReasonerCounterfactual, "NO_MODIFICATIONS_NEEDED");
  }
  return fb;
}

void PipelineRun::record_abort(const std::string& stage_label, const Error& e) {
  abort_ = error_json(e);
  abort_["stage"] = stage_label;
}

// ---------------------------------------------------------------------------
// solve_problem

RunOutcome solve_problem(const ProblemInput& problem, const RunConfig& config,
                         ChatClient& client) {
  RunOutcome out;
  PipelineRun run(problem, config, client);

  bool model_produced = false;
  std::optional<ExecuteResult> accepted;  // latest execution that parsed
  std::string accepted_doc;
  std::optional<CounterfactualReport> report;
  bool completed = false;
  std::string current_stage;

  auto note = [&](const ExecuteResult& r, const std::string& doc) {
    if (r.model) {
      model_produced = true;
      accepted = r;
      accepted_doc = doc;
    }
  };

  try {
    current_stage = stage::kSemanticEncoder;
    const ParameterSet params = run.semantic_encoder();
    current_stage = stage::kFormalization;
    const MathModelDraft draft = run.formalization(params);
    current_stage = stage::kExecutiveCompiler;
    const std::string candidate = run.executive_compiler(draft);
    current_stage = stage::kSupervisorForward;
    std::string doc = run.supervisor_forward(params, draft, candidate);
    current_stage = stage::kExecute;
    ExecuteResult exec = run.execute(doc, stage::kSupervisorForward);
    note(exec, doc);

    while (run.execute_failed(exec) && out.syntax_repairs < config.max_syntax_repairs) {
      current_stage = stage::kReasonerError;
      const FeedbackDoc fb = run.reasoner_error(exec);
      current_stage = stage::kSupervisorBackward;
      doc = run.supervisor_backward(fb, doc);
      current_stage = stage::kExecute;
      exec = run.execute(doc, stage::kSupervisorBackward);
      note(exec, doc);
      ++out.syntax_repairs;
    }

    current_stage = stage::kReasonerCounterfactual;
    std::optional<FeedbackDoc> fb = run.reasoner_counterfactual(exec, draft, report);
    while (fb && out.cf_repairs < config.max_cf_repairs) {
      current_stage = stage::kSupervisorBackward;
      const std::string revised = run.supervisor_backward(*fb, doc);
      current_stage = stage::kExecute;
      ExecuteResult next = run.execute(revised, stage::kSupervisorBackward);
      ++out.cf_repairs;
      current_stage = stage::kReasonerCounterfactual;
      if (run.execute_failed(next)) {
        // Keep the previous solution; a broken revision is not an answer.
        if (next.model) model_produced = true;
        fb = run.reasoner_counterfactual(exec, draft, report, true);
        break;
      }
      doc = revised;
      exec = std::move(next);
      note(exec, doc);
      fb = run.reasoner_counterfactual(exec, draft, report);
    }
    completed = true;
  } catch (const Error& e) {
    run.record_abort(current_stage, e);
  }

  // Run the accepted model on every instance.
  ojson instances = ojson::array();
  bool any_exec_failure = false;
  bool all_match = true;
  if (accepted) {
    out.model = accepted->model;
    out.final = accepted->result;
    out.final_report = report;
    for (std::size_t i = 0; i < std::max<std::size_t>(problem.instances.size(), 1); ++i) {
      ExecuteResult r;
      if (i == 0) {
        r = *accepted;
      } else {
        r = execute_document(accepted_doc, problem.instances[i].input, config.solver);
      }
      const std::vector<nlohmann::json> expected =
          problem.instances.empty() ? std::vector<nlohmann::json>{} : problem.instances[i].expected;
      ojson row;
      row["index"] = i;
      row["expected"] = expected;
      Classification c;
      if (r.parse_error) {
        row["error"] = error_json(*r.parse_error);
        c = Classification::kExecutionFailure;
      } else {
        out.instance_results.push_back(*r.result);
        row["result"] = r.result->to_json(false);
        ClassifyEvidence ev{true, r.result, !report || report->solution_valid_without_changes};
        c = classify(ev, expected, &*r.model);
        row["match"] = matches_expected(*r.result, expected, &*r.model);
      }
      any_exec_failure |= c == Classification::kExecutionFailure;
      all_match &= c == Classification::kSuccess;
      row["classification"] = std::string(to_string(c));
      instances.push_back(std::move(row));
    }
  }

  if (!model_produced || !accepted) {
    out.classification = Classification::kFormulationFailure;
  } else if (any_exec_failure) {
    out.classification = Classification::kExecutionFailure;
  } else if (all_match) {
    out.classification = Classification::kSuccess;
  } else {
    out.classification = Classification::kWrongAnswer;
  }

  out.transcript = run.transcript();
  const TranscriptUnits units = count_transcript_units(out.transcript);

  ojson& t = out.trace;
  t["problem_id"] = problem.id;
  t["config"] = config.to_json();
  t["events"] = run.events();
  t["pool"] = run.pool().to_json();
  t["repairs"] = {{"syntax", out.syntax_repairs}, {"counterfactual", out.cf_repairs}};
  t["completed"] = completed;
  if (!completed) t["abort"] = run.abort_info();
  if (accepted) {
    t["final"] = {{"model", render_model_document(*accepted->model)},
                  {"result", accepted->result->to_json(false)}};
  } else {
    t["final"] = nullptr;
  }
  t["final_report"] = report ? nlohmann::json(report->to_json()) : nlohmann::json(nullptr);
  t["instances"] = instances;
  ojson per_stage = ojson::object();
  for (const auto& [s, n] : units.per_stage) per_stage[s] = n;
  t["transcript_units"] = {{"per_stage", per_stage}, {"total", units.total}};
  t["classification"] = std::string(to_string(out.classification));
  return out;
}

}  // namespace ormind
