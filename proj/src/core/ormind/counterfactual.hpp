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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/model_ir.hpp"
#include "ormind/solver.hpp"

namespace ormind {

enum class CheckKind {
  kLowerBound,
  kUpperBound,
  kResourceConstraint,
  kRatioConstraint,
  kIntegralityVar,
  kIntegralityObj,
};

std::string_view to_string(CheckKind kind);

// One "what would have to change" question about a candidate solution.
// The predicate is data (expression, sense, bound) so checks stay plain
// values; `holds` evaluates it.
struct ModificationCheck {
  std::string id;       // "Modification<k>"
  CheckKind kind = CheckKind::kResourceConstraint;
  std::string subject;  // constraint or variable name
  // Constraint names decided by this check: the constraint itself, or for a
  // bound check, a single-variable constraint that restates the bound.
  std::vector<std::string> covers;

  LinExpr lhs;  // for bounds: {var: 1}
  Sense sense = Sense::kLE;
  double rhs = 0.0;
  std::vector<std::string> integer_vars;  // kIntegralityVar

  // Contains "{:.2f}" where the achieved value is substituted.
  std::string message_template;

  bool holds(const Assignment& x, double objective, double eps) const;
  // Achieved left-hand side (or objective for kIntegralityObj).
  double achieved(const Assignment& x, double objective) const;
};

std::vector<ModificationCheck> derive_checks(const ModelIR& model,
                                             double eps = 1e-2);

struct ReportEntry {
  std::string id;
  CheckKind kind = CheckKind::kResourceConstraint;
  std::string subject;
  bool modification_needed = false;
  std::optional<std::string> suggestion;
  // Relaxed right-hand side that would admit the candidate (achieved value).
  std::optional<double> suggested_rhs;
};

struct CounterfactualReport {
  std::vector<ReportEntry> entries;  // in check order
  bool solution_valid_without_changes = true;

  const ReportEntry* find(std::string_view id) const;
  std::size_t needed_count() const;
  nlohmann::json to_json() const;
};

// Requires an Optimal solution; throws StatusNotOptimal otherwise.
CounterfactualReport analyze(const std::vector<ModificationCheck>& checks,
                             const SolveResult& solution, double eps = 1e-2);

// Feedback handed to the backward supervisor. `section` / `cause` are set for
// failure diagnoses; counterfactual feedback uses section "counterfactual".
struct FeedbackDoc {
  std::string section;
  std::string cause;
  std::vector<std::string> lines;

  std::string text() const;
  nlohmann::json to_json() const;
};

// One line per needed modification: "<check-id>: <suggestion>".
// Throws NoModificationsNeeded when nothing is flagged.
FeedbackDoc report_to_feedback(const CounterfactualReport& report);

// What went wrong in an execute step.
struct FailureEvidence {
  // Document parse/validation failure.
  std::optional<ErrorCode> parse_code;
  std::string parse_section;
  std::string parse_message;
  // Solver outcome (Error, Infeasible, Unbounded).
  std::optional<SolveResult> result;
};

FeedbackDoc diagnose_failure(const FailureEvidence& evidence);

}  // namespace ormind
