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

#include "ormind/counterfactual.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>

namespace ormind {

std::string_view to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kLowerBound: return "LowerBound";
    case CheckKind::kUpperBound: return "UpperBound";
    case CheckKind::kResourceConstraint: return "ResourceConstraint";
    case CheckKind::kRatioConstraint: return "RatioConstraint";
    case CheckKind::kIntegralityVar: return "IntegralityVar";
    case CheckKind::kIntegralityObj: return "IntegralityObj";
  }
  return "Unknown";
}

double ModificationCheck::achieved(const Assignment& x, double objective) const {
  switch (kind) {
    case CheckKind::kIntegralityObj:
      return objective;
    case CheckKind::kIntegralityVar: {
      double worst = 0.0;
      for (const auto& name : integer_vars) {
        const double v = x.at(name);
        worst = std::max(worst, std::abs(v - std::round(v)));
      }
      return worst;
    }
    default:
      return evaluate(lhs, x);
  }
}

bool ModificationCheck::holds(const Assignment& x, double objective,
                              double eps) const {
  switch (kind) {
    case CheckKind::kIntegralityObj:
      return !(std::abs(objective - std::round(objective)) > eps);
    case CheckKind::kIntegralityVar:
      for (const auto& name : integer_vars) {
        const double v = x.at(name);
        if (std::abs(v - std::round(v)) > eps) return false;
      }
      return true;
    default:
      return !(constraint_violation(sense, evaluate(lhs, x), rhs) > eps);
  }
}

namespace {

bool is_integral(double v) { return std::isfinite(v) && std::round(v) == v; }

std::string percent(double share) {
  std::string s = fmt::format("{:.2f}", share * 100.0);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// A homogeneous inequality with both signs reads as a share requirement:
// (1-k)*P - k*N >= 0  <=>  P is at least k of (P + N).
std::optional<double> ratio_share(const Constraint& c) {
  if (c.sense == Sense::kEQ || std::abs(c.rhs) > 1e-12) return std::nullopt;
  double pos = 0.0;
  double neg = 0.0;
  for (const auto& [name, coef] : c.lhs.terms) {
    (coef > 0 ? pos : neg) += std::abs(coef);
  }
  if (pos == 0.0 || neg == 0.0) return std::nullopt;
  return neg / (pos + neg);
}

std::string escape_braces(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += c;
    if (c == '{' || c == '}') out += c;
  }
  return out;
}

}  // namespace

std::vector<ModificationCheck> derive_checks(const ModelIR& model, double eps) {
  (void)eps;  // checks take the tolerance at evaluation time
  std::vector<ModificationCheck> checks;
  auto next_id = [&] { return "Modification" + std::to_string(checks.size() + 1); };

  // Single-variable, unit-coefficient constraints that restate a bound are
  // folded into that bound's check.
  std::map<std::string, std::vector<std::string>> lower_dups, upper_dups;
  std::vector<bool> merged(model.constraints.size(), false);
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const auto& c = model.constraints[i];
    if (c.lhs.terms.size() != 1 || c.lhs.terms[0].second != 1.0) continue;
    const VariableDef* v = model.find_variable(c.lhs.terms[0].first);
    if (v == nullptr) continue;
    if (c.sense == Sense::kGE && std::isfinite(v->lower) && c.rhs == v->lower) {
      lower_dups[v->name].push_back(c.name);
      merged[i] = true;
    } else if (c.sense == Sense::kLE && std::isfinite(v->upper) &&
               c.rhs == v->upper) {
      upper_dups[v->name].push_back(c.name);
      merged[i] = true;
    }
  }

  for (const auto& v : model.variables) {
    const std::string message =
        "Adjust constraint to allow " + v.name + " to be {:.2f}";
    if (std::isfinite(v.lower)) {
      ModificationCheck chk;
      chk.id = next_id();
      chk.kind = CheckKind::kLowerBound;
      chk.subject = v.name;
      chk.covers = lower_dups[v.name];
      chk.lhs.add_term(v.name, 1.0);
      chk.sense = Sense::kGE;
      chk.rhs = v.lower;
      chk.message_template = message;
      checks.push_back(std::move(chk));
    }
    if (std::isfinite(v.upper)) {
      ModificationCheck chk;
      chk.id = next_id();
      chk.kind = CheckKind::kUpperBound;
      chk.subject = v.name;
      chk.covers = upper_dups[v.name];
      chk.lhs.add_term(v.name, 1.0);
      chk.sense = Sense::kLE;
      chk.rhs = v.upper;
      chk.message_template = message;
      checks.push_back(std::move(chk));
    }
  }

  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    if (merged[i]) continue;
    const auto& c = model.constraints[i];
    ModificationCheck chk;
    chk.id = next_id();
    chk.subject = c.name;
    chk.covers = {c.name};
    chk.lhs = c.lhs;
    chk.sense = c.sense;
    chk.rhs = c.rhs;
    const std::string lhs_text = escape_braces(render_expr(c.lhs));
    if (auto share = ratio_share(c)) {
      chk.kind = CheckKind::kRatioConstraint;
      std::string subjects;
      for (const auto& [name, coef] : c.lhs.terms) {
        if (coef <= 0) continue;
        if (!subjects.empty()) subjects += " + ";
        subjects += name;
      }
      chk.message_template =
          "Adjust constraint to ensure at " +
          std::string(c.sense == Sense::kGE ? "least " : "most ") +
          percent(*share) + "% for " + subjects + " (" + c.name + ": " +
          lhs_text + " is {:.2f})";
    } else {
      chk.kind = CheckKind::kResourceConstraint;
      chk.message_template =
          c.sense == Sense::kEQ
              ? "Modify equality constraint " + c.name + " to allow " +
                    lhs_text + " to be {:.2f}"
              : "Modify resource constraint to allow " + lhs_text +
                    " to be {:.2f}";
    }
    checks.push_back(std::move(chk));
  }

  std::vector<std::string> integer_vars;
  for (const auto& v : model.variables) {
    if (v.is_integer()) integer_vars.push_back(v.name);
  }
  if (!integer_vars.empty()) {
    ModificationCheck chk;
    chk.id = next_id();
    chk.kind = CheckKind::kIntegralityVar;
    chk.subject = "variables";
    chk.integer_vars = integer_vars;
    chk.message_template = "Remove integer constraint on variables";
    checks.push_back(std::move(chk));

    bool integral_objective = is_integral(model.objective.expr.constant);
    for (const auto& [name, coef] : model.objective.expr.terms) {
      const VariableDef* v = model.find_variable(name);
      integral_objective = integral_objective && is_integral(coef) &&
                           v != nullptr && v->is_integer();
    }
    if (integral_objective) {
      ModificationCheck obj;
      obj.id = next_id();
      obj.kind = CheckKind::kIntegralityObj;
      obj.subject = "objective";
      obj.message_template = "Remove integer constraint on objective";
      checks.push_back(std::move(obj));
    }
  }
  return checks;
}

const ReportEntry* CounterfactualReport::find(std::string_view id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::size_t CounterfactualReport::needed_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.modification_needed ? 1 : 0;
  return n;
}

nlohmann::json CounterfactualReport::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["id"] = e.id;
    je["kind"] = std::string(to_string(e.kind));
    je["subject"] = e.subject;
    je["modification_needed"] = e.modification_needed;
    je["suggestion"] = e.suggestion ? nlohmann::json(*e.suggestion) : nlohmann::json(nullptr);
    if (e.suggested_rhs) je["suggested_rhs"] = *e.suggested_rhs;
    list.push_back(std::move(je));
  }
  j["entries"] = std::move(list);
  j["solution_valid_without_changes"] = solution_valid_without_changes;
  return j;
}

CounterfactualReport analyze(const std::vector<ModificationCheck>& checks,
                             const SolveResult& solution, double eps) {
  if (!solution.optimal() || !solution.assignment || !solution.objective) {
    throw Error(ErrorCode::kStatusNotOptimal,
                "counterfactual analysis needs an Optimal solution, got " +
                    std::string(to_string(solution.status)));
  }
  const Assignment& x = *solution.assignment;
  const double obj = *solution.objective;
  CounterfactualReport report;
  for (const auto& chk : checks) {
    ReportEntry e;
    e.id = chk.id;
    e.kind = chk.kind;
    e.subject = chk.subject;
    e.modification_needed = !chk.holds(x, obj, eps);
    if (e.modification_needed) {
      const double value = chk.achieved(x, obj);
      e.suggestion = fmt::format(fmt::runtime(chk.message_template), value);
      if (chk.kind != CheckKind::kIntegralityVar &&
          chk.kind != CheckKind::kIntegralityObj) {
        e.suggested_rhs = value;
      }
      report.solution_valid_without_changes = false;
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::string FeedbackDoc::text() const {
  std::string out;
  for (const auto& line : lines) {
    if (!out.empty()) out += '\n';
    out += line;
  }
  return out;
}

nlohmann::json FeedbackDoc::to_json() const {
  return {{"section", section}, {"cause", cause}, {"lines", lines}};
}

FeedbackDoc report_to_feedback(const CounterfactualReport& report) {
  FeedbackDoc doc;
  doc.section = "counterfactual";
  doc.cause = "solution violates derived checks";
  for (const auto& e : report.entries) {
    if (e.modification_needed) doc.lines.push_back(e.id + ": " + *e.suggestion);
  }
  if (doc.lines.empty()) {
    throw Error(ErrorCode::kNoModificationsNeeded,
                "counterfactual report flags no modification");
  }
  return doc;
}

FeedbackDoc diagnose_failure(const FailureEvidence& evidence) {
  FeedbackDoc doc;
  if (evidence.parse_code) {
    doc.section = evidence.parse_section.empty() ? "document"
                                                 : evidence.parse_section;
    const std::string& msg = evidence.parse_message;
    std::string hint;
    switch (*evidence.parse_code) {
      case ErrorCode::kUnknownVariable:
        doc.cause = "unknown variable";
        hint = "declare the variable in \"variables\" or use a declared name";
        break;
      case ErrorCode::kSyntaxError:
        if (msg.find("division") != std::string::npos) {
          doc.cause = "does not support division";
          hint = "the expression format does not support division; multiply "
                 "by the reciprocal coefficient instead (x / 200 -> 0.005*x)";
        } else if (msg.find("nonlinear") != std::string::npos) {
          doc.cause = "nonlinear term";
          hint = "only linear expressions are allowed";
        } else if (msg.find("strict") != std::string::npos) {
          doc.cause = "strict inequality";
          hint = "use <=, >= or =; over integers write lhs <= rhs - 1";
        } else {
          doc.cause = "syntax error";
          hint = "rewrite the expression as a sum of coefficient*variable terms";
        }
        break;
      case ErrorCode::kMultipleRelations:
        doc.cause = "multiple relation symbols";
        hint = "split chained comparisons into separate constraints";
        break;
      case ErrorCode::kDuplicateName:
        doc.cause = "duplicate name";
        hint = "give every variable and constraint a unique name";
        break;
      default:
        doc.cause = "malformed document";
        hint = "emit a single JSON object with \"variables\", \"constraints\" "
               "and \"objective\"";
        break;
    }
    doc.lines.push_back("Error in " + doc.section + ": " + msg);
    doc.lines.push_back("Probable cause: " + doc.cause + "; " + hint + ".");
    return doc;
  }
  if (evidence.result) {
    const SolveResult& r = *evidence.result;
    switch (r.status) {
      case SolveStatus::kError:
        doc.section = "solver";
        if (r.message.find("node limit") != std::string::npos) {
          doc.cause = "node limit exhausted";
        } else if (r.message.find("pivot limit") != std::string::npos) {
          doc.cause = "pivot limit exhausted";
        } else if (r.message.find("time limit") != std::string::npos) {
          doc.cause = "time limit exceeded";
        } else {
          doc.cause = r.message.empty() ? "solver error" : r.message;
        }
        doc.lines.push_back("Solver failed: " + doc.cause + ".");
        doc.lines.push_back(
            "Probable cause: the model is too weakly constrained or too large; "
            "check variable bounds and integrality declarations.");
        return doc;
      case SolveStatus::kUnbounded:
        doc.section = "objective";
        doc.cause = "objective is unbounded";
        doc.lines.push_back("Solver reports the objective is unbounded.");
        doc.lines.push_back(
            "Probable cause: a limiting constraint or variable bound from the "
            "description is missing, or the objective sense is reversed.");
        return doc;
      case SolveStatus::kInfeasible:
        doc.section = "constraints";
        doc.cause = "model is infeasible";
        doc.lines.push_back(
            "Solver reports the model is infeasible but a numeric optimum is "
            "expected.");
        doc.lines.push_back(
            "Probable cause: a constraint direction or right-hand side is "
            "wrong, or a bound is too tight.");
        return doc;
      case SolveStatus::kOptimal:
        break;
    }
  }
  doc.section = "execute";
  doc.cause = "unknown failure";
  doc.lines.push_back("Execution failed without diagnostic evidence.");
  return doc;
}

}  // namespace ormind
