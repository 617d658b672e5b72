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

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ormind/errors.hpp"

namespace ormind {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kInteger };
enum class Sense { kLE, kGE, kEQ };
enum class ObjectiveSense { kMinimize, kMaximize };

std::string_view to_string(VarKind kind);
std::string_view to_string(Sense sense);

struct VariableDef {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInfinity;

  bool is_integer() const { return kind == VarKind::kInteger; }
  friend bool operator==(const VariableDef&, const VariableDef&) = default;
};

// Affine expression. Terms keep first-appearance order; a name appears at
// most once and never with a zero coefficient once normalized.
struct LinExpr {
  std::vector<std::pair<std::string, double>> terms;
  double constant = 0.0;

  void add_term(const std::string& name, double coef);
  void add(const LinExpr& other, double scale = 1.0);
  void scale(double factor);
  double coefficient(std::string_view name) const;
  bool is_constant() const { return terms.empty(); }
  void normalize();

  friend bool operator==(const LinExpr&, const LinExpr&) = default;
};

// Normalized: lhs.constant == 0, everything constant lives in rhs.
struct Constraint {
  std::string name;
  LinExpr lhs;
  Sense sense = Sense::kLE;
  double rhs = 0.0;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Objective {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  LinExpr expr;

  friend bool operator==(const Objective&, const Objective&) = default;
};

struct ModelIR {
  std::vector<VariableDef> variables;
  std::vector<Constraint> constraints;
  Objective objective;

  const VariableDef* find_variable(std::string_view name) const;
  std::set<std::string> variable_names() const;

  friend bool operator==(const ModelIR&, const ModelIR&) = default;
};

using Assignment = std::map<std::string, double>;

// Instance data bound into expressions by name: numbers or (nested) arrays.
using ParameterMap = std::map<std::string, nlohmann::json>;

// Parses an affine expression. Identifiers must be declared variables or,
// when `params` is given, parameters (scalar, or indexed as Name[i][j]).
LinExpr parse_linear_expr(std::string_view text,
                          const std::set<std::string>& vars,
                          const ParameterMap* params = nullptr);

// Parses "<expr> REL <expr>" with REL in {<=, >=, =} and moves everything to
// normalized form.
Constraint parse_constraint(std::string_view text,
                            const std::set<std::string>& vars,
                            const ParameterMap* params = nullptr,
                            std::string name = {});

// Strips code fences and surrounding prose, returning the outermost {...}
// block. Returns the trimmed input when no braces are found.
std::string extract_document(std::string_view text);

ModelIR parse_model_document(std::string_view text,
                             const ParameterMap* params = nullptr);

std::string render_expr(const LinExpr& expr);
std::string render_constraint(const Constraint& c);
std::string render_model_document(const ModelIR& model);

// Throws DocumentMalformed / DuplicateName / UnknownVariable on violated
// ModelIR invariants.
void validate(const ModelIR& model);

double evaluate(const LinExpr& expr, const Assignment& assignment);

// Positive means the constraint is violated by that amount: lhs - rhs for LE,
// rhs - lhs for GE, |lhs - rhs| for EQ.
double constraint_violation(Sense sense, double achieved, double required);

std::string format_number(double value);

}  // namespace ormind
