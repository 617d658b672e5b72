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

#include <span>
#include <string>
#include <vector>

#include "ormind/model_ir.hpp"

namespace ormind {

// minimize cost . x + cost_offset  subject to  rows x = rhs,  x >= 0.
//
// Every original variable is recovered as
//   value = offset + sum(sign * x[column])
// so shifted, mirrored and split variables map back to model names.
struct StandardForm {
  enum class ColumnKind { kStructural, kSlack, kSurplus };

  struct Column {
    std::string name;
    ColumnKind kind;
  };

  struct VariableMap {
    std::string name;
    double offset = 0.0;
    std::vector<std::pair<std::size_t, double>> columns;
  };

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> cost;
  double cost_offset = 0.0;
  // True when the model maximized; the minimized objective is its negation.
  bool negated = false;

  std::vector<Column> columns;
  std::vector<std::string> row_names;
  // The first `structural_rows` rows come from model constraints, the rest
  // from finite variable ranges.
  std::size_t structural_rows = 0;
  std::vector<VariableMap> variables;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_columns() const { return columns.size(); }
  std::size_t slack_columns() const;

  Assignment recover(std::span<const double> x) const;
  // Objective value in the model's own sense.
  double model_objective(std::span<const double> x) const;
};

StandardForm canonicalize(const ModelIR& model);

}  // namespace ormind
