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

#include "ormind/standard_form.hpp"

#include <cmath>

namespace ormind {

std::size_t StandardForm::slack_columns() const {
  std::size_t n = 0;
  for (const auto& c : columns) {
    if (c.kind != ColumnKind::kStructural) ++n;
  }
  return n;
}

Assignment StandardForm::recover(std::span<const double> x) const {
  Assignment out;
  for (const auto& v : variables) {
    double value = v.offset;
    for (const auto& [col, sign] : v.columns) value += sign * x[col];
    out[v.name] = value;
  }
  return out;
}

double StandardForm::model_objective(std::span<const double> x) const {
  double z = cost_offset;
  for (std::size_t j = 0; j < cost.size(); ++j) z += cost[j] * x[j];
  return negated ? -z : z;
}

StandardForm canonicalize(const ModelIR& model) {
  StandardForm sf;
  std::map<std::string, std::size_t> var_index;

  auto add_column = [&](std::string name, StandardForm::ColumnKind kind) {
    sf.columns.push_back({std::move(name), kind});
    return sf.columns.size() - 1;
  };

  // Ranges x' <= upper - lower become extra rows after the model rows.
  std::vector<std::pair<std::size_t, double>> ranges;

  for (const auto& v : model.variables) {
    StandardForm::VariableMap map{v.name, 0.0, {}};
    const bool lower_finite = std::isfinite(v.lower);
    const bool upper_finite = std::isfinite(v.upper);
    if (lower_finite) {
      const auto col = add_column(v.name, StandardForm::ColumnKind::kStructural);
      map.offset = v.lower;
      map.columns.emplace_back(col, 1.0);
      if (upper_finite) ranges.emplace_back(col, v.upper - v.lower);
    } else if (upper_finite) {
      const auto col =
          add_column(v.name + "~", StandardForm::ColumnKind::kStructural);
      map.offset = v.upper;
      map.columns.emplace_back(col, -1.0);
    } else {
      const auto pos =
          add_column(v.name + "+", StandardForm::ColumnKind::kStructural);
      const auto neg =
          add_column(v.name + "-", StandardForm::ColumnKind::kStructural);
      map.columns.emplace_back(pos, 1.0);
      map.columns.emplace_back(neg, -1.0);
    }
    var_index[v.name] = sf.variables.size();
    sf.variables.push_back(std::move(map));
  }

  // Substitute an expression into column space: returns coefficients per
  // structural column and the constant contributed by variable offsets.
  auto substitute = [&](const LinExpr& e, std::vector<double>& coefs) {
    double constant = 0.0;
    for (const auto& [name, a] : e.terms) {
      const auto& map = sf.variables[var_index.at(name)];
      constant += a * map.offset;
      for (const auto& [col, sign] : map.columns) coefs[col] += a * sign;
    }
    return constant;
  };

  const std::size_t structural_cols = sf.columns.size();
  std::vector<std::vector<double>> dense_rows;
  std::vector<Sense> senses;

  for (const auto& c : model.constraints) {
    std::vector<double> coefs(structural_cols, 0.0);
    const double shift = substitute(c.lhs, coefs);
    dense_rows.push_back(std::move(coefs));
    sf.rhs.push_back(c.rhs - shift);
    senses.push_back(c.sense);
    sf.row_names.push_back(c.name);
  }
  sf.structural_rows = dense_rows.size();
  for (const auto& [col, width] : ranges) {
    std::vector<double> coefs(structural_cols, 0.0);
    coefs[col] = 1.0;
    dense_rows.push_back(std::move(coefs));
    sf.rhs.push_back(width);
    senses.push_back(Sense::kLE);
    sf.row_names.push_back(sf.columns[col].name + ".range");
  }

  // Slack / surplus columns.
  std::vector<std::pair<std::size_t, double>> slack_of_row(dense_rows.size(),
                                                           {0, 0.0});
  for (std::size_t i = 0; i < dense_rows.size(); ++i) {
    if (senses[i] == Sense::kLE) {
      slack_of_row[i] = {add_column("slack:" + sf.row_names[i],
                                    StandardForm::ColumnKind::kSlack),
                         1.0};
    } else if (senses[i] == Sense::kGE) {
      slack_of_row[i] = {add_column("surplus:" + sf.row_names[i],
                                    StandardForm::ColumnKind::kSurplus),
                         -1.0};
    }
  }
  const std::size_t n = sf.columns.size();
  sf.rows.reserve(dense_rows.size());
  for (std::size_t i = 0; i < dense_rows.size(); ++i) {
    std::vector<double> row(n, 0.0);
    std::copy(dense_rows[i].begin(), dense_rows[i].end(), row.begin());
    if (slack_of_row[i].second != 0.0) {
      row[slack_of_row[i].first] = slack_of_row[i].second;
    }
    sf.rows.push_back(std::move(row));
  }

  sf.cost.assign(n, 0.0);
  sf.negated = model.objective.sense == ObjectiveSense::kMaximize;
  std::vector<double> obj(structural_cols, 0.0);
  double obj_const = substitute(model.objective.expr, obj) +
                     model.objective.expr.constant;
  const double sign = sf.negated ? -1.0 : 1.0;
  for (std::size_t j = 0; j < structural_cols; ++j) sf.cost[j] = sign * obj[j];
  sf.cost_offset = sign * obj_const;
  return sf;
}

}  // namespace ormind
