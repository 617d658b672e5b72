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

// Small random integer programs and a brute-force reference solver.

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ormind/model_ir.hpp"

namespace ormind::testing {

struct RandomIntModel {
  struct Row {
    std::vector<int> coef;
    Sense sense;
    int rhs;
  };
  int n = 0;
  std::vector<int> lower, upper;
  std::vector<Row> rows;
  std::vector<int> cost;
  bool maximize = false;

  std::string var(int j) const { return "x" + std::to_string(j); }

  ModelIR to_model() const {
    ModelIR m;
    for (int j = 0; j < n; ++j) {
      m.variables.push_back({var(j), VarKind::kInteger, double(lower[j]), double(upper[j])});
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Constraint c;
      c.name = "r" + std::to_string(i);
      for (int j = 0; j < n; ++j) c.lhs.add_term(var(j), rows[i].coef[j]);
      c.lhs.normalize();
      c.sense = rows[i].sense;
      c.rhs = rows[i].rhs;
      m.constraints.push_back(std::move(c));
    }
    m.objective.sense = maximize ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
    for (int j = 0; j < n; ++j) m.objective.expr.add_term(var(j), cost[j]);
    m.objective.expr.normalize();
    return m;
  }
};

inline RandomIntModel random_int_model(std::mt19937& rng) {
  std::uniform_int_distribution<int> nvars(1, 4), nrows(0, 5), coef(-9, 9),
      bound(0, 20), sense(0, 5);
  RandomIntModel m;
  m.n = nvars(rng);
  for (int j = 0; j < m.n; ++j) {
    int a = bound(rng), b = bound(rng);
    if (a > b) std::swap(a, b);
    m.lower.push_back(a);
    m.upper.push_back(b);
    m.cost.push_back(coef(rng));
  }
  const int k = nrows(rng);
  for (int i = 0; i < k; ++i) {
    RandomIntModel::Row r;
    int typical = 0;
    for (int j = 0; j < m.n; ++j) {
      r.coef.push_back(coef(rng));
      typical += r.coef.back() * (m.lower[j] + m.upper[j]) / 2;
    }
    const int s = sense(rng);
    r.sense = s < 3 ? Sense::kLE : s < 5 ? Sense::kGE : Sense::kEQ;
    // Keep right-hand sides near the box midpoint so both outcomes occur.
    std::uniform_int_distribution<int> jitter(-40, 40);
    r.rhs = typical + jitter(rng);
    m.rows.push_back(std::move(r));
  }
  m.maximize = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  return m;
}

struct Enumeration {
  bool feasible = false;
  std::int64_t best = 0;
  std::vector<int> argbest;
};

// Exact integer arithmetic over the whole box.
inline Enumeration enumerate(const RandomIntModel& m) {
  Enumeration out;
  std::vector<int> x(m.lower.begin(), m.lower.end());
  while (true) {
    bool ok = true;
    for (const auto& r : m.rows) {
      std::int64_t lhs = 0;
      for (int j = 0; j < m.n; ++j) lhs += std::int64_t(r.coef[j]) * x[j];
      ok = r.sense == Sense::kLE   ? lhs <= r.rhs
           : r.sense == Sense::kGE ? lhs >= r.rhs
                                   : lhs == r.rhs;
      if (!ok) break;
    }
    if (ok) {
      std::int64_t obj = 0;
      for (int j = 0; j < m.n; ++j) obj += std::int64_t(m.cost[j]) * x[j];
      if (!out.feasible || (m.maximize ? obj > out.best : obj < out.best)) {
        out.feasible = true;
        out.best = obj;
        out.argbest = x;
      }
    }
    int j = 0;
    while (j < m.n && x[j] == m.upper[j]) {
      x[j] = m.lower[j];
      ++j;
    }
    if (j == m.n) break;
    ++x[j];
  }
  return out;
}

}  // namespace ormind::testing
