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

// Cross-checks counterfactual reports against check_feasibility.

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "ormind/counterfactual.hpp"
#include "ormind/solver.hpp"
#include "random_models.hpp"

namespace ormind::testing {

struct CfCase {
  ModelIR model;
  Assignment assignment;
};

inline CfCase random_cf_case(std::mt19937& rng) {
  RandomIntModel rm = random_int_model(rng);
  CfCase out{rm.to_model(), {}};
  std::uniform_int_distribution<int> coin(0, 3);
  for (auto& v : out.model.variables) {
    if (coin(rng) == 0) v.kind = VarKind::kContinuous;
    if (coin(rng) == 0) v.upper = kInfinity;
  }
  // Sometimes restate a bound as a constraint so merged checks are exercised.
  if (coin(rng) == 0) {
    const auto& v = out.model.variables.front();
    Constraint c;
    c.name = "restated";
    c.lhs.add_term(v.name, 1.0);
    c.sense = Sense::kGE;
    c.rhs = v.lower;
    out.model.constraints.push_back(c);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& v : out.model.variables) {
    const double hi = std::isfinite(v.upper) ? v.upper : v.lower + 20;
    double x = v.lower - 3 + unit(rng) * (hi - v.lower + 6);
    switch (coin(rng)) {
      case 0: x = std::round(x); break;
      case 1: x = v.lower - unit(rng) * 0.02; break;  // straddles eps
      default: break;
    }
    out.assignment[v.name] = x;
  }
  return out;
}

// Number of checks whose verdict disagrees with check_feasibility.
inline int cf_disagreements(const ModelIR& model, const Assignment& x,
                            double eps = 1e-2) {
  const auto checks = derive_checks(model, eps);
  SolveResult fake;
  fake.status = SolveStatus::kOptimal;
  fake.assignment = x;
  fake.objective = evaluate(model.objective.expr, x);
  const CounterfactualReport report = analyze(checks, fake, eps);
  const auto violations = check_feasibility(model, x, eps);

  auto flagged = [&](ViolationKind kind, const std::string& subject) {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
      return v.kind == kind && v.subject == subject;
    });
  };
  int bad = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& chk = checks[i];
    const bool needed = report.entries[i].modification_needed;
    bool expected = false;
    switch (chk.kind) {
      case CheckKind::kLowerBound:
        expected = flagged(ViolationKind::kLowerBound, chk.subject);
        break;
      case CheckKind::kUpperBound:
        expected = flagged(ViolationKind::kUpperBound, chk.subject);
        break;
      case CheckKind::kResourceConstraint:
      case CheckKind::kRatioConstraint:
        expected = flagged(ViolationKind::kConstraint, chk.subject);
        break;
      case CheckKind::kIntegralityVar:
        expected = std::any_of(violations.begin(), violations.end(), [](const Violation& v) {
          return v.kind == ViolationKind::kIntegrality;
        });
        break;
      case CheckKind::kIntegralityObj:
        continue;  // no feasibility counterpart
    }
    if (needed != expected) ++bad;
    // A constraint folded into a bound check must agree with that check.
    for (const auto& name : chk.covers) {
      if (name != chk.subject && flagged(ViolationKind::kConstraint, name) != needed) ++bad;
    }
  }
  return bad;
}

}  // namespace ormind::testing
