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

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "ormind/model_ir.hpp"
#include "ormind/standard_form.hpp"

namespace ormind {

struct SolverOptions {
  std::size_t pivot_limit = 50'000;      // per LP solve
  std::size_t node_limit = 100'000;      // branch-and-bound nodes
  double feasibility_eps = 1e-2;         // user-facing checks
  double integrality_tol = 1e-6;         // inside branch-and-bound
  double time_limit_seconds = 10.0;      // per solve
  // Pivots done with the largest-coefficient rule before switching to Bland.
  std::size_t bland_after = 1'000;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kError };

std::string_view to_string(SolveStatus status);

struct SolveStats {
  std::size_t pivots = 0;
  std::size_t nodes = 0;
  std::chrono::microseconds wall_time{0};
};

struct SolveResult {
  SolveStatus status = SolveStatus::kError;
  std::string message;  // set for kError
  std::optional<double> objective;
  std::optional<Assignment> assignment;
  SolveStats stats;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  nlohmann::json to_json(bool include_wall_time = true) const;
};

SolveResult solve_lp(const StandardForm& form, const SolverOptions& opts = {});

// Best-first branch-and-bound over the LP relaxation; deterministic.
SolveResult solve_milp(const ModelIR& model, const SolverOptions& opts = {});

enum class ViolationKind { kConstraint, kLowerBound, kUpperBound, kIntegrality };

struct Violation {
  std::string subject;  // constraint or variable name
  ViolationKind kind = ViolationKind::kConstraint;
  double achieved = 0.0;
  double required = 0.0;
  Sense sense = Sense::kLE;
  double slack = 0.0;  // positive = violated by that much
};

std::vector<Violation> check_feasibility(const ModelIR& model,
                                         const Assignment& assignment,
                                         double eps = 1e-2);

}  // namespace ormind
