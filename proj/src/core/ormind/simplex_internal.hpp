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
#include <string>
#include <vector>

#include "ormind/solver.hpp"

namespace ormind::detail {

using Clock = std::chrono::steady_clock;

struct LpOutcome {
  SolveStatus status = SolveStatus::kError;
  std::string message;
  std::vector<double> x;   // column values when optimal
  double objective = 0.0;  // minimized objective including offset
  std::size_t pivots = 0;
};

LpOutcome run_simplex(const StandardForm& sf, const SolverOptions& opts,
                      Clock::time_point deadline);

}  // namespace ormind::detail
