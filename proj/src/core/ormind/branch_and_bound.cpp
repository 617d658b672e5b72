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

#include <cmath>
#include <queue>

#include "ormind/simplex_internal.hpp"
#include "ormind/solver.hpp"

namespace ormind {
namespace {

using detail::Clock;

struct Node {
  double bound;  // LP value in minimization form
  std::size_t id;
  std::vector<double> lower;
  std::vector<double> upper;
  Assignment relaxed;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Index of the most fractional integer variable; ties go to the
// lexicographically smallest name. Returns npos when integral.
std::size_t pick_branch_variable(const ModelIR& model, const Assignment& x,
                                 double tol) {
  std::size_t best = std::string::npos;
  double best_dist = tol;
  for (std::size_t k = 0; k < model.variables.size(); ++k) {
    const auto& v = model.variables[k];
    if (!v.is_integer()) continue;
    const double value = x.at(v.name);
    const double frac = value - std::floor(value);
    const double dist = std::min(frac, 1.0 - frac);
    if (dist <= tol) continue;
    if (best == std::string::npos || dist > best_dist + 1e-12 ||
        (dist >= best_dist - 1e-12 && v.name < model.variables[best].name)) {
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace

SolveResult solve_milp(const ModelIR& model, const SolverOptions& opts) {
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(opts.time_limit_seconds));
  SolveResult result;
  auto finish = [&](SolveStatus status, std::string message = {}) {
    result.status = status;
    result.message = std::move(message);
    result.stats.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(
        Clock::now() - start);
    return result;
  };

  validate(model);
  ModelIR work = model;
  for (auto& v : work.variables) {
    if (!v.is_integer()) continue;
    v.lower = std::ceil(v.lower - opts.integrality_tol);
    v.upper = std::floor(v.upper + opts.integrality_tol);
    if (v.lower > v.upper) return finish(SolveStatus::kInfeasible);
  }

  const std::size_t nvars = work.variables.size();
  std::size_t next_id = 0;

  // Solves the relaxation with the given bounds; nullopt-like via status.
  auto relax = [&](const std::vector<double>& lower,
                   const std::vector<double>& upper, Node& node) {
    for (std::size_t k = 0; k < nvars; ++k) {
      work.variables[k].lower = lower[k];
      work.variables[k].upper = upper[k];
    }
    const StandardForm sf = canonicalize(work);
    auto lp = detail::run_simplex(sf, opts, deadline);
    ++result.stats.nodes;
    result.stats.pivots += lp.pivots;
    if (lp.status == SolveStatus::kOptimal) {
      node.bound = lp.objective;
      node.id = next_id++;
      node.lower = lower;
      node.upper = upper;
      node.relaxed = sf.recover(lp.x);
    }
    return lp;
  };

  std::vector<double> lower(nvars), upper(nvars);
  for (std::size_t k = 0; k < nvars; ++k) {
    lower[k] = work.variables[k].lower;
    upper[k] = work.variables[k].upper;
  }

  std::optional<double> incumbent;
  Assignment incumbent_x;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;

  auto consider = [&](Node&& node) {
    if (incumbent && node.bound >= *incumbent - 1e-9) return;
    if (pick_branch_variable(work, node.relaxed, opts.integrality_tol) ==
        std::string::npos) {
      incumbent = node.bound;
      incumbent_x = std::move(node.relaxed);
      return;
    }
    open.push(std::move(node));
  };

  {
    Node root;
    auto lp = relax(lower, upper, root);
    if (lp.status == SolveStatus::kInfeasible) return finish(lp.status);
    if (lp.status == SolveStatus::kUnbounded) return finish(lp.status);
    if (lp.status == SolveStatus::kError) return finish(lp.status, lp.message);
    consider(std::move(root));
  }

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (incumbent && node.bound >= *incumbent - 1e-9) continue;
    const std::size_t k =
        pick_branch_variable(work, node.relaxed, opts.integrality_tol);
    const double value = node.relaxed.at(work.variables[k].name);

    for (int side = 0; side < 2; ++side) {
      if (result.stats.nodes >= opts.node_limit) {
        return finish(SolveStatus::kError, "node limit exhausted");
      }
      std::vector<double> lo = node.lower;
      std::vector<double> hi = node.upper;
      if (side == 0) {
        hi[k] = std::floor(value);
      } else {
        lo[k] = std::ceil(value);
      }
      if (lo[k] > hi[k]) continue;
      Node child;
      auto lp = relax(lo, hi, child);
      if (lp.status == SolveStatus::kError) {
        return finish(SolveStatus::kError, lp.message);
      }
      if (lp.status == SolveStatus::kUnbounded) {
        return finish(SolveStatus::kUnbounded);
      }
      if (lp.status == SolveStatus::kOptimal) consider(std::move(child));
    }
  }

  if (!incumbent) return finish(SolveStatus::kInfeasible);

  for (const auto& v : model.variables) {
    double& x = incumbent_x.at(v.name);
    if (v.is_integer()) {
      const double r = std::round(x);
      if (std::abs(x - r) <= opts.integrality_tol) x = r;
    }
    if (x == 0.0) x = 0.0;  // drop negative zero
  }
  result.objective = evaluate(model.objective.expr, incumbent_x);
  result.assignment = std::move(incumbent_x);
  return finish(SolveStatus::kOptimal);
}

std::vector<Violation> check_feasibility(const ModelIR& model,
                                         const Assignment& assignment,
                                         double eps) {
  std::vector<Violation> out;
  for (const auto& v : model.variables) {
    if (assignment.find(v.name) == assignment.end()) {
      throw Error(ErrorCode::kMissingAssignment,
                  "assignment has no value for '" + v.name + "'", {}, v.name);
    }
  }
  for (const auto& c : model.constraints) {
    const double achieved = evaluate(c.lhs, assignment);
    const double slack = constraint_violation(c.sense, achieved, c.rhs);
    if (slack > eps) {
      out.push_back({c.name, ViolationKind::kConstraint, achieved, c.rhs,
                     c.sense, slack});
    }
  }
  for (const auto& v : model.variables) {
    const double x = assignment.at(v.name);
    if (std::isfinite(v.lower)) {
      const double slack = constraint_violation(Sense::kGE, x, v.lower);
      if (slack > eps) {
        out.push_back({v.name, ViolationKind::kLowerBound, x, v.lower,
                       Sense::kGE, slack});
      }
    }
    if (std::isfinite(v.upper)) {
      const double slack = constraint_violation(Sense::kLE, x, v.upper);
      if (slack > eps) {
        out.push_back({v.name, ViolationKind::kUpperBound, x, v.upper,
                       Sense::kLE, slack});
      }
    }
  }
  for (const auto& v : model.variables) {
    if (!v.is_integer()) continue;
    const double x = assignment.at(v.name);
    const double r = std::round(x);
    const double slack = std::abs(x - r);
    if (slack > eps) {
      out.push_back({v.name, ViolationKind::kIntegrality, x, r, Sense::kEQ,
                     slack});
    }
  }
  return out;
}

}  // namespace ormind
