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

// Dense two-phase tableau simplex.
//
// Entering column: most negative reduced cost until `bland_after` pivots,
// then Bland's smallest-index rule. Leaving row: minimum ratio, ties broken
// by the smallest basic column index (required for Bland termination).

#include <algorithm>
#include <cmath>

#include "ormind/simplex_internal.hpp"
#include "ormind/solver.hpp"

namespace ormind {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kError: return "Error";
  }
  return "Error";
}

nlohmann::json SolveResult::to_json(bool include_wall_time) const {
  nlohmann::json j;
  j["status"] = std::string(to_string(status));
  if (!message.empty()) j["message"] = message;
  if (objective) j["objective"] = *objective;
  if (assignment) j["assignment"] = *assignment;
  j["stats"]["pivots"] = stats.pivots;
  j["stats"]["nodes"] = stats.nodes;
  if (include_wall_time) j["stats"]["wall_us"] = stats.wall_time.count();
  return j;
}

namespace detail {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

class Tableau {
 public:
  Tableau(const StandardForm& sf)
      : m_(sf.num_rows()), n_(sf.num_columns()), width_(n_ + m_ + 1) {
    t_.assign(m_, std::vector<double>(width_, 0.0));
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = sf.rhs[i] < 0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign * sf.rows[i][j];
      t_[i][n_ + i] = 1.0;
      t_[i][width_ - 1] = sign * sf.rhs[i];
      basis_[i] = n_ + i;
    }
    obj_.assign(width_, 0.0);
  }

  // Phase-1 objective: minimize the sum of artificials.
  void load_phase1_objective() {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) obj_[j] -= t_[i][j];
      obj_[width_ - 1] -= t_[i][width_ - 1];
    }
  }

  void load_objective(const std::vector<double>& cost) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t b = basis_[i];
      const double cb = b < n_ ? cost[b] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) obj_[j] -= cb * t_[i][j];
    }
  }

  double objective_value() const { return -obj_[width_ - 1]; }

  // Runs simplex iterations on columns [0, allowed). Returns kOptimal,
  // kUnbounded, or kError (limits).
  SolveStatus iterate(std::size_t allowed, const SolverOptions& opts,
                      Clock::time_point deadline, std::size_t& pivots,
                      std::string& message) {
    for (;;) {
      const bool bland = pivots >= opts.bland_after;
      std::size_t enter = allowed;
      double best = -kCostTol;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (obj_[j] < best) {
          enter = j;
          if (bland) break;
          best = obj_[j];
        }
      }
      if (enter == allowed) return SolveStatus::kOptimal;

      std::size_t leave = m_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = t_[i][width_ - 1] / a;
        if (leave == m_ || ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return SolveStatus::kUnbounded;

      if (pivots >= opts.pivot_limit) {
        message = "pivot limit exhausted";
        return SolveStatus::kError;
      }
      if (Clock::now() > deadline) {
        message = "time limit exceeded";
        return SolveStatus::kError;
      }
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    auto& row = t_[r];
    const double p = row[s];
    for (double& v : row) v /= p;
    row[s] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][s];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) t_[i][j] -= f * row[j];
      t_[i][s] = 0.0;
    }
    const double f = obj_[s];
    if (f != 0.0) {
      for (std::size_t j = 0; j < width_; ++j) obj_[j] -= f * row[j];
      obj_[s] = 0.0;
    }
    basis_[r] = s;
  }

  // After phase 1: pivot artificials out of the basis or drop their
  // (redundant) rows.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_;) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      double best = kPivotTol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(t_[i][j]) > best) {
          best = std::abs(t_[i][j]);
          col = j;
        }
      }
      if (col < n_) {
        pivot(i, col);
        ++i;
      } else {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --m_;
      }
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, t_[i][width_ - 1]);
    }
    return x;
  }

  std::size_t structural_columns() const { return n_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<std::vector<double>> t_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpOutcome run_simplex(const StandardForm& sf, const SolverOptions& opts,
                      Clock::time_point deadline) {
  LpOutcome out;
  Tableau tab(sf);
  const std::size_t n = sf.num_columns();

  double scale = 1.0;
  for (double b : sf.rhs) scale = std::max(scale, std::abs(b));

  if (sf.num_rows() > 0) {
    tab.load_phase1_objective();
    out.status = tab.iterate(n, opts, deadline, out.pivots, out.message);
    if (out.status == SolveStatus::kError) return out;
    // Phase 1 is bounded below by zero, so kUnbounded cannot occur here.
    if (tab.objective_value() > 1e-7 * scale) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    tab.expel_artificials();
  }

  tab.load_objective(sf.cost);
  out.status = tab.iterate(n, opts, deadline, out.pivots, out.message);
  if (out.status != SolveStatus::kOptimal) return out;
  out.x = tab.primal();
  out.objective = sf.cost_offset + tab.objective_value();
  return out;
}

}  // namespace detail

SolveResult solve_lp(const StandardForm& form, const SolverOptions& opts) {
  const auto start = detail::Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<detail::Clock::duration>(
                  std::chrono::duration<double>(opts.time_limit_seconds));
  auto lp = detail::run_simplex(form, opts, deadline);
  SolveResult r;
  r.status = lp.status;
  r.message = lp.message;
  r.stats.pivots = lp.pivots;
  if (lp.status == SolveStatus::kOptimal) {
    r.assignment = form.recover(lp.x);
    r.objective = form.model_objective(lp.x);
  }
  r.stats.wall_time = std::chrono::duration_cast<std::chrono::microseconds>(
      detail::Clock::now() - start);
  return r;
}

}  // namespace ormind
