/*
 * Copyright 2026 The eqodds Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eqodds/lp.h"

namespace eqodds::lp {

std::string StatusName(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kIterationLimit:
      return "iteration limit";
  }
  return "unknown";
}

int LinearProgram::AddVariable(double cost) {
  costs_.push_back(cost);
  return static_cast<int>(costs_.size()) - 1;
}

void LinearProgram::AddConstraint(std::vector<Term> terms, Sense sense,
                                  double rhs) {
  for (const auto& term : terms) {
    if (term.variable < 0 || term.variable >= num_variables()) {
      throw std::out_of_range("constraint references unknown variable " +
                              std::to_string(term.variable));
    }
  }
  constraints_.push_back(Constraint{std::move(terms), sense, rhs});
}

double LinearProgram::Objective(const std::vector<double>& x) const {
  double value = 0.0;
  for (int j = 0; j < num_variables(); ++j) value += costs_[j] * x[j];
  return value;
}

double LinearProgram::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const auto& c : constraints_) {
    double activity = 0.0;
    for (const auto& t : c.terms) activity += t.coefficient * x[t.variable];
    const double gap = activity - c.rhs;
    switch (c.sense) {
      case Sense::kLessEqual:
        worst = std::max(worst, gap);
        break;
      case Sense::kGreaterEqual:
        worst = std::max(worst, -gap);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(gap));
        break;
    }
  }
  return worst;
}

namespace {

// Dense tableau in canonical form. Row `num_rows_` holds the reduced costs;
// the last column holds the right-hand side (and minus the objective in the
// cost row).
class Tableau {
 public:
  Tableau(const LinearProgram& program, const SimplexOptions& options)
      : options_(options), num_original_(program.num_variables()) {
    const auto& constraints = program.constraints();
    num_rows_ = static_cast<int>(constraints.size());

    int num_slacks = 0;
    int num_artificials = 0;
    std::vector<Sense> senses;
    std::vector<bool> flipped;
    for (const auto& c : constraints) {
      const bool flip = c.rhs < 0;
      Sense sense = c.sense;
      if (flip && sense == Sense::kLessEqual) {
        sense = Sense::kGreaterEqual;
      } else if (flip && sense == Sense::kGreaterEqual) {
        sense = Sense::kLessEqual;
      }
      senses.push_back(sense);
      flipped.push_back(flip);
      if (sense != Sense::kEqual) ++num_slacks;
      if (sense != Sense::kLessEqual) ++num_artificials;
    }
    first_artificial_ = num_original_ + num_slacks;
    num_columns_ = first_artificial_ + num_artificials;
    width_ = num_columns_ + 1;
    cells_.assign(static_cast<std::size_t>(num_rows_ + 1) * width_, 0.0);
    basis_.assign(num_rows_, -1);

    int next_slack = num_original_;
    int next_artificial = first_artificial_;
    for (int i = 0; i < num_rows_; ++i) {
      const double sign = flipped[i] ? -1.0 : 1.0;
      for (const auto& t : constraints[i].terms) {
        at(i, t.variable) += sign * t.coefficient;
      }
      at(i, num_columns_) = sign * constraints[i].rhs;
      switch (senses[i]) {
        case Sense::kLessEqual:
          at(i, next_slack) = 1.0;
          basis_[i] = next_slack++;
          break;
        case Sense::kGreaterEqual:
          at(i, next_slack++) = -1.0;
          at(i, next_artificial) = 1.0;
          basis_[i] = next_artificial++;
          break;
        case Sense::kEqual:
          at(i, next_artificial) = 1.0;
          basis_[i] = next_artificial++;
          break;
      }
    }
    rhs_scale_ = 1.0;
    for (int i = 0; i < num_rows_; ++i) {
      rhs_scale_ = std::max(rhs_scale_, std::abs(at(i, num_columns_)));
    }
  }

  Solution Solve(const std::vector<double>& costs) {
    Solution solution;
    if (first_artificial_ < num_columns_) {
      std::vector<double> phase_one(num_columns_, 0.0);
      std::fill(phase_one.begin() + first_artificial_, phase_one.end(), 1.0);
      SetCosts(phase_one);
      const Status status = Iterate(/*allow_artificials=*/true);
      solution.iterations = iterations_;
      if (status != Status::kOptimal) {
        solution.status = status;
        return solution;
      }
      if (-at(num_rows_, num_columns_) >
          options_.feasibility_tolerance * rhs_scale_) {
        solution.status = Status::kInfeasible;
        return solution;
      }
      DriveOutArtificials();
    }

    std::vector<double> phase_two(num_columns_, 0.0);
    std::copy(costs.begin(), costs.end(), phase_two.begin());
    SetCosts(phase_two);
    solution.status = Iterate(/*allow_artificials=*/false);
    solution.iterations = iterations_;
    solution.values.assign(num_original_, 0.0);
    for (int i = 0; i < num_rows_; ++i) {
      if (basis_[i] < num_original_) {
        solution.values[basis_[i]] = std::max(0.0, at(i, num_columns_));
      }
    }
    solution.objective = 0.0;
    for (int j = 0; j < num_original_; ++j) {
      solution.objective += costs[j] * solution.values[j];
    }
    return solution;
  }

 private:
  double& at(int row, int col) {
    return cells_[static_cast<std::size_t>(row) * width_ + col];
  }

  void SetCosts(const std::vector<double>& costs) {
    for (int j = 0; j < width_; ++j) {
      at(num_rows_, j) = j < num_columns_ ? costs[j] : 0.0;
    }
    for (int i = 0; i < num_rows_; ++i) {
      const double cb = costs[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < width_; ++j) at(num_rows_, j) -= cb * at(i, j);
    }
  }

  Status Iterate(bool allow_artificials) {
    const int limit = allow_artificials ? num_columns_ : first_artificial_;
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        return Status::kIterationLimit;
      }
      int entering = -1;
      double best = -options_.optimality_tolerance;
      for (int j = 0; j < limit; ++j) {
        const double reduced = at(num_rows_, j);
        if (reduced < best) {
          entering = j;
          if (bland) break;
          best = reduced;
        }
      }
      if (entering < 0) return Status::kOptimal;

      int leaving = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < num_rows_; ++i) {
        const double coeff = at(i, entering);
        if (coeff <= options_.pivot_tolerance) continue;
        const double ratio = std::max(0.0, at(i, num_columns_)) / coeff;
        if (leaving < 0 || ratio < min_ratio - 1e-12) {
          leaving = i;
          min_ratio = ratio;
        } else if (ratio <= min_ratio + 1e-12) {
          const bool prefer =
              bland ? basis_[i] < basis_[leaving]
                    : coeff > at(leaving, entering);
          if (prefer) {
            leaving = i;
            min_ratio = std::min(min_ratio, ratio);
          }
        }
      }
      if (leaving < 0) return Status::kUnbounded;

      if (min_ratio <= 1e-12) {
        if (++degenerate_run > options_.degenerate_pivot_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      Pivot(leaving, entering);
      ++iterations_;
    }
  }

  void Pivot(int row, int col) {
    const double pivot = at(row, col);
    for (int j = 0; j < width_; ++j) at(row, j) /= pivot;
    at(row, col) = 1.0;
    for (int i = 0; i <= num_rows_; ++i) {
      if (i == row) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (int j = 0; j < width_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0.0;
      if (i < num_rows_ && at(i, num_columns_) < 0.0 &&
          at(i, num_columns_) > -options_.feasibility_tolerance) {
        at(i, num_columns_) = 0.0;
      }
    }
    basis_[row] = col;
  }

  // Replaces basic artificial variables (all at zero level after a feasible
  // phase one) by structural or slack columns. Rows where that is impossible
  // are redundant and keep their artificial, which can never re-enter.
  void DriveOutArtificials() {
    for (int i = 0; i < num_rows_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      int best = -1;
      double best_magnitude = options_.pivot_tolerance;
      for (int j = 0; j < first_artificial_; ++j) {
        const double magnitude = std::abs(at(i, j));
        if (magnitude > best_magnitude) {
          best = j;
          best_magnitude = magnitude;
        }
      }
      if (best >= 0) Pivot(i, best);
    }
  }

  SimplexOptions options_;
  int num_original_ = 0;
  int num_rows_ = 0;
  int num_columns_ = 0;
  int first_artificial_ = 0;
  int width_ = 0;
  int iterations_ = 0;
  double rhs_scale_ = 1.0;
  std::vector<double> cells_;
  std::vector<int> basis_;
};

}  // namespace

Solution SolveSimplex(const LinearProgram& program,
                      const SimplexOptions& options) {
  Tableau tableau(program, options);
  return tableau.Solve(program.costs());
}

}  // namespace eqodds::lp
