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

// Small dense linear programs:
//
//   minimize    c^T x
//   subject to  a_i^T x  (<= | = | >=)  b_i
//               x >= 0
//
// The model is built incrementally and handed to a backend. The only backend
// shipped is a two-phase primal tableau simplex, which is adequate for the
// few hundred variables the postprocessing problems produce.

#ifndef EQODDS_LP_H_
#define EQODDS_LP_H_

#include <string>
#include <vector>

namespace eqodds::lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string StatusName(Status status);

struct Term {
  int variable = 0;
  double coefficient = 0.0;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

class LinearProgram {
 public:
  // Returns the index of the new nonnegative variable.
  int AddVariable(double cost);
  void AddConstraint(std::vector<Term> terms, Sense sense, double rhs);

  int num_variables() const { return static_cast<int>(costs_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  // Objective value and largest constraint violation at `x`.
  double Objective(const std::vector<double>& x) const;
  double MaxViolation(const std::vector<double>& x) const;

 private:
  std::vector<double> costs_;
  std::vector<Constraint> constraints_;
};

struct SimplexOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-10;
  double pivot_tolerance = 1e-11;
  int max_iterations = 200000;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_pivot_limit = 50;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  int iterations = 0;
};

Solution SolveSimplex(const LinearProgram& program,
                      const SimplexOptions& options = {});

}  // namespace eqodds::lp

#endif  // EQODDS_LP_H_
