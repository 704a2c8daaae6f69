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

// Loss-optimal postprocessing under relaxed equalized odds.
//
// Each group s picks an ROC point g_s inside its hull D_s. The global point
// is the prevalence-weighted mixture
//
//   G_0 = sum_s g_s.fpr * P[S=s | Y=0],   G_1 = sum_s g_s.tpr * P[S=s | Y=1]
//
// and the expected loss is G_0 * l(1,0) * p_0 + (1 - G_1) * l(0,1) * p_1.
// The relaxed problem bounds every pairwise FPR and TPR gap by alpha.
// Points are LP variables in vertex form: g_s = sum_k w_{s,k} v_{s,k}.

#ifndef EQODDS_SOLVER_H_
#define EQODDS_SOLVER_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "eqodds/data.h"
#include "eqodds/roc.h"

namespace eqodds {

// Marker for the unconstrained problem.
inline constexpr double kUnconstrained =
    std::numeric_limits<double>::infinity();

struct RelaxedProblem {
  std::vector<RocHull> hulls;  // Indexed by group id.
  Prevalences prevalences;
  LossSpec loss;
  double alpha = 0.0;

  // One hull per group, and alpha >= 0 (or kUnconstrained).
  void Validate() const;
};

struct SolverOptions {
  // Second LP picking the smallest maximal gap among loss-optimal solutions.
  bool minimize_gap_among_optima = true;
  // Loss slack granted to the second LP; must stay below 1e-9.
  double loss_slack = 1e-10;
  double feasibility_tolerance = 1e-9;
};

struct RelaxedSolution {
  std::vector<std::string> groups;
  std::vector<RocPoint> group_points;
  std::vector<VertexMixture> group_mixtures;
  RocPoint global_point;
  double expected_loss = 0.0;
  // Optimal value of the loss LP; equals expected_loss up to round-off.
  double lp_objective = 0.0;
  double certified_alpha = 0.0;
  double alpha_requested = 0.0;
};

// Throws SolverError when the LP backend fails.
RelaxedSolution SolveRelaxed(const RelaxedProblem& problem,
                             const SolverOptions& options = {});

// Per-group loss-minimizing hull vertex; single-vertex mixtures throughout.
RelaxedSolution Unprocess(std::span<const RocHull> hulls,
                          const Prevalences& prevalences, const LossSpec& loss);

// alpha = 0: all group points coincide at a point of the hull intersection.
RelaxedSolution SolveStrict(std::span<const RocHull> hulls,
                            const Prevalences& prevalences,
                            const LossSpec& loss,
                            const SolverOptions& options = {});

RocPoint GlobalPoint(std::span<const RocPoint> group_points,
                     const Prevalences& prevalences);

double ExpectedLoss(RocPoint global_point, const Prevalences& prevalences,
                    const LossSpec& loss);

// Largest pairwise FPR or TPR gap. Rates flagged undefined by a hull's
// `missing_label` are skipped.
double MaxPairwiseGap(std::span<const RocPoint> group_points,
                      std::span<const RocHull> hulls);

}  // namespace eqodds

#endif  // EQODDS_SOLVER_H_
