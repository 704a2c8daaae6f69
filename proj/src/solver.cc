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

#include "eqodds/solver.h"

#include <algorithm>
#include <cmath>

#include "eqodds/errors.h"
#include "eqodds/format.h"
#include "eqodds/lp.h"

namespace eqodds {
namespace {

// Slack on the certified gap before a solution is rejected as inconsistent.
constexpr double kCertificateSlack = 1e-6;
// Smallest gap reduction for which the tie-breaking LP result is adopted.
constexpr double kTieBreakGain = 1e-9;

// Linear objective of one group's point: fpr_cost * fpr - tpr_gain * tpr.
struct GroupObjective {
  double fpr_cost = 0.0;
  double tpr_gain = 0.0;
};

std::vector<GroupObjective> GroupObjectives(const Prevalences& prevalences,
                                            const LossSpec& loss) {
  std::vector<GroupObjective> objectives(prevalences.num_groups());
  for (std::size_t s = 0; s < objectives.size(); ++s) {
    objectives[s].fpr_cost =
        loss.fp_cost * prevalences.p(0) * prevalences.group_given(s, 0);
    objectives[s].tpr_gain =
        loss.fn_cost * prevalences.p(1) * prevalences.group_given(s, 1);
  }
  return objectives;
}

bool RateDefined(const RocHull& hull, int label) {
  return !hull.missing_label || *hull.missing_label != label;
}

double Coordinate(RocPoint p, int label) { return label == 0 ? p.fpr : p.tpr; }

// LP columns for the vertex weights of every group.
struct WeightLayout {
  std::vector<int> first_column;  // Per group.

  int column(int group, int vertex) const {
    return first_column[group] + vertex;
  }
};

WeightLayout AddWeightVariables(std::span<const RocHull> hulls,
                                std::span<const GroupObjective> objectives,
                                bool with_costs, lp::LinearProgram& program) {
  WeightLayout layout;
  for (std::size_t s = 0; s < hulls.size(); ++s) {
    layout.first_column.push_back(program.num_variables());
    std::vector<lp::Term> convexity;
    for (const auto& v : hulls[s].vertices) {
      const double cost =
          with_costs ? objectives[s].fpr_cost * v.fpr -
                           objectives[s].tpr_gain * v.tpr
                     : 0.0;
      convexity.push_back({program.AddVariable(cost), 1.0});
    }
    program.AddConstraint(std::move(convexity), lp::Sense::kEqual, 1.0);
  }
  return layout;
}

// Terms of g_a[label] - g_b[label].
std::vector<lp::Term> GapTerms(std::span<const RocHull> hulls,
                               const WeightLayout& layout, int a, int b,
                               int label, double sign) {
  std::vector<lp::Term> terms;
  for (int k = 0; k < static_cast<int>(hulls[a].size()); ++k) {
    terms.push_back({layout.column(a, k),
                     sign * Coordinate(hulls[a].vertices[k], label)});
  }
  for (int k = 0; k < static_cast<int>(hulls[b].size()); ++k) {
    terms.push_back({layout.column(b, k),
                     -sign * Coordinate(hulls[b].vertices[k], label)});
  }
  return terms;
}

template <typename Fn>
void ForEachConstrainedGap(std::span<const RocHull> hulls, Fn&& fn) {
  const int n = static_cast<int>(hulls.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int label = 0; label < 2; ++label) {
        if (RateDefined(hulls[a], label) && RateDefined(hulls[b], label)) {
          fn(a, b, label);
        }
      }
    }
  }
}

void AddGapBounds(std::span<const RocHull> hulls, const WeightLayout& layout,
                  double alpha, lp::LinearProgram& program) {
  ForEachConstrainedGap(hulls, [&](int a, int b, int label) {
    for (double sign : {1.0, -1.0}) {
      program.AddConstraint(GapTerms(hulls, layout, a, b, label, sign),
                            lp::Sense::kLessEqual, alpha);
    }
  });
}

lp::Solution SolveOrThrow(const lp::LinearProgram& program,
                          const SolverOptions& options, const char* stage) {
  lp::SimplexOptions simplex;
  simplex.feasibility_tolerance = options.feasibility_tolerance;
  auto solution = lp::SolveSimplex(program, simplex);
  if (solution.status != lp::Status::kOptimal) {
    throw SolverError(std::string(stage) + " LP returned " +
                      lp::StatusName(solution.status) + " (" +
                      std::to_string(program.num_variables()) +
                      " variables, " +
                      std::to_string(program.num_constraints()) +
                      " constraints, " + std::to_string(solution.iterations) +
                      " iterations)");
  }
  return solution;
}

// Group points encoded by LP weights, normalized per group.
std::vector<RocPoint> WeightedPoints(std::span<const RocHull> hulls,
                                     const WeightLayout& layout,
                                     const std::vector<double>& values) {
  std::vector<RocPoint> points;
  for (std::size_t s = 0; s < hulls.size(); ++s) {
    RocPoint point{0.0, 0.0};
    double total = 0.0;
    for (std::size_t k = 0; k < hulls[s].size(); ++k) {
      const double w = std::max(0.0, values[layout.column(s, k)]);
      point.fpr += w * hulls[s].vertices[k].fpr;
      point.tpr += w * hulls[s].vertices[k].tpr;
      total += w;
    }
    if (!(total > 0.5)) {
      throw SolverError("vertex weights of group '" + hulls[s].group +
                        "' sum to " + FormatDouble(total));
    }
    points.push_back({point.fpr / total, point.tpr / total});
  }
  return points;
}

std::vector<std::string> GroupNames(std::span<const RocHull> hulls) {
  std::vector<std::string> names;
  for (const auto& hull : hulls) names.push_back(hull.group);
  return names;
}

// Fills points, global point, loss and certificate from the mixtures.
void Finalize(std::span<const RocHull> hulls, const Prevalences& prevalences,
              const LossSpec& loss, RelaxedSolution& solution) {
  solution.groups = GroupNames(hulls);
  solution.group_points.clear();
  for (std::size_t s = 0; s < hulls.size(); ++s) {
    solution.group_points.push_back(
        solution.group_mixtures[s].Realize(hulls[s]));
  }
  solution.global_point = GlobalPoint(solution.group_points, prevalences);
  solution.expected_loss =
      ExpectedLoss(solution.global_point, prevalences, loss);
  solution.certified_alpha = MaxPairwiseGap(solution.group_points, hulls);
}

}  // namespace

void RelaxedProblem::Validate() const {
  if (hulls.size() != prevalences.num_groups()) {
    throw UsageError("problem has " + std::to_string(hulls.size()) +
                     " hulls but " +
                     std::to_string(prevalences.num_groups()) + " groups");
  }
  if (hulls.empty()) throw UsageError("problem has no groups");
  for (const auto& hull : hulls) {
    if (hull.size() < 2) {
      throw UsageError("hull of group '" + hull.group + "' is empty");
    }
  }
  if (!(alpha >= 0.0)) {
    throw UsageError("alpha must be nonnegative (got " + FormatDouble(alpha) +
                     ")");
  }
  loss.Validate();
}

RelaxedSolution SolveRelaxed(const RelaxedProblem& problem,
                             const SolverOptions& options) {
  problem.Validate();
  if (std::isinf(problem.alpha)) {
    return Unprocess(problem.hulls, problem.prevalences, problem.loss);
  }
  const std::span<const RocHull> hulls = problem.hulls;
  const auto objectives = GroupObjectives(problem.prevalences, problem.loss);
  const double constant = problem.loss.fn_cost * problem.prevalences.p(1);

  lp::LinearProgram loss_lp;
  const auto layout =
      AddWeightVariables(hulls, objectives, /*with_costs=*/true, loss_lp);
  AddGapBounds(hulls, layout, problem.alpha, loss_lp);
  lp::Solution best = SolveOrThrow(loss_lp, options, "loss");
  const double optimal_loss = best.objective + constant;

  if (options.minimize_gap_among_optima && hulls.size() > 1) {
    // Among solutions within loss_slack of the optimum, minimize the largest
    // pairwise gap. The refinement is kept only when it narrows the gap by
    // more than round-off, so that exact optima are not perturbed.
    lp::LinearProgram gap_lp;
    const auto gap_layout =
        AddWeightVariables(hulls, objectives, /*with_costs=*/false, gap_lp);
    AddGapBounds(hulls, gap_layout, problem.alpha, gap_lp);
    const int gap = gap_lp.AddVariable(1.0);
    ForEachConstrainedGap(hulls, [&](int a, int b, int label) {
      for (double sign : {1.0, -1.0}) {
        auto terms = GapTerms(hulls, gap_layout, a, b, label, sign);
        terms.push_back({gap, -1.0});
        gap_lp.AddConstraint(std::move(terms), lp::Sense::kLessEqual, 0.0);
      }
    });
    std::vector<lp::Term> loss_terms;
    for (int j = 0; j < loss_lp.num_variables(); ++j) {
      loss_terms.push_back({j, loss_lp.costs()[j]});
    }
    gap_lp.AddConstraint(std::move(loss_terms), lp::Sense::kLessEqual,
                         best.objective + options.loss_slack);
    auto refined = SolveOrThrow(gap_lp, options, "gap");
    const double current_gap =
        MaxPairwiseGap(WeightedPoints(hulls, layout, best.values), hulls);
    if (refined.values[gap] < current_gap - kTieBreakGain) {
      refined.values.resize(loss_lp.num_variables());
      best = std::move(refined);
    }
  }

  RelaxedSolution solution;
  solution.alpha_requested = problem.alpha;
  solution.lp_objective = optimal_loss;
  const auto points = WeightedPoints(hulls, layout, best.values);
  for (std::size_t s = 0; s < hulls.size(); ++s) {
    solution.group_mixtures.push_back(Decompose(hulls[s], points[s]));
  }
  Finalize(hulls, problem.prevalences, problem.loss, solution);

  if (std::abs(optimal_loss - solution.expected_loss) > 1e-7) {
    throw SolverError("realized loss " + FormatDouble(solution.expected_loss) +
                      " disagrees with LP objective " +
                      FormatDouble(optimal_loss));
  }
  if (solution.certified_alpha > problem.alpha + kCertificateSlack) {
    throw SolverError("solution violates alpha=" + FormatDouble(problem.alpha) +
                      " by " +
                      FormatDouble(solution.certified_alpha - problem.alpha));
  }
  return solution;
}

RelaxedSolution Unprocess(std::span<const RocHull> hulls,
                          const Prevalences& prevalences,
                          const LossSpec& loss) {
  RelaxedProblem{std::vector<RocHull>(hulls.begin(), hulls.end()), prevalences,
                 loss, kUnconstrained}
      .Validate();
  const auto objectives = GroupObjectives(prevalences, loss);
  RelaxedSolution solution;
  solution.alpha_requested = kUnconstrained;
  solution.lp_objective = loss.fn_cost * prevalences.p(1);
  for (std::size_t s = 0; s < hulls.size(); ++s) {
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(hulls[s].size()); ++k) {
      const auto& v = hulls[s].vertices[k];
      const double value =
          objectives[s].fpr_cost * v.fpr - objectives[s].tpr_gain * v.tpr;
      if (value < best_value) {
        best_value = value;
        best = k;
      }
    }
    solution.lp_objective += best_value;
    solution.group_mixtures.push_back(VertexMixture{{{best, 1.0}}});
  }
  Finalize(hulls, prevalences, loss, solution);
  return solution;
}

RelaxedSolution SolveStrict(std::span<const RocHull> hulls,
                            const Prevalences& prevalences,
                            const LossSpec& loss,
                            const SolverOptions& options) {
  return SolveRelaxed(
      RelaxedProblem{std::vector<RocHull>(hulls.begin(), hulls.end()),
                     prevalences, loss, 0.0},
      options);
}

RocPoint GlobalPoint(std::span<const RocPoint> group_points,
                     const Prevalences& prevalences) {
  RocPoint global{0.0, 0.0};
  for (std::size_t s = 0; s < group_points.size(); ++s) {
    global.fpr += group_points[s].fpr * prevalences.group_given(s, 0);
    global.tpr += group_points[s].tpr * prevalences.group_given(s, 1);
  }
  return global;
}

double ExpectedLoss(RocPoint global_point, const Prevalences& prevalences,
                    const LossSpec& loss) {
  return global_point.fpr * loss.fp_cost * prevalences.p(0) +
         (1.0 - global_point.tpr) * loss.fn_cost * prevalences.p(1);
}

double MaxPairwiseGap(std::span<const RocPoint> group_points,
                      std::span<const RocHull> hulls) {
  double gap = 0.0;
  for (int label = 0; label < 2; ++label) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < group_points.size(); ++s) {
      if (!hulls.empty() && !RateDefined(hulls[s], label)) continue;
      const double value = Coordinate(group_points[s], label);
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    if (hi >= lo) gap = std::max(gap, hi - lo);
  }
  return gap;
}

}  // namespace eqodds
