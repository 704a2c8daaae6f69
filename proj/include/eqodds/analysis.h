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

// Fairness-accuracy frontiers, best-model selection and bootstrap intervals.

#ifndef EQODDS_ANALYSIS_H_
#define EQODDS_ANALYSIS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqodds/data.h"
#include "eqodds/policy.h"
#include "eqodds/solver.h"

namespace eqodds {

struct PercentileInterval {
  double p2_5 = 0.0;
  double p97_5 = 0.0;
};

// 2.5th and 97.5th bootstrap percentiles per metric.
struct BootstrapIntervals {
  PercentileInterval accuracy;
  PercentileInterval violation;
  PercentileInterval expected_loss;
};

struct BootstrapOptions {
  int n_resamples = 1000;
  std::uint64_t seed = 42;
  // Resample within each group, preserving group sizes.
  bool stratified = false;
  // Draws per resample before giving up on a resample that leaves some
  // group without one of the labels.
  int max_attempts = 100;
  int workers = 1;
};

// Evaluates the fixed `policy` on resamples of `data`. Resample r uses a
// generator seeded from (seed, r), so the result does not depend on
// `workers`.
BootstrapIntervals Bootstrap(const LabeledPredictions& data,
                             const ThresholdPolicy& policy,
                             const LossSpec& loss,
                             const BootstrapOptions& options);

struct FrontierPoint {
  double alpha = 0.0;
  double accuracy = 0.0;
  double expected_loss = 0.0;
  double violation = 0.0;
  std::optional<BootstrapIntervals> ci;
};

struct SweepOptions {
  double grid_step = 0.01;
  // Defaults to the violation of the unprocessed solution on the fit data.
  std::optional<double> alpha_max;
  int bootstrap_n = 0;
  std::uint64_t seed = 42;
  int workers = 1;
  SolverOptions solver;
  RocOptions roc;
};

// {0, step, 2 step, ...} up to `alpha_max` (inclusive, with 1e-9 slack).
std::vector<double> AlphaGrid(double grid_step, double alpha_max);

// Fits a solution on `fit` for every grid alpha and evaluates its policy on
// `eval`. Points come back in increasing alpha.
std::vector<FrontierPoint> Sweep(const LabeledPredictions& fit,
                                 const LabeledPredictions& eval,
                                 const LossSpec& loss,
                                 const SweepOptions& options = {});

struct CandidateSummary {
  std::string model_id;
  double unprocessed_accuracy = 0.0;
  double unprocessed_violation = 0.0;
};

struct ModelSelection {
  std::vector<CandidateSummary> candidates;
  std::string winner;
};

// Unprocesses every candidate on its own scores and picks the most accurate
// one; ties go to the lower violation, then to the smaller model id. All
// candidates must agree on labels and groups row for row.
ModelSelection SelectBest(
    const std::map<std::string, LabeledPredictions>& models,
    const LossSpec& loss, const RocOptions& roc = {});

// Columns alpha, accuracy, violation, expected_loss, accuracy_p2_5,
// accuracy_p97_5, violation_p2_5, violation_p97_5. Interval cells are empty
// when no bootstrap ran.
void WriteFrontierCsv(std::span<const FrontierPoint> frontier,
                      std::ostream& out);

// Runs fn(0), ..., fn(count - 1) on up to `workers` threads.
void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& fn);

}  // namespace eqodds

#endif  // EQODDS_ANALYSIS_H_
