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

// Randomized group-thresholded classifiers and their evaluation.

#ifndef EQODDS_POLICY_H_
#define EQODDS_POLICY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eqodds/data.h"
#include "eqodds/roc.h"
#include "eqodds/solver.h"

namespace eqodds {

struct WeightedThreshold {
  Threshold threshold;
  double weight = 0.0;
};

// Per group, a distribution over thresholds. Prediction for an instance draws
// one threshold and applies 1{score >= t}.
class ThresholdPolicy {
 public:
  // Throws UsageError if a group's weights are negative or do not sum to
  // 1 +/- 1e-9, or if group names repeat.
  static ThresholdPolicy Create(
      std::vector<std::string> groups,
      std::vector<std::vector<WeightedThreshold>> per_group,
      std::uint64_t seed);

  const std::vector<std::string>& groups() const { return groups_; }
  std::uint64_t seed() const { return seed_; }

  // Both throw UnknownGroupError.
  std::size_t GroupIndex(std::string_view group) const;
  const std::vector<WeightedThreshold>& ForGroup(std::string_view group) const;
  const std::vector<WeightedThreshold>& ForGroupIndex(std::size_t i) const {
    return per_group_[i];
  }

  // P[prediction = 1] for `score` in `group`, marginalizing the draw.
  double PositiveProbability(std::string_view group, double score) const;

  bool IsDeterministic() const;

 private:
  std::vector<std::string> groups_;
  std::vector<std::vector<WeightedThreshold>> per_group_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::uint64_t seed_ = 0;
};

// Maps each mixture vertex to the threshold that generated it.
ThresholdPolicy PolicyFromSolution(const RelaxedSolution& solution,
                                   std::span<const RocHull> hulls,
                                   std::uint64_t seed);

struct PredictionOutcome {
  int prediction = 0;
  Threshold threshold;
};

// Picks the threshold by inverse CDF of the group's weights at `draw` in
// [0,1). Throws UnknownGroupError.
PredictionOutcome PredictWithThreshold(const ThresholdPolicy& policy,
                                       double score, std::string_view group,
                                       double draw);
int Predict(const ThresholdPolicy& policy, double score,
            std::string_view group, double draw);

// Uniform [0,1) draw for instance `index`, a pure function of (seed, index).
double InstanceDraw(std::uint64_t seed, std::uint64_t index);

// Predictions for every row, drawing with InstanceDraw(policy.seed(), row).
std::vector<PredictionOutcome> PredictBatch(const ThresholdPolicy& policy,
                                            const LabeledPredictions& data);

struct GroupRates {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  double expected_loss = 0.0;
  std::vector<std::string> groups;
  std::vector<GroupRates> per_group_rates;
  double violation = 0.0;
  std::size_t n = 0;
};

struct EvalOptions {
  // Report NaN for a group's undefined rate (and skip it in the violation)
  // instead of raising DegenerateGroupError.
  bool allow_degenerate_groups = false;
};

// Expected rates from the mixture weights; no sampling.
EvalReport EvaluatePolicy(const ThresholdPolicy& policy,
                          const LabeledPredictions& data, const LossSpec& loss,
                          const EvalOptions& options = {});

// Rates of the single realization given by PredictBatch.
EvalReport EvaluateSampled(const ThresholdPolicy& policy,
                           const LabeledPredictions& data,
                           const LossSpec& loss,
                           const EvalOptions& options = {});

// Largest gap between any two groups in FPR or TPR. NaN rates are skipped.
double Violation(std::span<const GroupRates> rates);

}  // namespace eqodds

#endif  // EQODDS_POLICY_H_
