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

#include "eqodds/policy.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqodds/errors.h"
#include "eqodds/format.h"
#include "eqodds/random.h"
#include "eqodds/tally.h"

namespace eqodds {
namespace {

constexpr double kWeightSumTolerance = 1e-9;

std::size_t PickIndex(const std::vector<WeightedThreshold>& entries,
                      double draw) {
  double cumulative = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    cumulative += entries[k].weight;
    if (draw < cumulative) return k;
  }
  return entries.size() - 1;
}

// Policy index of every data group.
std::vector<std::size_t> MapGroups(const ThresholdPolicy& policy,
                                   const LabeledPredictions& data) {
  std::vector<std::size_t> mapping;
  for (const auto& group : data.groups()) {
    mapping.push_back(policy.GroupIndex(group));
  }
  return mapping;
}

}  // namespace

ThresholdPolicy ThresholdPolicy::Create(
    std::vector<std::string> groups,
    std::vector<std::vector<WeightedThreshold>> per_group,
    std::uint64_t seed) {
  if (groups.size() != per_group.size()) {
    throw UsageError("policy has " + std::to_string(groups.size()) +
                     " groups but " + std::to_string(per_group.size()) +
                     " threshold lists");
  }
  ThresholdPolicy policy;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (per_group[i].empty()) {
      throw UsageError("group '" + groups[i] + "' has no thresholds");
    }
    double total = 0.0;
    for (const auto& entry : per_group[i]) {
      if (!(entry.weight >= 0.0)) {
        throw UsageError("negative threshold weight in group '" + groups[i] +
                         "'");
      }
      total += entry.weight;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
      throw UsageError("threshold weights of group '" + groups[i] +
                       "' sum to " + FormatDouble(total));
    }
    if (!policy.lookup_.emplace(groups[i], i).second) {
      throw UsageError("group '" + groups[i] + "' appears twice in policy");
    }
  }
  policy.groups_ = std::move(groups);
  policy.per_group_ = std::move(per_group);
  policy.seed_ = seed;
  return policy;
}

std::size_t ThresholdPolicy::GroupIndex(std::string_view group) const {
  const auto it = lookup_.find(std::string(group));
  if (it == lookup_.end()) throw UnknownGroupError(std::string(group));
  return it->second;
}

const std::vector<WeightedThreshold>& ThresholdPolicy::ForGroup(
    std::string_view group) const {
  return per_group_[GroupIndex(group)];
}

double ThresholdPolicy::PositiveProbability(std::string_view group,
                                            double score) const {
  double probability = 0.0;
  for (const auto& entry : ForGroup(group)) {
    if (entry.threshold.Accepts(score)) probability += entry.weight;
  }
  return probability;
}

bool ThresholdPolicy::IsDeterministic() const {
  return std::all_of(per_group_.begin(), per_group_.end(),
                     [](const auto& entries) { return entries.size() == 1; });
}

ThresholdPolicy PolicyFromSolution(const RelaxedSolution& solution,
                                   std::span<const RocHull> hulls,
                                   std::uint64_t seed) {
  std::vector<std::vector<WeightedThreshold>> per_group;
  for (std::size_t s = 0; s < solution.group_mixtures.size(); ++s) {
    std::vector<WeightedThreshold> entries;
    for (const auto& e : solution.group_mixtures[s].entries) {
      entries.push_back({hulls[s].vertex_thresholds[e.vertex], e.weight});
    }
    per_group.push_back(std::move(entries));
  }
  return ThresholdPolicy::Create(solution.groups, std::move(per_group), seed);
}

PredictionOutcome PredictWithThreshold(const ThresholdPolicy& policy,
                                       double score, std::string_view group,
                                       double draw) {
  const auto& entries = policy.ForGroup(group);
  const Threshold threshold = entries[PickIndex(entries, draw)].threshold;
  return {threshold.Accepts(score) ? 1 : 0, threshold};
}

int Predict(const ThresholdPolicy& policy, double score,
            std::string_view group, double draw) {
  return PredictWithThreshold(policy, score, group, draw).prediction;
}

double InstanceDraw(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = MixSeed(seed, index);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::vector<PredictionOutcome> PredictBatch(const ThresholdPolicy& policy,
                                            const LabeledPredictions& data) {
  const auto mapping = MapGroups(policy, data);
  std::vector<PredictionOutcome> outcomes;
  outcomes.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& entries = policy.ForGroupIndex(mapping[data.group_id(i)]);
    const Threshold threshold =
        entries[PickIndex(entries, InstanceDraw(policy.seed(), i))].threshold;
    outcomes.push_back({threshold.Accepts(data.score(i)) ? 1 : 0, threshold});
  }
  return outcomes;
}

std::vector<double> PositiveProbabilities(const ThresholdPolicy& policy,
                                          const LabeledPredictions& data) {
  const auto mapping = MapGroups(policy, data);
  std::vector<double> probabilities(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    double p = 0.0;
    for (const auto& e : policy.ForGroupIndex(mapping[data.group_id(i)])) {
      if (e.threshold.Accepts(data.score(i))) p += e.weight;
    }
    probabilities[i] = p;
  }
  return probabilities;
}

EvalTally::EvalTally(std::size_t num_groups)
    : rows(num_groups, {0.0, 0.0}), positives(num_groups, {0.0, 0.0}) {}

void EvalTally::Add(int group, int label, double positive_probability) {
  rows[group][label] += 1.0;
  positives[group][label] += positive_probability;
}

EvalReport ReportFromTally(const EvalTally& tally,
                           const std::vector<std::string>& groups,
                           const LossSpec& loss, const EvalOptions& options) {
  EvalReport report;
  report.groups = groups;
  double n = 0.0;
  double false_positives = 0.0;
  double false_negatives = 0.0;
  for (std::size_t s = 0; s < groups.size(); ++s) {
    GroupRates rates;
    for (int y = 0; y < 2; ++y) {
      const double count = tally.rows[s][y];
      double rate = std::numeric_limits<double>::quiet_NaN();
      if (count > 0) {
        rate = tally.positives[s][y] / count;
      } else if (!options.allow_degenerate_groups) {
        throw DegenerateGroupError(groups[s], y);
      }
      (y == 0 ? rates.fpr : rates.tpr) = rate;
      n += count;
    }
    false_positives += tally.positives[s][0];
    false_negatives += tally.rows[s][1] - tally.positives[s][1];
    report.per_group_rates.push_back(rates);
  }
  report.n = static_cast<std::size_t>(n);
  report.accuracy = 1.0 - (false_positives + false_negatives) / n;
  report.expected_loss =
      (loss.fp_cost * false_positives + loss.fn_cost * false_negatives) / n;
  report.violation = Violation(report.per_group_rates);
  return report;
}

EvalReport EvaluatePolicy(const ThresholdPolicy& policy,
                          const LabeledPredictions& data, const LossSpec& loss,
                          const EvalOptions& options) {
  const auto probabilities = PositiveProbabilities(policy, data);
  EvalTally tally(data.num_groups());
  for (std::size_t i = 0; i < data.size(); ++i) {
    tally.Add(data.group_id(i), data.label(i), probabilities[i]);
  }
  return ReportFromTally(tally, data.groups(), loss, options);
}

EvalReport EvaluateSampled(const ThresholdPolicy& policy,
                           const LabeledPredictions& data,
                           const LossSpec& loss, const EvalOptions& options) {
  const auto outcomes = PredictBatch(policy, data);
  EvalTally tally(data.num_groups());
  for (std::size_t i = 0; i < data.size(); ++i) {
    tally.Add(data.group_id(i), data.label(i), outcomes[i].prediction);
  }
  return ReportFromTally(tally, data.groups(), loss, options);
}

double Violation(std::span<const GroupRates> rates) {
  double violation = 0.0;
  for (int y = 0; y < 2; ++y) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : rates) {
      const double value = y == 0 ? r.fpr : r.tpr;
      if (std::isnan(value)) continue;
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    if (hi >= lo) violation = std::max(violation, hi - lo);
  }
  return violation;
}

}  // namespace eqodds
