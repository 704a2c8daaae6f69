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

// Sufficient statistics behind an EvalReport, shared by plain evaluation and
// the bootstrap.

#ifndef EQODDS_TALLY_H_
#define EQODDS_TALLY_H_

#include <array>
#include <string>
#include <vector>

#include "eqodds/policy.h"

namespace eqodds {

// Per group and label: number of rows, and expected number of positive
// predictions among them.
struct EvalTally {
  explicit EvalTally(std::size_t num_groups);

  void Add(int group, int label, double positive_probability);

  std::vector<std::array<double, 2>> rows;
  std::vector<std::array<double, 2>> positives;
};

EvalReport ReportFromTally(const EvalTally& tally,
                           const std::vector<std::string>& groups,
                           const LossSpec& loss, const EvalOptions& options);

// P[prediction = 1] of every row under `policy`. Throws UnknownGroupError.
std::vector<double> PositiveProbabilities(const ThresholdPolicy& policy,
                                          const LabeledPredictions& data);

}  // namespace eqodds

#endif  // EQODDS_TALLY_H_
