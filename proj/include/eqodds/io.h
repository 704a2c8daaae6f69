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

// JSON and CSV artifacts. Metrics are rounded to 12 significant digits;
// thresholds keep full precision because they are compared against scores.

#ifndef EQODDS_IO_H_
#define EQODDS_IO_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "eqodds/analysis.h"
#include "eqodds/policy.h"
#include "eqodds/solver.h"
#include "json.hpp"

namespace eqodds {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// {schema_version, alpha_requested (null when unconstrained), expected_loss,
//  certified_alpha, global_point, groups: [{group, point, mixture:
//  [{threshold, weight}]}]}. `policy` supplies the mixture thresholds.
Json SolutionToJson(const RelaxedSolution& solution,
                    const ThresholdPolicy& policy);

struct RecordedSolution {
  ThresholdPolicy policy;
  std::optional<double> alpha_requested;
  double expected_loss = 0.0;
  double certified_alpha = 0.0;
};

// Throws SchemaError on a malformed document.
RecordedSolution SolutionFromJson(const Json& doc, std::uint64_t seed);
RecordedSolution LoadSolutionFile(const std::string& path, std::uint64_t seed);

Json EvalReportToJson(const EvalReport& report,
                      const std::optional<BootstrapIntervals>& ci);

Json SelectionToJson(const ModelSelection& selection);

// Columns row_index, group, score, prediction, threshold_drawn.
void WritePredictionsCsv(const LabeledPredictions& data,
                         std::span<const PredictionOutcome> outcomes,
                         std::ostream& out);

}  // namespace eqodds

#endif  // EQODDS_IO_H_
