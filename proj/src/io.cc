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

#include "eqodds/io.h"

#include <cmath>
#include <fstream>
#include <ostream>

#include "eqodds/errors.h"
#include "eqodds/format.h"

namespace eqodds {
namespace {

Json Metric(double value) {
  if (std::isnan(value)) return nullptr;
  return RoundSignificant(value);
}

Json PointJson(RocPoint point) {
  return Json::array({Metric(point.fpr), Metric(point.tpr)});
}

Json ThresholdJson(Threshold threshold) {
  if (threshold.is_sentinel()) return threshold.ToString();
  return threshold.value();
}

Threshold ThresholdFromJson(const Json& value) {
  if (value.is_number()) return Threshold::At(value.get<double>());
  if (value.is_string()) {
    if (auto parsed = Threshold::FromString(value.get<std::string>())) {
      return *parsed;
    }
  }
  throw SchemaError("invalid threshold " + value.dump());
}

const Json& Field(const Json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw SchemaError(std::string("solution is missing '") + key + "'");
  }
  return object.at(key);
}

double NumberField(const Json& object, const char* key) {
  const Json& value = Field(object, key);
  if (!value.is_number()) {
    throw SchemaError(std::string("'") + key + "' must be a number");
  }
  return value.get<double>();
}

Json IntervalJson(const PercentileInterval& interval) {
  return Json{{"p2_5", Metric(interval.p2_5)},
              {"p97_5", Metric(interval.p97_5)}};
}

}  // namespace

Json SolutionToJson(const RelaxedSolution& solution,
                    const ThresholdPolicy& policy) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["alpha_requested"] = std::isinf(solution.alpha_requested)
                               ? Json(nullptr)
                               : Metric(solution.alpha_requested);
  doc["expected_loss"] = Metric(solution.expected_loss);
  doc["certified_alpha"] = Metric(solution.certified_alpha);
  doc["global_point"] = PointJson(solution.global_point);
  Json groups = Json::array();
  for (std::size_t s = 0; s < solution.groups.size(); ++s) {
    Json mixture = Json::array();
    for (const auto& entry : policy.ForGroup(solution.groups[s])) {
      mixture.push_back({{"threshold", ThresholdJson(entry.threshold)},
                         {"weight", Metric(entry.weight)}});
    }
    groups.push_back({{"group", solution.groups[s]},
                      {"point", PointJson(solution.group_points[s])},
                      {"mixture", std::move(mixture)}});
  }
  doc["groups"] = std::move(groups);
  return doc;
}

RecordedSolution SolutionFromJson(const Json& doc, std::uint64_t seed) {
  if (!doc.is_object()) throw SchemaError("solution must be a JSON object");
  const Json& version = Field(doc, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw SchemaError("unsupported schema_version " + version.dump());
  }
  RecordedSolution recorded;
  const Json& alpha = Field(doc, "alpha_requested");
  if (!alpha.is_null()) {
    if (!alpha.is_number()) throw SchemaError("'alpha_requested' malformed");
    recorded.alpha_requested = alpha.get<double>();
  }
  recorded.expected_loss = NumberField(doc, "expected_loss");
  recorded.certified_alpha = NumberField(doc, "certified_alpha");

  const Json& groups = Field(doc, "groups");
  if (!groups.is_array() || groups.empty()) {
    throw SchemaError("'groups' must be a nonempty array");
  }
  std::vector<std::string> names;
  std::vector<std::vector<WeightedThreshold>> per_group;
  for (const Json& group : groups) {
    const Json& name = Field(group, "group");
    if (!name.is_string()) throw SchemaError("group names must be strings");
    const Json& mixture = Field(group, "mixture");
    if (!mixture.is_array() || mixture.empty()) {
      throw SchemaError("group '" + name.get<std::string>() +
                        "' has an empty mixture");
    }
    std::vector<WeightedThreshold> entries;
    for (const Json& entry : mixture) {
      entries.push_back({ThresholdFromJson(Field(entry, "threshold")),
                         NumberField(entry, "weight")});
    }
    names.push_back(name.get<std::string>());
    per_group.push_back(std::move(entries));
  }
  try {
    recorded.policy =
        ThresholdPolicy::Create(std::move(names), std::move(per_group), seed);
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  return recorded;
}

RecordedSolution LoadSolutionFile(const std::string& path,
                                  std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open solution '" + path + "'");
  Json doc = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw SchemaError("solution '" + path + "' is not valid JSON");
  }
  return SolutionFromJson(doc, seed);
}

Json EvalReportToJson(const EvalReport& report,
                      const std::optional<BootstrapIntervals>& ci) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["n"] = report.n;
  doc["accuracy"] = Metric(report.accuracy);
  doc["expected_loss"] = Metric(report.expected_loss);
  doc["violation"] = Metric(report.violation);
  Json groups = Json::array();
  for (std::size_t s = 0; s < report.groups.size(); ++s) {
    groups.push_back({{"group", report.groups[s]},
                      {"fpr", Metric(report.per_group_rates[s].fpr)},
                      {"tpr", Metric(report.per_group_rates[s].tpr)}});
  }
  doc["groups"] = std::move(groups);
  if (ci) {
    doc["ci"] = {{"accuracy", IntervalJson(ci->accuracy)},
                 {"violation", IntervalJson(ci->violation)},
                 {"expected_loss", IntervalJson(ci->expected_loss)}};
  }
  return doc;
}

Json SelectionToJson(const ModelSelection& selection) {
  Json candidates = Json::array();
  for (const auto& candidate : selection.candidates) {
    candidates.push_back(
        {{"model_id", candidate.model_id},
         {"unprocessed_accuracy", Metric(candidate.unprocessed_accuracy)},
         {"unprocessed_violation", Metric(candidate.unprocessed_violation)}});
  }
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["candidates"] = std::move(candidates);
  doc["winner"] = selection.winner;
  return doc;
}

void WritePredictionsCsv(const LabeledPredictions& data,
                         std::span<const PredictionOutcome> outcomes,
                         std::ostream& out) {
  out << "row_index,group,score,prediction,threshold_drawn\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << i << ',' << data.group_name(data.group_id(i)) << ','
        << FormatRoundTrip(data.score(i)) << ',' << outcomes[i].prediction
        << ',' << outcomes[i].threshold.ToString() << '\n';
  }
}

}  // namespace eqodds
